#include "curvhom/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvhom {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void check_same_shape(const Tensor& a, const Tensor& b) {
  require(a.dim() == b.dim() && a.variances() == b.variances(),
          ErrorKind::DimensionMismatch, "tensor shapes differ");
}

}  // namespace

Tensor::Tensor(int dim, std::vector<Variance> variances)
    : dim_(dim), variances_(std::move(variances)) {
  require(dim >= 0, ErrorKind::InvalidArgument, "negative tensor dimension");
  data_.assign(ipow(dim, rank()), 0.0);
}

Tensor Tensor::covariant(int dim, int rank) {
  return Tensor(dim, std::vector<Variance>(static_cast<std::size_t>(rank),
                                           Variance::Covariant));
}

bool Tensor::all_covariant() const {
  return std::all_of(variances_.begin(), variances_.end(),
                     [](Variance v) { return v == Variance::Covariant; });
}

std::size_t Tensor::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank())
    fail(ErrorKind::DimensionMismatch, "index tuple length " + std::to_string(idx.size()) +
                                           " != tensor rank " + std::to_string(rank()));
  std::size_t off = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) fail(ErrorKind::InvalidArgument, "tensor index out of range");
    off = off * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return off;
}

void Tensor::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int s = rank() - 1; s >= 0; --s) {
    idx[static_cast<std::size_t>(s)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Tensor::evaluate(std::span<const Vector> args) const {
  require(static_cast<int>(args.size()) == rank(), ErrorKind::DimensionMismatch,
          "wrong number of arguments");
  require(all_covariant(), ErrorKind::InvalidArgument,
          "evaluate needs a covariant tensor");
  // Contract one slot at a time from the last slot inward.
  std::vector<double> buf(data_.begin(), data_.end());
  std::size_t len = buf.size();
  for (int s = rank() - 1; s >= 0; --s) {
    const Vector& v = args[static_cast<std::size_t>(s)];
    require(v.size() == dim_, ErrorKind::DimensionMismatch, "argument dimension");
    std::size_t outer = len / static_cast<std::size_t>(dim_);
    std::vector<double> next(outer, 0.0);
    for (std::size_t i = 0; i < outer; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dim_; ++j)
        acc += buf[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j)] * v(j);
      next[i] = acc;
    }
    buf = std::move(next);
    len = outer;
  }
  return buf.empty() ? 0.0 : buf[0];
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b);
  double m = 0.0;
  auto ca = a.components();
  auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

bool approx_equal(const Tensor& a, const Tensor& b, double tol) {
  if (a.dim() != b.dim() || a.variances() != b.variances()) return false;
  return max_abs_diff(a, b) <= tol;
}

Tensor contract(const Tensor& t, int slot_a, int slot_b,
                const BilinearForm& metric) {
  const int k = t.rank();
  require(slot_a >= 0 && slot_a < k && slot_b >= 0 && slot_b < k,
          ErrorKind::InvalidArgument, "contraction slot out of range");
  require(slot_a != slot_b, ErrorKind::InvalidArgument,
          "cannot contract a slot with itself");
  require(metric.dim() == t.dim(), ErrorKind::DimensionMismatch,
          "metric dimension differs from tensor dimension");
  if (slot_a > slot_b) std::swap(slot_a, slot_b);

  const Variance va = t.variances()[static_cast<std::size_t>(slot_a)];
  const Variance vb = t.variances()[static_cast<std::size_t>(slot_b)];
  const int n = t.dim();
  Matrix weight;
  if (va != vb) {
    weight = Matrix::Identity(n, n);
  } else if (va == Variance::Covariant) {
    weight = metric.inverse();
  } else {
    weight = metric.matrix();
  }

  std::vector<Variance> rest;
  for (int s = 0; s < k; ++s)
    if (s != slot_a && s != slot_b) rest.push_back(t.variances()[static_cast<std::size_t>(s)]);
  Tensor out(n, rest);

  std::vector<int> full(static_cast<std::size_t>(k));
  std::vector<int> reduced(static_cast<std::size_t>(k - 2));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out.unflatten(flat, reduced);
    for (int s = 0, r = 0; s < k; ++s)
      if (s != slot_a && s != slot_b) full[static_cast<std::size_t>(s)] = reduced[static_cast<std::size_t>(r++)];
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double w = weight(i, j);
        if (w == 0.0) continue;
        full[static_cast<std::size_t>(slot_a)] = i;
        full[static_cast<std::size_t>(slot_b)] = j;
        acc += w * t.at(full);
      }
    out.components()[flat] = acc;
  }
  return out;
}

Tensor pullback(const Tensor& t, const LinearMap& m) {
  require(t.all_covariant(), ErrorKind::InvalidArgument,
          "pullback needs all slots covariant");
  require(m.target_dim() == t.dim(), ErrorKind::DimensionMismatch,
          "map target dimension differs from tensor dimension");
  const int n = t.dim();
  const int src = m.source_dim();
  const Matrix& a = m.matrix();
  // Transform one slot at a time: T'(..., j, ...) = sum_i T(..., i, ...) a(i, j).
  std::vector<double> cur(t.components().begin(), t.components().end());
  std::vector<std::size_t> shape(static_cast<std::size_t>(t.rank()), static_cast<std::size_t>(n));
  for (int s = 0; s < t.rank(); ++s) {
    std::size_t before = 1, after = 1;
    for (int q = 0; q < s; ++q) before *= shape[static_cast<std::size_t>(q)];
    for (int q = s + 1; q < t.rank(); ++q) after *= shape[static_cast<std::size_t>(q)];
    std::vector<double> next(before * static_cast<std::size_t>(src) * after, 0.0);
    for (std::size_t b = 0; b < before; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < src; ++j) {
          double w = a(i, j);
          if (w == 0.0) continue;
          const double* in = &cur[(b * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)) * after];
          double* o = &next[(b * static_cast<std::size_t>(src) + static_cast<std::size_t>(j)) * after];
          for (std::size_t r = 0; r < after; ++r) o[r] += w * in[r];
        }
    cur = std::move(next);
    shape[static_cast<std::size_t>(s)] = static_cast<std::size_t>(src);
  }
  Tensor out = Tensor::covariant(src, t.rank());
  std::copy(cur.begin(), cur.end(), out.components().begin());
  return out;
}

Tensor to_tensor(const BilinearForm& g) {
  Tensor t = Tensor::covariant(g.dim(), 2);
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) t(i, j) = g(i, j);
  return t;
}

Tensor outer(const Tensor& a, const Tensor& b) {
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch,
          "outer product needs equal dimensions");
  std::vector<Variance> v = a.variances();
  v.insert(v.end(), b.variances().begin(), b.variances().end());
  Tensor out(a.dim(), v);
  auto ca = a.components();
  auto cb = b.components();
  auto co = out.components();
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j) co[i * cb.size() + j] = ca[i] * cb[j];
  return out;
}

}  // namespace curvhom
