#include "curvhom/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "curvhom/error.hpp"

namespace curvhom {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Appends all exponent vectors of exactly degree `deg` in nvars variables,
// in reverse-lexicographic order.
void enumerate_degree(int nvars, int deg, std::vector<std::uint8_t>& out) {
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == nvars - 1) {
      e[static_cast<std::size_t>(var)] = remaining;
      for (int v : e) out.push_back(static_cast<std::uint8_t>(v));
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[static_cast<std::size_t>(var)] = k;
      self(self, var + 1, remaining - k);
    }
  };
  if (nvars == 0) return;
  rec(rec, 0, deg);
}

}  // namespace

JetSpace::JetSpace(int nvars, int max_order) : nvars_(nvars), max_order_(max_order) {
  require(nvars >= 1 && max_order >= 0, ErrorKind::InvalidArgument,
          "jet space needs nvars >= 1 and max_order >= 0");
  require(max_order < 16, ErrorKind::InvalidArgument, "jet order too large");
  for (int d = 0; d <= max_order; ++d) {
    enumerate_degree(nvars, d, exps_);
    prefix_.push_back(exps_.size() / static_cast<std::size_t>(nvars));
  }
  const std::size_t count = prefix_.back();
  degree_.resize(count);
  fact_.resize(count);
  std::vector<int> alpha(static_cast<std::size_t>(nvars));
  for (std::size_t i = 0; i < count; ++i) {
    int deg = 0;
    double f = 1.0;
    for (int v = 0; v < nvars; ++v) {
      const int e = exps_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)];
      alpha[static_cast<std::size_t>(v)] = e;
      deg += e;
      f *= factorial(e);
    }
    degree_[i] = deg;
    fact_[i] = f;
    lookup_.emplace(key(alpha), i);
  }

  mul_.resize(count);
  std::vector<int> sum(static_cast<std::size_t>(nvars));
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t lim = size(max_order - degree_[i]);
    mul_[i].resize(lim);
    for (std::size_t j = 0; j < lim; ++j) {
      for (int v = 0; v < nvars; ++v)
        sum[static_cast<std::size_t>(v)] =
            exps_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)] +
            exps_[j * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)];
      mul_[i][j] = lookup_.at(key(sum));
    }
  }

  deriv_.resize(count * static_cast<std::size_t>(nvars));
  for (std::size_t i = 0; i < count; ++i)
    for (int v = 0; v < nvars; ++v) {
      auto& d = deriv_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)];
      const int e = exps_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)];
      if (e == 0) {
        d = {0, 0.0};
        continue;
      }
      for (int w = 0; w < nvars; ++w)
        alpha[static_cast<std::size_t>(w)] =
            exps_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(w)];
      --alpha[static_cast<std::size_t>(v)];
      d = {lookup_.at(key(alpha)), static_cast<double>(e)};
    }
}

std::uint64_t JetSpace::key(std::span<const int> alpha) const {
  std::uint64_t k = 0;
  for (int a : alpha) k = k * 16u + static_cast<std::uint64_t>(a);
  return k;
}

std::shared_ptr<const JetSpace> JetSpace::make(int nvars, int max_order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, max_order}];
  if (!slot) slot = std::make_shared<const JetSpace>(nvars, max_order);
  return slot;
}

std::size_t JetSpace::index_of(std::span<const int> alpha) const {
  require(static_cast<int>(alpha.size()) == nvars_, ErrorKind::DimensionMismatch,
          "multi-index length != jet variable count");
  int deg = 0;
  for (int a : alpha) {
    require(a >= 0, ErrorKind::InvalidArgument, "negative multi-index entry");
    deg += a;
  }
  if (deg > max_order_)
    fail(ErrorKind::DerivativeOrder, "requested derivative order " + std::to_string(deg) +
                                         " exceeds jet order " + std::to_string(max_order_));
  return lookup_.at(key(alpha));
}

Jet::Jet(JetSpacePtr space, int order) : space_(std::move(space)), order_(order) {
  require(space_ != nullptr, ErrorKind::InvalidArgument, "null jet space");
  require(order >= 0 && order <= space_->max_order(), ErrorKind::DerivativeOrder,
          "jet order outside the space's range");
  c_.assign(space_->size(order), 0.0);
}

Jet Jet::constant(JetSpacePtr space, int order, double v) {
  Jet j(std::move(space), order);
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(JetSpacePtr space, int order, int var, double at) {
  Jet j(space, order);
  j.c_[0] = at;
  if (order >= 1) {
    std::vector<int> alpha(static_cast<std::size_t>(space->nvars()), 0);
    alpha[static_cast<std::size_t>(var)] = 1;
    j.c_[space->index_of(alpha)] = 1.0;
  }
  return j;
}

double Jet::partial(std::span<const int> alpha) const {
  int deg = 0;
  for (int a : alpha) deg += a;
  if (deg > order_)
    fail(ErrorKind::DerivativeOrder, "partial of order " + std::to_string(deg) +
                                         " from a jet of order " + std::to_string(order_));
  const std::size_t idx = space_->index_of(alpha);
  return c_[idx] * space_->factorial_weight(idx);
}

double Jet::partial_along(std::span<const int> vars) const {
  std::vector<int> alpha(static_cast<std::size_t>(space_->nvars()), 0);
  for (int v : vars) ++alpha[static_cast<std::size_t>(v)];
  return partial(alpha);
}

bool Jet::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](double v) { return v == 0.0; });
}

Jet Jet::derivative(int var) const {
  require(order_ >= 1, ErrorKind::DerivativeOrder,
          "cannot differentiate a jet of order 0");
  Jet out(space_, order_ - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const auto& d = space_->derivative(i, var);
    if (d.factor != 0.0) out.c_[d.target] += d.factor * c_[i];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  require(order <= order_, ErrorKind::DerivativeOrder,
          "truncation cannot raise the order");
  Jet out(space_, order);
  std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order_ < order_) {
    order_ = o.order_;
    c_.resize(o.c_.size());
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order_ < order_) {
    order_ = o.order_;
    c_.resize(o.c_.size());
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

void Jet::add_product(const Jet& a, const Jet& b, double scale) {
  const int order = std::min({order_, a.order_, b.order_});
  if (order < order_) {
    order_ = order;
    c_.resize(space_->size(order));
  }
  const std::size_t na = space_->size(order);
  for (std::size_t i = 0; i < na; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const std::size_t lim = space_->size(order - space_->degree(i));
    const auto& row = [&]() -> const JetSpace& { return *space_; }();
    for (std::size_t j = 0; j < lim; ++j) {
      const double bj = b.c_[j];
      if (bj == 0.0) continue;
      c_[row.product(i, j)] += scale * ai * bj;
    }
  }
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.space_, std::min(a.order_, b.order_));
  out.add_product(a, b);
  return out;
}

Jet compose_coordinate(const ScalarProfile& psi, JetSpacePtr space, int order,
                       int var, double at) {
  Jet j(space, order);
  std::vector<int> alpha(static_cast<std::size_t>(space->nvars()), 0);
  double fact = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 0) fact *= m;
    alpha[static_cast<std::size_t>(var)] = m;
    j.coeffs()[space->index_of(alpha)] = psi.derivative(at, m) / fact;
  }
  return j;
}

Jet taylor_expand(const MultiProfile& f, std::span<const double> x0,
                  std::span<const int> shift, JetSpacePtr space, int order,
                  std::span<const int> vars) {
  const int p = f.nvars();
  require(static_cast<int>(vars.size()) == p && static_cast<int>(shift.size()) == p,
          ErrorKind::DimensionMismatch, "taylor_expand argument sizes");
  Jet j(space, order);
  std::vector<int> local(static_cast<std::size_t>(p));
  std::vector<int> alpha(static_cast<std::size_t>(space->nvars()));
  for (std::size_t idx = 0; idx < space->size(order); ++idx) {
    auto e = space->exponents(idx);
    // Only monomials supported on the profile's variables contribute.
    std::fill(alpha.begin(), alpha.end(), 0);
    for (int v = 0; v < space->nvars(); ++v) alpha[static_cast<std::size_t>(v)] = e[static_cast<std::size_t>(v)];
    int covered = 0;
    for (int i = 0; i < p; ++i) {
      local[static_cast<std::size_t>(i)] =
          shift[static_cast<std::size_t>(i)] + alpha[static_cast<std::size_t>(vars[static_cast<std::size_t>(i)])];
      covered += alpha[static_cast<std::size_t>(vars[static_cast<std::size_t>(i)])];
    }
    if (covered != space->degree(idx)) continue;
    j.coeffs()[idx] = f.partial(x0, local) / space->factorial_weight(idx);
  }
  return j;
}

}  // namespace curvhom
