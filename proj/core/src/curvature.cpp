#include "curvhom/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "engine_kernels.hpp"

namespace curvhom {

namespace {

std::vector<double> flat(const Tensor& t) {
  return std::vector<double>(t.components().begin(), t.components().end());
}

Tensor from_flat(int n, std::vector<Variance> v, const std::vector<double>& data) {
  Tensor t(n, std::move(v));
  std::copy(data.begin(), data.end(), t.components().begin());
  return t;
}

Tensor connection_from_flat(int n, const std::vector<double>& data) {
  return from_flat(n, {Variance::Covariant, Variance::Covariant, Variance::Contravariant}, data);
}

std::vector<double> flat_matrix(const Matrix& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i * m.cols() + j)] = m(i, j);
  return out;
}

void check_connection(const Tensor& gamma) {
  require(gamma.rank() == 3, ErrorKind::DimensionMismatch, "connection must have rank 3");
}

}  // namespace

Christoffels christoffels(const BilinearForm& g, const Tensor& dg) {
  const int n = g.dim();
  require(dg.dim() == n && dg.rank() == 3, ErrorKind::DimensionMismatch,
          "metric partials must be a rank-3 array over the metric's dimension");
  const auto ginv = flat_matrix(g.inverse());
  const auto first = detail::first_kind(n, flat(dg));
  const auto second = detail::second_kind(n, ginv, first, 0.0);
  return {from_flat(n, {Variance::Covariant, Variance::Covariant, Variance::Covariant}, first),
          connection_from_flat(n, second)};
}

Tensor riemann(const BilinearForm& g, const Tensor& dg, const Tensor& d2g) {
  const int n = g.dim();
  require(d2g.dim() == n && d2g.rank() == 4, ErrorKind::DimensionMismatch,
          "second metric partials must be a rank-4 array");
  const auto ch = christoffels(g, dg);
  const auto N = static_cast<std::size_t>(n);
  // d_a Gamma_bcd = 1/2 (d_a d_b g_cd + d_a d_c g_bd - d_a d_d g_bc)
  std::vector<double> dfirst(N * N * N * N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          dfirst[((static_cast<std::size_t>(a) * N + b) * N + c) * N + d] =
              0.5 * (d2g(c, d, a, b) + d2g(b, d, a, c) - d2g(b, c, a, d));
  const auto R = detail::riemann_kernel(n, dfirst, flat(ch.first), flat(ch.second));
  return from_flat(n, std::vector<Variance>(4, Variance::Covariant), R);
}

Tensor covariant_derivative(const Tensor& gamma, const Tensor& T, const Tensor& dT) {
  check_connection(gamma);
  require(T.all_covariant() && dT.all_covariant(), ErrorKind::InvalidArgument,
          "covariant derivative expects covariant tensors");
  require(dT.rank() == T.rank() + 1 && T.dim() == gamma.dim() && dT.dim() == gamma.dim(),
          ErrorKind::DimensionMismatch, "covariant derivative input shapes");
  const auto out = detail::covariant_derivative_kernel(T.dim(), T.rank(), flat(T), flat(dT),
                                                       flat(gamma));
  return from_flat(T.dim(), dT.variances(), out);
}

Tensor covariant_derivative_R(const Tensor& gamma, const Tensor& R, const Tensor& dR) {
  require(R.rank() == 4, ErrorKind::DimensionMismatch, "R must have rank 4");
  return covariant_derivative(gamma, R, dR);
}

Tensor second_covariant_derivative_R(const Tensor& gamma, const Tensor& nablaR,
                                     const Tensor& d_nablaR) {
  require(nablaR.rank() == 5, ErrorKind::DimensionMismatch, "nabla R must have rank 5");
  return covariant_derivative(gamma, nablaR, d_nablaR);
}

std::vector<Jet> inverse_metric_jets(const MetricJets& g) {
  const int n = g.dim();
  const auto N = static_cast<std::size_t>(n);
  const int K = g.order();
  const auto& space = g.space();
  const Matrix g0inv = g.value().inverse();
  const Jet zero(space, K);

  // M = -g0^{-1} (g - g0) has no constant term, so the Neumann series
  // sum_m M^m g0^{-1} terminates after K terms at jet order K.
  std::vector<Jet> M(N * N, zero);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t l = 0; l < N; ++l) {
      Jet dev = g.jet(static_cast<int>(i), static_cast<int>(l));
      dev.coeffs()[0] = 0.0;
      if (dev.is_zero()) continue;
      for (std::size_t k = 0; k < N; ++k) {
        const double c = g0inv(static_cast<int>(k), static_cast<int>(i));
        if (c == 0.0) continue;
        M[k * N + l] += dev * (-c);
      }
    }
  std::vector<Jet> term(N * N, zero), sum(N * N, zero);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      term[i * N + j].coeffs()[0] = g0inv(static_cast<int>(i), static_cast<int>(j));
      sum[i * N + j] = term[i * N + j];
    }
  for (int m = 1; m <= K; ++m) {
    std::vector<Jet> next(N * N, zero);
    bool any = false;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Jet& a = M[i * N + k];
        if (a.is_zero()) continue;
        for (std::size_t j = 0; j < N; ++j) {
          const Jet& b = term[k * N + j];
          if (b.is_zero()) continue;
          next[i * N + j].add_product(a, b);
          any = true;
        }
      }
    if (!any) break;
    for (std::size_t i = 0; i < N * N; ++i) sum[i] += next[i];
    term = std::move(next);
  }
  return sum;
}

namespace {

std::vector<double> values(const std::vector<Jet>& jets) {
  std::vector<double> out;
  out.reserve(jets.size());
  for (const auto& j : jets) out.push_back(j.value());
  return out;
}

std::vector<Jet> differentiate_all(const std::vector<Jet>& t, int n) {
  // Appends a trailing derivative slot.
  std::vector<Jet> out;
  out.reserve(t.size() * static_cast<std::size_t>(n));
  for (const auto& j : t)
    for (int e = 0; e < n; ++e) out.push_back(j.derivative(e));
  return out;
}

std::vector<Jet> truncate_all(const std::vector<Jet>& t, int order) {
  std::vector<Jet> out;
  out.reserve(t.size());
  for (const auto& j : t) out.push_back(j.truncated(std::min(order, j.order())));
  return out;
}

}  // namespace

CurvaturePackage curvature_package(const MetricJets& mj, const Vector& P, int depth) {
  require(depth >= 0 && depth <= 2, ErrorKind::InvalidArgument, "depth must be 0, 1 or 2");
  require(mj.order() >= depth + 2, ErrorKind::DerivativeOrder,
          "derivative depth unavailable: metric jets of order " +
              std::to_string(mj.order()) + " cannot produce depth " + std::to_string(depth));
  const int n = mj.dim();
  const auto N = static_cast<std::size_t>(n);
  const int K = depth + 2;

  const auto ginv = truncate_all(inverse_metric_jets(mj), K - 1);
  std::vector<Jet> dg;
  dg.reserve(N * N * N);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) dg.push_back(mj.jet(a, b).truncated(K).derivative(c));
  const auto first = detail::first_kind(n, dg);
  const auto second = detail::second_kind(n, ginv, first, Jet(mj.space(), K - 1));

  std::vector<Jet> dfirst;
  dfirst.reserve(N * N * N * N);
  for (int a = 0; a < n; ++a)
    for (const auto& j : first) dfirst.push_back(j.derivative(a));
  const auto R = detail::riemann_kernel(n, dfirst, first, second);

  CurvaturePackage pkg;
  pkg.point = P;
  pkg.g = mj.value();
  pkg.gamma = connection_from_flat(n, values(second));
  pkg.R = from_flat(n, std::vector<Variance>(4, Variance::Covariant), values(R));
  if (depth >= 1) {
    const auto nablaR =
        detail::covariant_derivative_kernel(n, 4, R, differentiate_all(R, n), second);
    pkg.nablaR = from_flat(n, std::vector<Variance>(5, Variance::Covariant), values(nablaR));
    if (depth >= 2) {
      const auto nabla2R = detail::covariant_derivative_kernel(
          n, 5, nablaR, differentiate_all(nablaR, n), second);
      pkg.nabla2R = from_flat(n, std::vector<Variance>(6, Variance::Covariant), values(nabla2R));
    }
  }
  return pkg;
}

CurvaturePackage curvature_package(const FamilySpec& spec, const Vector& P, int depth) {
  require(depth >= 0 && depth <= 2, ErrorKind::InvalidArgument, "depth must be 0, 1 or 2");
  if (depth + 2 > spec.max_metric_order())
    fail(ErrorKind::DerivativeOrder, "derivative depth unavailable: " + spec.name() +
                                         " supports depth <= " +
                                         std::to_string(spec.max_metric_order() - 2));
  return curvature_package(metric_jets(spec, P, depth + 2), P, depth);
}

Tensor christoffel_symbols(const FamilySpec& spec, const Vector& P) {
  const auto mj = metric_jets(spec, P, 1);
  const int n = mj.dim();
  const auto ginv = flat_matrix(mj.value().inverse());
  std::vector<std::size_t> linear(static_cast<std::size_t>(n));
  std::vector<int> alpha(static_cast<std::size_t>(n), 0);
  for (int c = 0; c < n; ++c) {
    alpha[static_cast<std::size_t>(c)] = 1;
    linear[static_cast<std::size_t>(c)] = mj.space()->index_of(alpha);
    alpha[static_cast<std::size_t>(c)] = 0;
  }
  std::vector<double> dg;
  dg.reserve(static_cast<std::size_t>(n * n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto coeffs = mj.jet(a, b).coeffs();
      for (int c = 0; c < n; ++c) dg.push_back(coeffs[linear[static_cast<std::size_t>(c)]]);
    }
  const auto first = detail::first_kind(n, dg);
  return connection_from_flat(n, detail::second_kind(n, ginv, first, 0.0));
}

bool SymmetryReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

double SymmetryReport::max_violation() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.max_violation);
  return m;
}

namespace {

// Runs the identity functor over every index tuple of the first four slots,
// for every assignment of trailing slots.
template <class F>
double scan_violation(const Tensor& A, F&& identity) {
  const int n = A.dim();
  const int extra = A.rank() - 4;
  std::size_t tail_count = 1;
  for (int i = 0; i < extra; ++i) tail_count *= static_cast<std::size_t>(n);
  std::vector<int> idx(static_cast<std::size_t>(A.rank()));
  double worst = 0.0;
  for (std::size_t tail = 0; tail < tail_count; ++tail) {
    std::size_t rem = tail;
    for (int s = A.rank() - 1; s >= 4; --s) {
      idx[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) worst = std::max(worst, std::abs(identity(idx, a, b, c, d)));
  }
  return worst;
}

double get(const Tensor& A, std::vector<int>& idx, int a, int b, int c, int d) {
  idx[0] = a;
  idx[1] = b;
  idx[2] = c;
  idx[3] = d;
  return A.at(idx);
}

void add_four_identities(const Tensor& A, SymmetryReport& rep) {
  auto run = [&](const char* name, auto&& fn) {
    IdentityCheck c;
    c.name = name;
    c.max_violation = scan_violation(A, fn);
    c.pass = c.max_violation <= rep.tol * std::max(1.0, rep.scale);
    rep.checks.push_back(c);
  };
  run("antisymmetry_12", [&](std::vector<int>& i, int a, int b, int c, int d) {
    return get(A, i, a, b, c, d) + get(A, i, b, a, c, d);
  });
  run("antisymmetry_34", [&](std::vector<int>& i, int a, int b, int c, int d) {
    return get(A, i, a, b, c, d) + get(A, i, a, b, d, c);
  });
  run("pair_symmetry", [&](std::vector<int>& i, int a, int b, int c, int d) {
    return get(A, i, a, b, c, d) - get(A, i, c, d, a, b);
  });
  run("first_bianchi", [&](std::vector<int>& i, int a, int b, int c, int d) {
    return get(A, i, a, b, c, d) + get(A, i, b, c, a, d) + get(A, i, c, a, b, d);
  });
}

}  // namespace

SymmetryReport check_curvature_symmetries(const Tensor& A, double tol) {
  require(A.rank() == 4 && A.all_covariant(), ErrorKind::DimensionMismatch,
          "curvature symmetry check needs a covariant rank-4 tensor");
  SymmetryReport rep;
  rep.scale = A.max_abs();
  rep.tol = tol;
  add_four_identities(A, rep);
  return rep;
}

SymmetryReport check_nabla_symmetries(const Tensor& A1, double tol) {
  require(A1.rank() == 5 && A1.all_covariant(), ErrorKind::DimensionMismatch,
          "covariant-derivative symmetry check needs a covariant rank-5 tensor");
  SymmetryReport rep;
  rep.scale = A1.max_abs();
  rep.tol = tol;
  add_four_identities(A1, rep);
  const int n = A1.dim();
  double worst = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w)
          for (int v = 0; v < n; ++v)
            worst = std::max(worst, std::abs(A1(x, y, z, w, v) + A1(x, y, w, v, z) +
                                             A1(x, y, v, z, w)));
  rep.checks.push_back({"second_bianchi", worst, worst <= tol * std::max(1.0, rep.scale)});
  return rep;
}

nlohmann::json nonzero_components(const Tensor& t, double zero_tol) {
  auto arr = nlohmann::json::array();
  std::vector<int> idx(static_cast<std::size_t>(t.rank()));
  auto comps = t.components();
  for (std::size_t f = 0; f < comps.size(); ++f) {
    if (std::abs(comps[f]) <= zero_tol) continue;
    t.unflatten(f, idx);
    arr.push_back({{"index", idx}, {"value", comps[f]}});
  }
  return arr;
}

nlohmann::json to_json(const CurvaturePackage& pkg, double zero_tol) {
  nlohmann::json j;
  j["point"] = std::vector<double>(pkg.point.data(), pkg.point.data() + pkg.point.size());
  auto g = nlohmann::json::array();
  for (int a = 0; a < pkg.g.dim(); ++a) {
    std::vector<double> row(static_cast<std::size_t>(pkg.g.dim()));
    for (int b = 0; b < pkg.g.dim(); ++b) row[static_cast<std::size_t>(b)] = pkg.g(a, b);
    g.push_back(row);
  }
  j["g"] = g;
  j["gamma"] = nonzero_components(pkg.gamma, zero_tol);
  j["R"] = nonzero_components(pkg.R, zero_tol);
  if (pkg.nablaR) j["nablaR"] = nonzero_components(*pkg.nablaR, zero_tol);
  if (pkg.nabla2R) j["nabla2R"] = nonzero_components(*pkg.nabla2R, zero_tol);
  return j;
}

nlohmann::json to_json(const SymmetryReport& r) {
  nlohmann::json j;
  j["scale"] = r.scale;
  j["tol"] = r.tol;
  j["pass"] = r.pass();
  for (const auto& c : r.checks)
    j["identities"][c.name] = {{"max_violation", c.max_violation}, {"pass", c.pass}};
  return j;
}

}  // namespace curvhom
