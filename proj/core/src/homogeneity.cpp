#include "curvhom/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "curvhom/curvature.hpp"

namespace curvhom {

namespace {

Matrix hessian_at(const FamilySpec& spec, const Vector& P) {
  const int p = spec.size();
  const auto h = spec.f().hessian(std::span<const double>(P.data(), static_cast<std::size_t>(p)));
  Matrix H(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) H(i, j) = h[static_cast<std::size_t>(i * p + j)];
  return H;
}

void require_family(const FamilySpec& spec, FamilyKind kind, const char* what) {
  require(spec.kind() == kind, ErrorKind::InvalidArgument,
          std::string(what) + " is defined for family " +
              std::to_string(static_cast<int>(kind)) + " only");
}

// nabla R restricted to the x-block as a dense p^5 array.
std::vector<double> x_block_nablaR(const FamilySpec& spec, const Vector& P) {
  const auto pkg = curvature_package(spec, P, 1);
  const int p = spec.size();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p * p * p * p * p));
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int d = 0; d < p; ++d)
          for (int e = 0; e < p; ++e) out.push_back((*pkg.nablaR)(a, b, c, d, e));
  return out;
}

}  // namespace

double alpha1(const FamilySpec& spec, const Vector& P) {
  require_family(spec, FamilyKind::One, "alpha1");
  const int p = spec.size();
  const auto N = static_cast<std::size_t>(p);
  const Matrix H = hessian_at(spec, P);
  Eigen::LLT<Matrix> llt(H);
  require(llt.info() == Eigen::Success && BilinearForm::symmetrized(H).positive_definite(),
          ErrorKind::NotPositiveDefinite, "alpha1 needs a positive definite Hessian");
  // H^{-1} = xi^T xi with xi = L^{-1}; transform each slot by xi.
  const Matrix L = llt.matrixL();
  const Matrix xi = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));
  std::vector<double> t = x_block_nablaR(spec, P);
  for (int slot = 0; slot < 5; ++slot) {
    std::size_t hi = 1, lo = 1;
    for (int s = 0; s < slot; ++s) hi *= N;
    for (int s = slot + 1; s < 5; ++s) lo *= N;
    std::vector<double> next(t.size(), 0.0);
    for (std::size_t h = 0; h < hi; ++h)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t a = 0; a < N; ++a) {
          const double w = xi(static_cast<int>(i), static_cast<int>(a));
          if (w == 0.0) continue;
          for (std::size_t l = 0; l < lo; ++l)
            next[(h * N + i) * lo + l] += w * t[(h * N + a) * lo + l];
        }
    t = std::move(next);
  }
  double sum = 0.0;
  for (double v : t) sum += v * v;
  return sum;
}

double alpha1_bruteforce(const FamilySpec& spec, const Vector& P) {
  require_family(spec, FamilyKind::One, "alpha1");
  const int p = spec.size();
  const Matrix H = hessian_at(spec, P);
  require(BilinearForm::symmetrized(H).positive_definite(), ErrorKind::NotPositiveDefinite,
          "alpha1 needs a positive definite Hessian");
  const Matrix Hi = H.inverse();
  const auto t = x_block_nablaR(spec, P);
  auto at = [&](int a, int b, int c, int d, int e) {
    return t[static_cast<std::size_t>((((a * p + b) * p + c) * p + d) * p + e)];
  };
  double sum = 0.0;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int d = 0; d < p; ++d)
          for (int e = 0; e < p; ++e) {
            const double left = at(a, b, c, d, e);
            if (left == 0.0) continue;
            for (int s = 0; s < p; ++s)
              for (int tt = 0; tt < p; ++tt)
                for (int u = 0; u < p; ++u)
                  for (int v = 0; v < p; ++v)
                    for (int w = 0; w < p; ++w)
                      sum += Hi(a, s) * Hi(b, tt) * Hi(c, u) * Hi(d, v) * Hi(e, w) * left *
                             at(s, tt, u, v, w);
          }
  return sum;
}

double alpha2(const FamilySpec& spec, const Vector& P) {
  require_family(spec, FamilyKind::Two, "alpha2");
  const auto pkg = curvature_package(spec, P, 1);
  const int s = spec.size();
  const Coords2 c{s};
  double sum = 0.0;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k)
        for (int l = 0; l < s; ++l)
          for (int n = 0; n < s; ++n) {
            const double v = (*pkg.nablaR)(c.u(i), c.u(j), c.u(k), c.u(l), c.u(n));
            sum += v * v;
          }
  return sum;
}

std::string to_string(KPCase c) {
  switch (c) {
    case KPCase::BothNonzero: return "BothNonzero";
    case KPCase::OnlyQuartic: return "OnlyQuartic";
    case KPCase::OnlyMixed: return "OnlyMixed";
    case KPCase::Empty: return "Empty";
  }
  return "unknown";
}

KPCase kp_case(bool quartic_nonzero, bool mixed_nonzero) {
  if (quartic_nonzero) return mixed_nonzero ? KPCase::BothNonzero : KPCase::OnlyQuartic;
  return mixed_nonzero ? KPCase::OnlyMixed : KPCase::Empty;
}

KPClass kp_classify(const FamilySpec& spec, const Vector& P, double zero_tol) {
  require_family(spec, FamilyKind::Three, "K_P classification");
  check_point(spec, P);
  const Coords3 c = spec.coords3();
  KPClass k;
  k.quartic = spec.psi().derivative(P(c.u(spec.size() - 1)), 4);
  k.mixed = P(c.u(spec.size() - 2));
  k.quartic_nonzero = std::abs(k.quartic) > zero_tol;
  k.mixed_nonzero = std::abs(k.mixed) > zero_tol;
  k.label = kp_case(k.quartic_nonzero, k.mixed_nonzero);
  auto near = [zero_tol](double v) {
    const double a = std::abs(v);
    return a > 0.1 * zero_tol && a < 10.0 * zero_tol;
  };
  k.marginal = near(k.quartic) || near(k.mixed);
  return k;
}

std::vector<int> kp_support(const FamilySpec& spec, const Vector& P, double zero_tol) {
  require_family(spec, FamilyKind::Three, "K_P support");
  const auto pkg = curvature_package(spec, P, 2);
  const Tensor& t = *pkg.nabla2R;
  std::set<int> last;
  std::vector<int> idx(6);
  auto comps = t.components();
  for (std::size_t f = 0; f < comps.size(); ++f) {
    if (std::abs(comps[f]) <= zero_tol) continue;
    t.unflatten(f, idx);
    last.insert(idx[5]);
  }
  return {last.begin(), last.end()};
}

KPComparison kp_scan(const FamilySpec& spec, const Vector& P, const Vector& Q, double zero_tol) {
  KPComparison out;
  out.p = kp_classify(spec, P, zero_tol);
  out.q = kp_classify(spec, Q, zero_tol);
  out.differ = out.p.label != out.q.label;
  return out;
}

std::string to_string(Invariant inv) { return inv == Invariant::Alpha1 ? "alpha1" : "alpha2"; }

ScanReport constancy_scan(Invariant inv, const FamilySpec& spec, const std::vector<Vector>& points,
                          double tol) {
  require(points.size() >= 2, ErrorKind::InvalidArgument, "a constancy scan needs two points");
  require((inv == Invariant::Alpha1) == (spec.kind() == FamilyKind::One) &&
              (inv == Invariant::Alpha2) == (spec.kind() == FamilyKind::Two),
          ErrorKind::InvalidArgument,
          to_string(inv) + " does not apply to " + spec.name());
  ScanReport rep;
  rep.invariant = to_string(inv);
  rep.points = points;
  rep.tol = tol;
  for (const auto& P : points)
    rep.values.push_back(inv == Invariant::Alpha1 ? alpha1(spec, P) : alpha2(spec, P));
  const auto [lo, hi] = std::minmax_element(rep.values.begin(), rep.values.end());
  rep.spread = *hi - *lo;
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  rep.constant = rep.spread <= tol * (1.0 + scale);
  return rep;
}

nlohmann::json to_json(const KPClass& c) {
  return {{"label", to_string(c.label)},
          {"quartic", c.quartic},
          {"mixed", c.mixed},
          {"quartic_nonzero", c.quartic_nonzero},
          {"mixed_nonzero", c.mixed_nonzero},
          {"marginal", c.marginal}};
}

nlohmann::json to_json(const ScanReport& r) {
  nlohmann::json j;
  j["invariant"] = r.invariant;
  j["tol"] = r.tol;
  j["spread"] = r.spread;
  j["verdict"] = r.constant ? "constant" : "non-constant on sampled points";
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i)
    rows.push_back({{"point", std::vector<double>(r.points[i].data(),
                                                  r.points[i].data() + r.points[i].size())},
                    {"value", r.values[i]}});
  j["values"] = rows;
  return j;
}

}  // namespace curvhom
