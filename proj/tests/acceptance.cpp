// Acceptance gate: runs every criterion at sizes 2 and 3 and prints one
// verdict line per criterion followed by its sub-results. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "curvhom/curvature.hpp"
#include "curvhom/geodesics.hpp"
#include "curvhom/homogeneity.hpp"
#include "curvhom/jet.hpp"
#include "curvhom/models.hpp"
#include "curvhom/operators.hpp"
#include "curvhom/symmetry.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace curvhom;
using namespace curvhom::testing;

namespace {

constexpr FamilyKind kKinds[] = {FamilyKind::One, FamilyKind::Two, FamilyKind::Three};
constexpr int kSizes[] = {2, 3};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::string tag(FamilyKind k, int size) {
  static const char* names[] = {"fam1 p", "fam2 s", "fam3 r"};
  return fmt("%s=%d", names[static_cast<int>(k) - 1], size);
}

class Criterion {
 public:
  Criterion(int id, std::string name) : id_(id), name_(std::move(name)) {}

  void require(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    notes_.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }

  bool finish(double seconds) const {
    std::printf("[%s] %2d. %s (%.1fs)\n", pass_ ? "PASS" : "FAIL", id_, name_.c_str(), seconds);
    for (const auto& n : notes_) std::printf("         %s\n", n.c_str());
    std::fflush(stdout);
    return pass_;
  }

 private:
  int id_;
  std::string name_;
  bool pass_ = true;
  std::vector<std::string> notes_;
};

std::vector<Vector> sample_points(std::uint64_t seed, int count, int n, double box) {
  std::vector<Vector> out;
  for_cases(seed, count, [&](Rng& rng, int) { out.push_back(random_point(rng, n, box)); });
  return out;
}

SamplerConfig sampler(int count, std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.count = count;
  return cfg;
}

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

void oracle_equivalence(Criterion& c) {
  for (FamilyKind kind : kKinds)
    for (int size : kSizes) {
      double dr = 0.0, dn = 0.0;
      for_cases(kSuiteSeed + 1000, 20, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim());
        const auto pkg = curvature_package(spec, P, 1);
        const auto oracle = curvature_oracle(spec, P);
        dr = std::max(dr, max_abs_diff(pkg.R, oracle.R));
        dn = std::max(dn, max_abs_diff(*pkg.nablaR, oracle.nablaR));
      });
      c.require(dr < 1e-9 && dn < 1e-9,
                fmt("%s: max |R - oracle| = %.2e, max |nabla R - oracle| = %.2e (< 1e-9)",
                    tag(kind, size).c_str(), dr, dn));
    }
}

void fd_independence(Criterion& c) {
  for (FamilyKind kind : kKinds)
    for (int size : kSizes) {
      double d1 = 0.0, d2 = 0.0;
      for_cases(kSuiteSeed + 1001, 20, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim());
        const MetricJets jets = metric_jets(spec, P, 2);
        d1 = std::max(d1, scaled_diff(jets.first_partials(), fd_metric_first(spec, P)));
        d2 = std::max(d2, scaled_diff(jets.second_partials(), fd_metric_second(spec, P)));
      });
      c.require(d1 < 1e-5 && d2 < 1e-5,
                fmt("%s: relative error first partials %.2e, second partials %.2e (< 1e-5)",
                    tag(kind, size).c_str(), d1, d2));
    }
}

void symmetric_profiles(Criterion& c) {
  for (FamilyKind kind : kKinds)
    for (int size : kSizes) {
      const auto spec = symmetric_family(kind, size);
      double worst = 0.0;
      for (const auto& P : sample_points(kSuiteSeed + 1002, 20, spec.dim(), 1.0))
        worst = std::max(worst, curvature_package(spec, P, 1).nablaR->max_abs());
      c.require(worst < 1e-9, fmt("%s: max |nabla R| = %.2e (< 1e-9)", tag(kind, size).c_str(),
                                  worst));
    }
}

void model_matching(Criterion& c) {
  auto record = [&](const std::string& label, const std::vector<ModelMatchReport>& reps) {
    double g = 0.0, a = 0.0, a1 = 0.0;
    bool ok = true;
    for (const auto& r : reps) {
      g = std::max(g, r.g_deviation);
      a = std::max(a, r.A_deviation);
      if (r.A1_deviation) a1 = std::max(a1, *r.A1_deviation);
      ok = ok && r.pass();
    }
    c.require(ok, fmt("%s: g dev %.2e, A dev %.2e, A1 dev %.2e (< 1e-10)", label.c_str(), g, a,
                      a1));
  };
  for (int size : kSizes) {
    std::vector<ModelMatchReport> r1, r2, r3, r31;
    const ModelSpace u1 = build_model(ModelKind::U1p, size);
    const ModelSpace u2 = build_model(ModelKind::U2s, size);
    const ModelSpace u3 = build_model(ModelKind::U3r, size);
    const ModelSpace u31 = build_model(ModelKind::U3r1, size);
    for_cases(kSuiteSeed + 1003, 20, [&](Rng& rng, int) {
      const auto f1 = FamilySpec::family1(size, random_convex_profile(rng, size));
      const Vector P1 = random_point(rng, f1.dim(), 0.5);
      r1.push_back(
          verify_model_match(normalize_family1(f1, P1), curvature_package(f1, P1, 0), u1));

      const auto f2 = random_family(rng, FamilyKind::Two, size);
      const Vector P2 = random_point(rng, f2.dim());
      r2.push_back(
          verify_model_match(normalize_family2(f2, P2), curvature_package(f2, P2, 0), u2));

      const auto f3 = FamilySpec::family3(size, ScalarProfile::exponential());
      const Vector P3 = random_point(rng, f3.dim());
      r3.push_back(
          verify_model_match(normalize_family3(f3, P3, 0), curvature_package(f3, P3, 0), u3));
      r31.push_back(
          verify_model_match(normalize_family3(f3, P3, 1), curvature_package(f3, P3, 1), u31));
    });
    record(tag(FamilyKind::One, size), r1);
    record(tag(FamilyKind::Two, size), r2);
    record(tag(FamilyKind::Three, size) + " order 0", r3);
    record(tag(FamilyKind::Three, size) + " order 1 (psi = exp)", r31);
  }
}

void nilpotency(Criterion& c) {
  for (int r : kSizes) {
    double worst = 0.0;
    int samples = 0;
    for_cases(kSuiteSeed + 1004, 10, [&](Rng& rng, int) {
      const auto spec = random_family(rng, FamilyKind::Three, r);
      const Vector P = random_point(rng, spec.dim());
      const auto pkg = curvature_package(spec, P, 0);
      for (int k = 0; k < 20; ++k) {
        const Matrix J = jacobi(pkg.R, pkg.g, random_point(rng, spec.dim()));
        Matrix Jn = Matrix::Identity(J.rows(), J.cols());
        for (int i = 0; i < 2 * r; ++i) Jn = Jn * J;
        worst = std::max(worst, max_abs(Jn) / std::pow(std::max(1.0, max_abs(J)), 2 * r));
        ++samples;
      }
    });
    c.require(worst < 1e-8, fmt("fam3 r=%d: max scaled |J^%d| = %.2e over %d samples (< 1e-8)", r,
                                2 * r, worst, samples));

    const ModelSpace m = build_model(ModelKind::U3r, r);
    Vector X = Vector::Zero(m.dim()), w = Vector::Zero(m.dim()), V1 = Vector::Zero(m.dim());
    X(2 * r) = 1.0;
    w(0) = 1.0;
    V1(r) = 1.0;
    const Matrix J = jacobi(m.A, m.g, X);
    for (int k = 0; k < 2 * r - 1; ++k) w = J * w;
    c.require(w == V1, fmt("model r=%d: J(X)^%d U_1 == V_1 exactly", r, 2 * r - 1));
  }
}

void osserman_probes(Criterion& c) {
  const ProbeOptions opt;
  for (int size : kSizes) {
    Rng rng = substream(kSuiteSeed + 1005, static_cast<std::uint64_t>(size));
    const auto f1 = FamilySpec::family1(size, random_convex_profile(rng, size));
    const auto p1 = sample_points(kSuiteSeed + 1006, 5, f1.dim(), 0.5);
    for (int sign : {1, -1}) {
      const auto v = jordan_probe(f1, p1, sign, sampler(100, kSuiteSeed + 1007), opt);
      c.require(v.constant && v.samples == 100,
                fmt("%s %s: %d samples, rank sequence constant = %s", tag(FamilyKind::One, size).c_str(),
                    sign > 0 ? "spacelike" : "timelike", v.samples, v.constant ? "yes" : "no"));
    }
    const auto f2 = random_family(rng, FamilyKind::Two, size);
    const auto p2 = sample_points(kSuiteSeed + 1008, 5, f2.dim(), 1.0);
    const auto sp = jordan_probe(f2, p2, 1, sampler(100, kSuiteSeed + 1009), opt);
    c.require(sp.constant && sp.samples == 100,
              fmt("%s spacelike: %d samples, constant = %s", tag(FamilyKind::Two, size).c_str(),
                  sp.samples, sp.constant ? "yes" : "no"));
    ProbeOptions search;
    search.search_witness = true;
    const auto tl = jordan_probe(f2, p2, -1, sampler(1000, kSuiteSeed + 1010), search);
    const bool found = tl.witness && tl.witness->first.ranks != tl.witness->second.ranks;
    c.require(found && tl.samples <= 1000,
              fmt("%s timelike: witness with differing rank sequences %s after %d samples",
                  tag(FamilyKind::Two, size).c_str(), found ? "found" : "not found", tl.samples));
  }
}

void ip_probes(Criterion& c) {
  for (int size : kSizes) {
    Rng rng = substream(kSuiteSeed + 1011, static_cast<std::uint64_t>(size));
    const auto f1 = FamilySpec::family1(size, random_convex_profile(rng, size));
    const auto p1 = sample_points(kSuiteSeed + 1012, 5, f1.dim(), 0.5);
    for (int sign : {1, -1}) {
      const auto v = ip_probe(f1, p1, sign, sampler(100, kSuiteSeed + 1013));
      const int rank = v.ranks.empty() ? -1 : v.ranks.front();
      c.require(v.constant && rank == 2 && v.samples == 100,
                fmt("%s %s planes: rank %d, constant = %s", tag(FamilyKind::One, size).c_str(),
                    sign > 0 ? "spacelike" : "timelike", rank, v.constant ? "yes" : "no"));
    }
    const auto f2 = random_family(rng, FamilyKind::Two, size);
    const auto p2 = sample_points(kSuiteSeed + 1014, 5, f2.dim(), 1.0);
    const auto v = ip_probe(f2, p2, 1, sampler(100, kSuiteSeed + 1015));
    const int rank = v.ranks.empty() ? -1 : v.ranks.front();
    c.require(v.constant && rank == 4 && v.samples == 100,
              fmt("%s spacelike planes: rank %d, constant = %s", tag(FamilyKind::Two, size).c_str(),
                  rank, v.constant ? "yes" : "no"));
  }
}

void invariant_scans(Criterion& c) {
  for (int size : kSizes) {
    const auto s1 = symmetric_family(FamilyKind::One, size);
    const auto s2 = symmetric_family(FamilyKind::Two, size);
    double a1 = 0.0, a2 = 0.0;
    for (const auto& P : sample_points(kSuiteSeed + 1016, 50, s1.dim(), 1.0))
      a1 = std::max(a1, std::abs(alpha1(s1, P)));
    for (const auto& P : sample_points(kSuiteSeed + 1017, 50, s2.dim(), 1.0))
      a2 = std::max(a2, std::abs(alpha2(s2, P)));
    c.require(a1 < 1e-12, fmt("alpha1 %s symmetric: max %.2e (< 1e-12)",
                              tag(FamilyKind::One, size).c_str(), a1));
    c.require(a2 < 1e-12, fmt("alpha2 %s symmetric: max %.2e (< 1e-12)",
                              tag(FamilyKind::Two, size).c_str(), a2));

    double rel = 0.0;
    for_cases(kSuiteSeed + 1018, 10, [&](Rng& rng, int) {
      const auto spec = FamilySpec::family1(size, random_convex_profile(rng, size));
      const Vector P = random_point(rng, spec.dim(), 0.5);
      const double fast = alpha1(spec, P), brute = alpha1_bruteforce(spec, P);
      rel = std::max(rel, std::abs(fast - brute) / std::max(1.0, std::abs(brute)));
    });
    c.require(rel < 1e-9, fmt("alpha1 fast vs brute force, p=%d: relative %.2e (< 1e-9)", size,
                              rel));

    std::vector<ScalarProfile> quintic(static_cast<std::size_t>(size),
                                       ScalarProfile::monomial(1.0, 5));
    const auto f5 = FamilySpec::family2(quintic);
    const auto scan2 =
        constancy_scan(Invariant::Alpha2, f5, sample_points(kSuiteSeed + 1019, 10, f5.dim(), 1.0));
    c.require(!scan2.constant && scan2.spread > 1e-3,
              fmt("alpha2 f_i = u^5, s=%d: spread %.3e, non-constant = %s", size, scan2.spread,
                  scan2.constant ? "no" : "yes"));
  }
  const auto f = MultiProfile::polynomial(
      3, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}, {{0, 0, 2}, 1.0}, {{4, 0, 0}, 1.0}});
  const auto spec = FamilySpec::family1(3, f);
  const auto scan1 =
      constancy_scan(Invariant::Alpha1, spec, sample_points(kSuiteSeed + 1020, 10, 6, 0.5));
  c.require(!scan1.constant && scan1.spread > 1e-3,
            fmt("alpha1 f = |x|^2 + x1^4: spread %.3e, non-constant = %s", scan1.spread,
                scan1.constant ? "no" : "yes"));
}

void kp_classification(Criterion& c) {
  for (int r : kSizes) {
    auto at = [r](double prev) {
      Vector P = Vector::Zero(2 * r + 2);
      P(r - 2) = prev;
      P(r - 1) = 0.5;
      return P;
    };
    const auto quartic = FamilySpec::family3(r, ScalarProfile::monomial(1.0, 4));
    const auto q = kp_scan(quartic, at(1.0), at(0.0));
    c.require(q.p.label == KPCase::BothNonzero && q.q.label == KPCase::OnlyQuartic && q.differ,
              fmt("r=%d psi = u^4: %s vs %s", r, to_string(q.p.label).c_str(),
                  to_string(q.q.label).c_str()));
    const auto cubic = FamilySpec::family3(r, ScalarProfile::monomial(1.0, 3));
    const auto m = kp_scan(cubic, at(1.0), at(0.0));
    c.require(m.p.label == KPCase::OnlyMixed && m.q.label == KPCase::Empty && m.differ,
              fmt("r=%d psi = u^3: %s vs %s", r, to_string(m.p.label).c_str(),
                  to_string(m.q.label).c_str()));
  }
}

void geodesics(Criterion& c) {
  for (FamilyKind kind : kKinds)
    for (int size : kSizes) {
      double rk = 0.0, trip = 0.0, energy = 0.0, affine = 0.0;
      for_cases(kSuiteSeed + 1021, 3, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim(), 0.5);
        const Vector v = random_point(rng, spec.dim(), 0.2);
        const auto rec = integrate_recursive(spec, P, v, 10.0);
        const auto ref = integrate_rk4(spec, P, v, 10.0, 0.02);
        std::vector<double> ts;
        for (int k = 0; k <= 100; ++k) ts.push_back(0.1 * k);
        for (double t : ts) {
          const Vector z = rec.position(t);
          rk = std::max(rk, (z - ref.position(t)).cwiseAbs().maxCoeff() /
                                (1.0 + z.cwiseAbs().maxCoeff()));
          if (kind == FamilyKind::One)
            affine = std::max(affine, (z.head(size) - (P + t * v).head(size)).cwiseAbs().maxCoeff());
        }
        const auto e = energy_along(rec, ts);
        const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
        energy = std::max(energy, (*hi - *lo) / (1.0 + std::abs(*hi)));
      });
      for_cases(kSuiteSeed + 1022, 20, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim(), 0.5);
        const Vector v = random_point(rng, spec.dim(), 0.5);
        const Vector Q = exp_map(spec, P, v);
        const Vector w = log_map(spec, P, Q);
        trip = std::max(trip, (w - v).cwiseAbs().maxCoeff());
        trip = std::max(trip, (exp_map(spec, P, w) - Q).cwiseAbs().maxCoeff());
      });
      std::string line = fmt("%s: RK4 dev %.2e (< 1e-6), round trip %.2e (< 1e-8), energy spread %.2e (< 1e-8)",
                             tag(kind, size).c_str(), rk, trip, energy);
      bool ok = rk < 1e-6 && trip < 1e-8 && energy < 1e-8;
      if (kind == FamilyKind::One) {
        line += fmt(", x affine dev %.2e (< 1e-12)", affine);
        ok = ok && affine < 1e-12;
      }
      c.require(ok, line);
    }
}

void geodesic_symmetry_isometry(Criterion& c) {
  for (FamilyKind kind : kKinds)
    for (int size : kSizes) {
      const auto spec = symmetric_family(kind, size);
      const double box = kind == FamilyKind::One ? 0.5 : 1.0;
      Rng rng = substream(kSuiteSeed + 1023, static_cast<std::uint64_t>(size));
      const Vector P = random_point(rng, spec.dim(), box);
      const auto samples = sample_points(kSuiteSeed + 1024, 10, spec.dim(), box);
      const auto rep = isometry_check(
          spec, [&](const Vector& x) { return geodesic_symmetry(spec, P, x); }, samples);
      c.require(rep.pass(), fmt("%s: max deviation %.2e over %zu samples (< 1e-5)",
                                tag(kind, size).c_str(), rep.max_deviation, samples.size()));
    }
}

void identity_suites(Criterion& c) {
  for (FamilyKind kind : kKinds)
    for (int size : kSizes) {
      double vr = 0.0, vn = 0.0;
      bool ok = true;
      for_cases(kSuiteSeed + 1025, 20, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const auto pkg = curvature_package(spec, random_point(rng, spec.dim()), 1);
        const auto sr = check_curvature_symmetries(pkg.R, 1e-10);
        const auto sn = check_nabla_symmetries(*pkg.nablaR, 1e-10);
        vr = std::max(vr, sr.max_violation());
        vn = std::max(vn, sn.max_violation());
        ok = ok && sr.pass() && sn.pass();
      });
      c.require(ok, fmt("%s: R violation %.2e, nabla R violation %.2e (< 1e-10 scaled)",
                        tag(kind, size).c_str(), vr, vn));
    }
  for (int dim : kSizes) {
    const auto inj = bilinear_injectivity_probe(dim, 50, kSuiteSeed + 1026);
    c.require(inj.pairs == 50 && inj.min_form_distance > 1e-6 && inj.min_curvature_distance > 1e-6,
              fmt("phi -> R(phi) injective, dim %d: %d pairs, min |R(phi) - R(psi)| = %.2e", dim,
                  inj.pairs, inj.min_curvature_distance));
  }
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    void (*body)(Criterion&);
  };
  const Entry entries[] = {
      {1, "oracle equivalence", oracle_equivalence},
      {2, "finite-difference independence", fd_independence},
      {3, "symmetric-space profiles", symmetric_profiles},
      {4, "model matching", model_matching},
      {5, "nilpotency", nilpotency},
      {6, "Osserman probes", osserman_probes},
      {7, "Ivanov-Petrova probes", ip_probes},
      {8, "invariant scans", invariant_scans},
      {9, "K_P classification", kp_classification},
      {10, "geodesics", geodesics},
      {11, "geodesic symmetry isometry", geodesic_symmetry_isometry},
      {12, "identity suites", identity_suites},
  };
  int failed = 0;
  for (const auto& e : entries) {
    Criterion c(e.id, e.name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.body(c);
    } catch (const std::exception& ex) {
      c.require(false, std::string("threw: ") + ex.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.finish(secs)) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(entries)) - failed,
              std::size(entries));
  return failed == 0 ? 0 : 1;
}
