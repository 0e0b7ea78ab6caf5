#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "curvhom/error.hpp"
#include "curvhom/geodesics.hpp"
#include "generators.hpp"

using namespace curvhom;
using namespace curvhom::testing;

namespace {

constexpr FamilyKind kKinds[] = {FamilyKind::One, FamilyKind::Two, FamilyKind::Three};

FamilySpec flat_family1(int p) {
  std::vector<Monomial> terms;
  for (int i = 0; i < p; ++i) {
    std::vector<int> e(static_cast<std::size_t>(p), 0);
    e[static_cast<std::size_t>(i)] = 1;
    terms.push_back({e, 0.5 + i});
  }
  return FamilySpec::family1(p, MultiProfile::polynomial(p, std::move(terms)));
}

FamilySpec geodesic_fixture(Rng& rng, FamilyKind kind, int size) {
  if (kind == FamilyKind::One) return FamilySpec::family1(size, random_convex_profile(rng, size));
  return random_family(rng, kind, size);
}

double dist(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("triangular orders") {
  SUBCASE("family 1: x then y") {
    const auto o = triangular_order(symmetric_family(FamilyKind::One, 2));
    CHECK(o.perm == std::vector<int>{0, 1, 2, 3});
    CHECK(o.blocks.size() == 2);
    CHECK(o.points_checked == 50);
  }
  SUBCASE("family 2: u, t, v") {
    const auto o = triangular_order(symmetric_family(FamilyKind::Two, 2));
    CHECK(o.perm == std::vector<int>{0, 1, 2, 3, 4, 5});
    CHECK(o.blocks.size() == 3);
  }
  SUBCASE("family 3: x, u_1..u_r, v_r..v_1, y") {
    const auto spec = symmetric_family(FamilyKind::Three, 3);
    const auto o = triangular_order(spec);
    const Coords3 c = spec.coords3();
    CHECK(o.perm ==
          std::vector<int>{c.x(), c.u(0), c.u(1), c.u(2), c.v(2), c.v(1), c.v(0), c.y()});
    CHECK(o.blocks.size() == 8);
    for (std::size_t i = 0; i < o.perm.size(); ++i)
      CHECK(o.rank[static_cast<std::size_t>(o.perm[i])] == static_cast<int>(i));
  }
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3})
      for_cases(kSuiteSeed + 70, 3, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const auto o = triangular_order(spec);
        for (int k = 0; k < 50; ++k)
          CHECK(triangular_violation(spec, o, random_point(rng, spec.dim()), rng).empty());
      });
}

TEST_CASE("a reversed order is rejected") {
  const auto spec = symmetric_family(FamilyKind::Three, 2);
  TriangularOrder bad = triangular_order(spec);
  std::reverse(bad.perm.begin(), bad.perm.end());
  for (std::size_t i = 0; i < bad.perm.size(); ++i)
    bad.rank[static_cast<std::size_t>(bad.perm[i])] = static_cast<int>(i);
  std::reverse(bad.blocks.begin(), bad.blocks.end());
  Rng rng = substream(kSuiteSeed, 71);
  CHECK_FALSE(triangular_violation(spec, bad, random_point(rng, spec.dim()), rng).empty());
}

TEST_CASE("trivial geodesics") {
  for (FamilyKind kind : kKinds) {
    Rng rng = substream(kSuiteSeed, 72);
    const auto spec = random_family(rng, kind, 2);
    const Vector P = random_point(rng, spec.dim());
    const auto g = integrate_recursive(spec, P, Vector::Zero(spec.dim()), 1.0);
    for (double t : {0.0, 0.3, 1.0}) {
      CHECK(dist(g.position(t), P) == 0.0);
      CHECK(g.velocity(t).isZero());
    }
  }
  SUBCASE("family 1: x(t) is affine") {
    Rng rng = substream(kSuiteSeed, 73);
    const auto spec = FamilySpec::family1(2, random_convex_profile(rng, 2));
    const Vector P = random_point(rng, 4, 0.2), v = random_point(rng, 4, 0.3);
    const auto g = integrate_recursive(spec, P, v, 1.0);
    for (double t : {0.25, 0.5, 1.0})
      for (int i = 0; i < 2; ++i) CHECK(g.position(t)(i) == doctest::Approx(P(i) + t * v(i)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(integrate_recursive(symmetric_family(FamilyKind::Two, 2), Vector::Zero(6),
                                      Vector::Zero(6), 1.0)
                      .at(1.5),
                  Error);
}

TEST_CASE("recursive quadrature agrees with RK4") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3})
      for_cases(kSuiteSeed + 74, 3, [&](Rng& rng, int) {
        const auto spec = geodesic_fixture(rng, kind, size);
        const double box = kind == FamilyKind::One ? 0.2 : 0.5;
        const Vector P = random_point(rng, spec.dim(), box), v = random_point(rng, spec.dim(), box);
        const auto rec = integrate_recursive(spec, P, v, 1.0);
        const auto rk = integrate_rk4(spec, P, v, 1.0, 0.02);
        for (double t : {0.5, 1.0}) {
          CHECK(dist(rec.position(t), rk.position(t)) < 1e-6);
          CHECK(dist(rec.velocity(t), rk.velocity(t)) < 1e-6);
        }
      });
}

TEST_CASE("RK4 error shrinks by about 16 under step halving") {
  Rng rng = substream(kSuiteSeed, 75);
  const auto spec = random_family(rng, FamilyKind::Two, 2);
  const Vector P = random_point(rng, 6, 0.5), v = random_point(rng, 6, 0.5);
  const Vector ref = integrate_recursive(spec, P, v, 1.0).position(1.0);
  const double e1 = dist(integrate_rk4(spec, P, v, 1.0, 0.1).position(1.0), ref);
  const double e2 = dist(integrate_rk4(spec, P, v, 1.0, 0.05).position(1.0), ref);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 24.0);
}

TEST_CASE("exponential and logarithm") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3})
      for_cases(kSuiteSeed + 76, 3, [&](Rng& rng, int) {
        const auto spec = geodesic_fixture(rng, kind, size);
        const double box = kind == FamilyKind::One ? 0.2 : 0.5;
        const Vector P = random_point(rng, spec.dim(), box), v = random_point(rng, spec.dim(), box);
        CHECK(dist(exp_map(spec, P, Vector::Zero(spec.dim())), P) == 0.0);
        CHECK(log_map(spec, P, P).isZero());
        const auto gamma = integrate_recursive(spec, P, v, 2.0);
        for (double t : {0.5, 2.0})
          CHECK(dist(exp_map(spec, P, t * v), gamma.position(t)) < 1e-8);
        const Vector Q = exp_map(spec, P, v);
        CHECK(dist(log_map(spec, P, Q), v) < 1e-8);
        CHECK(dist(exp_map(spec, P, log_map(spec, P, Q)), Q) < 1e-8);
      });
  SUBCASE("family 1: the x-part of log is Q - P") {
    Rng rng = substream(kSuiteSeed, 77);
    const auto spec = FamilySpec::family1(3, random_convex_profile(rng, 3));
    const Vector P = random_point(rng, 6, 0.2), Q = random_point(rng, 6, 0.2);
    const Vector v = log_map(spec, P, Q);
    for (int i = 0; i < 3; ++i) CHECK(v(i) == doctest::Approx(Q(i) - P(i)).epsilon(1e-14));
  }
}

TEST_CASE("geodesic symmetries") {
  for (FamilyKind kind : kKinds)
    for_cases(kSuiteSeed + 78, 3, [&](Rng& rng, int) {
      const auto spec = geodesic_fixture(rng, kind, 2);
      const double box = kind == FamilyKind::One ? 0.2 : 0.5;
      const Vector P = random_point(rng, spec.dim(), box), Q = random_point(rng, spec.dim(), box);
      const Vector SQ = geodesic_symmetry(spec, P, Q);
      CHECK(dist(geodesic_symmetry(spec, P, SQ), Q) < 1e-7);
      CHECK(dist(geodesic_symmetry(spec, P, P), P) < 1e-14);
    });
  SUBCASE("flat fixture: S_P(Q) = 2P - Q") {
    const auto spec = flat_family1(2);
    Rng rng = substream(kSuiteSeed, 79);
    const Vector P = random_point(rng, 4), Q = random_point(rng, 4);
    CHECK(dist(geodesic_symmetry(spec, P, Q), 2.0 * P - Q) < 1e-12);
  }
  SUBCASE("family 2 with zero profiles at u = 0 moves only along the flat directions") {
    const auto spec = FamilySpec::family2({ScalarProfile(), ScalarProfile()});
    Vector P = Vector::Zero(6), Q = Vector::Zero(6);
    Q(2) = 0.4;
    Q(5) = -0.3;
    const Vector SQ = geodesic_symmetry(spec, P, Q);
    CHECK(dist(SQ, 2.0 * P - Q) < 1e-12);
  }
}

TEST_CASE("isometry check") {
  Rng rng = substream(kSuiteSeed, 80);
  std::vector<Vector> samples;
  for (int k = 0; k < 5; ++k) samples.push_back(random_point(rng, 6, 0.5));
  const auto sym = symmetric_family(FamilyKind::Three, 2);
  const auto id = isometry_check(sym, [](const Vector& x) { return x; }, samples);
  CHECK(id.max_deviation < 1e-9);
  CHECK(id.pass());

  const Vector P = random_point(rng, 6, 0.5);
  const auto s3 = isometry_check(
      sym, [&](const Vector& x) { return geodesic_symmetry(sym, P, x); }, samples);
  CHECK(s3.pass());

  const auto cubic = FamilySpec::family3(2, ScalarProfile::polynomial({0.0, 0.0, 1.0, 1.0}));
  const auto bad = isometry_check(
      cubic, [&](const Vector& x) { return geodesic_symmetry(cubic, P, x); }, samples);
  CHECK(bad.max_deviation > 1e-3);
  CHECK_FALSE(bad.pass());
  CHECK(bad.worst_sample >= 0);
}

TEST_CASE("energy is conserved along geodesics") {
  for (FamilyKind kind : kKinds)
    for_cases(kSuiteSeed + 81, 3, [&](Rng& rng, int) {
      const auto spec = geodesic_fixture(rng, kind, 2);
      const double box = kind == FamilyKind::One ? 0.2 : 0.5;
      const Vector P = random_point(rng, spec.dim(), box), v = random_point(rng, spec.dim(), box);
      const auto gamma = integrate_recursive(spec, P, v, 1.0);
      std::vector<double> ts;
      for (int k = 0; k <= 20; ++k) ts.push_back(0.05 * k);
      const auto e = energy_along(gamma, ts);
      const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
      CHECK(*hi - *lo < 1e-8 * (1.0 + std::abs(*hi)));
    });
  const auto spec = symmetric_family(FamilyKind::Two, 2);
  const auto still = integrate_recursive(spec, Vector::Zero(6), Vector::Zero(6), 1.0);
  for (double e : energy_along(still, {0.0, 0.5, 1.0})) CHECK(e == 0.0);

  const auto j = trajectory_json(still, 4);
  CHECK(j.size() == 5);
  CHECK(j[4]["t"] == 1.0);
}
