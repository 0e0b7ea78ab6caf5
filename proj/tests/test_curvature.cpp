#include <doctest.h>

#include <array>
#include <cmath>

#include "curvhom/curvature.hpp"
#include "curvhom/families.hpp"
#include "curvhom/models.hpp"
#include "curvhom/symmetry.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace curvhom;
using namespace curvhom::testing;

namespace {

constexpr FamilyKind kKinds[] = {FamilyKind::One, FamilyKind::Two, FamilyKind::Three};

bool in_r_orbit(int a, int b, int c, int d, int x, int ur) {
  // (x, ur, ur, x) and its images under the curvature symmetries.
  const bool ab = (a == x && b == ur) || (a == ur && b == x);
  const bool cd = (c == x && d == ur) || (c == ur && d == x);
  return ab && cd;
}

}  // namespace

TEST_CASE("flat metric has no connection and no curvature") {
  const int n = 4;
  const BilinearForm g = BilinearForm::identity(n);
  const Tensor dg = Tensor::covariant(n, 3), d2g = Tensor::covariant(n, 4);
  const Christoffels ch = christoffels(g, dg);
  CHECK(ch.first.is_zero());
  CHECK(ch.second.is_zero());
  CHECK(riemann(g, dg, d2g).is_zero());
}

TEST_CASE("sign convention: family 2 sectional entry is +|u|^2") {
  const auto spec = FamilySpec::family2({ScalarProfile(), ScalarProfile()});
  Vector P = Vector::Zero(6);
  P(0) = 0.6;
  P(1) = -0.8;
  const Tensor R = curvature_package(spec, P, 0).R;
  CHECK(R(0, 1, 1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fd_riemann(spec, P)(0, 1, 1, 0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("engine R and nabla R agree with the closed-form oracle") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(size);
      for_cases(kSuiteSeed + 20, 20, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim());
        const auto pkg = curvature_package(spec, P, 1);
        const auto oracle = curvature_oracle(spec, P);
        CHECK(max_abs_diff(pkg.R, oracle.R) < 1e-9);
        CHECK(max_abs_diff(*pkg.nablaR, oracle.nablaR) < 1e-9);
      });
    }
}

TEST_CASE("engine R and nabla R agree with the finite-difference route") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(size);
      for_cases(kSuiteSeed + 21, 2, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim());
        const auto pkg = curvature_package(spec, P, 1);
        CHECK(scaled_diff(pkg.R, fd_riemann(spec, P)) < 1e-6);
        CHECK(scaled_diff(*pkg.nablaR, fd_nabla_riemann(spec, P)) < 1e-4);
      });
    }
}

TEST_CASE("family 1: nabla R on the x-block is the coordinate derivative of H H - H H") {
  for_cases(kSuiteSeed + 22, 10, [](Rng& rng, int) {
    const int p = 3;
    const auto f = random_multi_profile(rng, p);
    const auto spec = FamilySpec::family1(p, f);
    const Vector P = random_point(rng, 2 * p);
    const std::vector<double> x(P.data(), P.data() + p);
    auto d2 = [&](int i, int j) {
      std::array<int, 3> a{};
      ++a[static_cast<std::size_t>(i)];
      ++a[static_cast<std::size_t>(j)];
      return f.partial(x, a);
    };
    auto d3 = [&](int i, int j, int k) {
      std::array<int, 3> a{};
      ++a[static_cast<std::size_t>(i)];
      ++a[static_cast<std::size_t>(j)];
      ++a[static_cast<std::size_t>(k)];
      return f.partial(x, a);
    };
    const Tensor N = *curvature_package(spec, P, 1).nablaR;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
          for (int l = 0; l < p; ++l)
            for (int m = 0; m < p; ++m) {
              const double expect = d3(i, l, m) * d2(j, k) + d2(i, l) * d3(j, k, m) -
                                    d3(i, k, m) * d2(j, l) - d2(i, k) * d3(j, l, m);
              CHECK(N(i, j, k, l, m) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
            }
  });
}

TEST_CASE("family 2: nabla R(u_i, u_j, u_j, u_i; u_i) = f_i''' + 4 u_i") {
  for (int s : {2, 3})
    for_cases(kSuiteSeed + 23, 10, [&](Rng& rng, int) {
      const auto spec = random_family(rng, FamilyKind::Two, s);
      const Vector P = random_point(rng, 3 * s);
      const Tensor N = *curvature_package(spec, P, 1).nablaR;
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          if (i == j) continue;
          const double expect =
              spec.fs()[static_cast<std::size_t>(i)].derivative(P(i), 3) + 4.0 * P(i);
          CHECK(N(i, j, j, i, i) == doctest::Approx(expect).epsilon(1e-12));
        }
    });
}

TEST_CASE("family 3: nabla^2 R has exactly the two quartic/mixed patterns") {
  for (int r : {2, 3})
    for_cases(kSuiteSeed + 24, 10, [&](Rng& rng, int) {
      const auto spec = random_family(rng, FamilyKind::Three, r);
      const Vector P = random_point(rng, 2 * r + 2);
      const Tensor T = *curvature_package(spec, P, 2).nabla2R;
      const Coords3 c = spec.coords3();
      const int x = c.x(), ur = c.u(r - 1);
      const double mixed = P(c.u(r - 2)) * spec.psi().derivative(P(ur), 3);
      const double quartic = spec.psi().derivative(P(ur), 4);
      // The mixed entry carries a minus sign: the only surviving connection
      // correction is -Gamma_xx^{u_r} nabla R(x,u_r,u_r,x;u_r). The
      // difference oracle pins it independently.
      CHECK(T(x, ur, ur, x, x, x) == doctest::Approx(-mixed).epsilon(1e-12));
      CHECK(T(x, ur, ur, x, ur, ur) == doctest::Approx(quartic).epsilon(1e-12));
      CHECK(fd_nabla2_entry(spec, P, {x, ur, ur, x, x, x}) ==
            doctest::Approx(-mixed).epsilon(1e-6).scale(1.0));
      CHECK(fd_nabla2_entry(spec, P, {x, ur, ur, x, ur, ur}) ==
            doctest::Approx(quartic).epsilon(1e-6).scale(1.0));
      CHECK(std::abs(fd_nabla2_entry(spec, P, {x, ur, ur, x, x, ur})) < 1e-6);
      double stray = 0.0;
      for (std::size_t f = 0; f < T.size(); ++f) {
        std::array<int, 6> i{};
        T.unflatten(f, i);
        const bool tail = (i[4] == x && i[5] == x) || (i[4] == ur && i[5] == ur);
        if (!(tail && in_r_orbit(i[0], i[1], i[2], i[3], x, ur)))
          stray = std::max(stray, std::abs(T.components()[f]));
      }
      CHECK(stray < 1e-9);
    });
  const auto sym = symmetric_family(FamilyKind::Three, 3);
  Rng rng = substream(kSuiteSeed, 25);
  CHECK(curvature_package(sym, random_point(rng, 8), 2).nabla2R->max_abs() < 1e-12);
}

TEST_CASE("curvature and covariant-derivative identities") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3})
      for_cases(kSuiteSeed + 26, 5, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const auto pkg = curvature_package(spec, random_point(rng, spec.dim()), 1);
        const auto sr = check_curvature_symmetries(pkg.R, 1e-10);
        const auto sn = check_nabla_symmetries(*pkg.nablaR, 1e-10);
        CHECK(sr.pass());
        CHECK(sn.pass());
        CHECK(sr.checks.size() == 4);
        CHECK(sn.checks.size() == 5);
      });
}

TEST_CASE("symmetry checker on constructed tensors") {
  CHECK(check_curvature_symmetries(Tensor::covariant(3, 4)).pass());
  CHECK(check_nabla_symmetries(Tensor::covariant(3, 5)).pass());

  const ModelSpace u2 = build_model(ModelKind::U2s, 2);
  const auto exact = check_curvature_symmetries(u2.A, 0.0);
  CHECK(exact.pass());
  CHECK(exact.max_violation() == 0.0);

  Tensor bad = u2.A;
  bad(0, 1, 1, 2) += 1e-3;  // breaks antisymmetry in the last pair
  const auto rep = check_curvature_symmetries(bad, 1e-10);
  CHECK_FALSE(rep.pass());
  CHECK(rep.max_violation() == doctest::Approx(1e-3).epsilon(1e-9));

  const ModelSpace u31 = build_model(ModelKind::U3r1, 3);
  REQUIRE(u31.A1);
  CHECK(check_nabla_symmetries(*u31.A1, 0.0).pass());
}

TEST_CASE("covariant derivative of a parallel tensor vanishes") {
  // The metric itself: nabla g = 0 for the Levi-Civita connection.
  for_cases(kSuiteSeed + 27, 5, [](Rng& rng, int) {
    const auto spec = random_family(rng, FamilyKind::Two, 2);
    const Vector P = random_point(rng, 6);
    const MetricJets jets = metric_jets(spec, P, 1);
    const Tensor G = christoffel_symbols(spec, P);
    const Tensor nabla_g = covariant_derivative(G, to_tensor(jets.value()), jets.first_partials());
    CHECK(nabla_g.max_abs() < 1e-13);
  });
}

TEST_CASE("curvature package JSON lists nonzero components") {
  const auto spec = symmetric_family(FamilyKind::Three, 2);
  const auto pkg = curvature_package(spec, Vector::Zero(6), 1);
  const auto j = to_json(pkg);
  CHECK(j.contains("R"));
  const auto nz = nonzero_components(pkg.R);
  // (x, u2, u2, x) and its 3 images carry psi'' = 2.
  bool found = false;
  for (const auto& e : nz)
    if (e["index"] == nlohmann::json::array({4, 1, 1, 4})) found = e["value"].get<double>() == 2.0;
  CHECK(found);
}
