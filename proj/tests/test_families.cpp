#include <doctest.h>

#include <cmath>

#include "curvhom/curvature.hpp"
#include "curvhom/error.hpp"
#include "curvhom/families.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace curvhom;
using namespace curvhom::testing;

namespace {

constexpr FamilyKind kKinds[] = {FamilyKind::One, FamilyKind::Two, FamilyKind::Three};

double rel_diff(const Tensor& engine, const Tensor& fd) {
  return max_abs_diff(engine, fd) / std::max(1.0, fd.max_abs());
}

}  // namespace

TEST_CASE("metric_at on the worked examples") {
  SUBCASE("family 1, f = x1^2 + x2^2 at x = (1, 0)") {
    const auto spec = FamilySpec::family1(2, MultiProfile::sum_of_squares(2));
    Vector P = Vector::Zero(4);
    P(0) = 1.0;
    const auto g = metric_at(spec, P);
    const Coords1 c = spec.coords1();
    CHECK(g(c.x(0), c.x(0)) == 4.0);
    CHECK(g(c.x(0), c.x(1)) == 0.0);
    CHECK(g(c.x(1), c.x(1)) == 0.0);
    CHECK(g(c.x(0), c.y(0)) == 1.0);
    CHECK(g(c.x(1), c.y(1)) == 1.0);
    CHECK(g(c.x(0), c.y(1)) == 0.0);
    CHECK(g(c.y(0), c.y(0)) == 0.0);
  }
  SUBCASE("family 2, zero profiles at the origin") {
    const auto spec = FamilySpec::family2({ScalarProfile(), ScalarProfile()});
    const auto g = metric_at(spec, Vector::Zero(6));
    const Coords2 c = spec.coords2();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CHECK(g(c.u(i), c.u(j)) == 0.0);
        CHECK(g(c.u(i), c.v(j)) == (i == j ? 1.0 : 0.0));
        CHECK(g(c.t(i), c.t(j)) == (i == j ? -1.0 : 0.0));
      }
  }
  SUBCASE("family 3, psi = u^2 at the origin") {
    const auto spec = symmetric_family(FamilyKind::Three, 2);
    const Matrix g = metric_at(spec, Vector::Zero(6)).matrix();
    const Coords3 c = spec.coords3();
    Matrix expect = Matrix::Zero(6, 6);
    expect(c.x(), c.y()) = expect(c.y(), c.x()) = 1.0;
    for (int i = 0; i < 2; ++i) expect(c.u(i), c.v(i)) = expect(c.v(i), c.u(i)) = 1.0;
    CHECK(g == expect);
  }
  SUBCASE("family 3 x-x entry") {
    const auto spec = FamilySpec::family3(3, ScalarProfile::monomial(1.0, 3));
    Rng rng = substream(kSuiteSeed, 1);
    const Vector P = random_point(rng, 8);
    const Coords3 c = spec.coords3();
    const double expect = -2.0 * (P(c.u(0)) * P(c.v(1)) + P(c.u(1)) * P(c.v(2))) -
                          2.0 * std::pow(P(c.u(2)), 3);
    CHECK(metric_at(spec, P)(c.x(), c.x()) == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("first partials follow the hand-differentiated formulas") {
  SUBCASE("family 1: d_k g(x_i, x_j) = H_ik f_j + f_i H_jk") {
    for_cases(kSuiteSeed + 10, 10, [](Rng& rng, int) {
      const int p = 3;
      const auto f = random_multi_profile(rng, p);
      const auto spec = FamilySpec::family1(p, f);
      const Vector P = random_point(rng, 2 * p);
      const std::vector<double> x(P.data(), P.data() + p);
      const auto H = f.hessian(x);
      const auto df = f.gradient(x);
      const Tensor dg = metric_jets(spec, P, 1).first_partials();
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          for (int k = 0; k < p; ++k) {
            const auto s = [&](int a, int b) { return static_cast<std::size_t>(a * p + b); };
            const double expect = H[s(i, k)] * df[static_cast<std::size_t>(j)] +
                                  df[static_cast<std::size_t>(i)] * H[s(j, k)];
            CHECK(dg(i, j, k) == doctest::Approx(expect).epsilon(1e-12));
          }
    });
  }
  SUBCASE("family 2: d_{u_k} g(u_k, u_k) = -2 (f_k'(u_k) + t_k)") {
    for_cases(kSuiteSeed + 11, 10, [](Rng& rng, int) {
      const auto spec = random_family(rng, FamilyKind::Two, 3);
      const Vector P = random_point(rng, 9);
      const Tensor dg = metric_jets(spec, P, 1).first_partials();
      const Coords2 c = spec.coords2();
      for (int k = 0; k < 3; ++k) {
        const double expect =
            -2.0 * (spec.fs()[static_cast<std::size_t>(k)].derivative(P(c.u(k)), 1) + P(c.t(k)));
        CHECK(dg(c.u(k), c.u(k), c.u(k)) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(dg(c.u(k), c.v(k), c.u(k)) == 0.0);
        CHECK(dg(c.t(k), c.t(k), c.u(0)) == 0.0);
      }
    });
  }
}

TEST_CASE("exact metric partials match 4th-order central differences") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(size);
      for_cases(kSuiteSeed + 12, 5, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim());
        const MetricJets jets = metric_jets(spec, P, 2);
        CHECK(rel_diff(jets.first_partials(), fd_metric_first(spec, P)) < 1e-5);
        CHECK(rel_diff(jets.second_partials(), fd_metric_second(spec, P)) < 1e-5);
      });
    }
}

TEST_CASE("christoffel_oracle equals the engine and the finite-difference route") {
  for (FamilyKind kind : kKinds)
    for (int size : {2, 3}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(size);
      for_cases(kSuiteSeed + 13, 8, [&](Rng& rng, int) {
        const auto spec = random_family(rng, kind, size);
        const Vector P = random_point(rng, spec.dim());
        const Tensor oracle = christoffel_oracle(spec, P);
        CHECK(max_abs_diff(oracle, christoffel_symbols(spec, P)) < 1e-10);
        CHECK(scaled_diff(oracle, fd_christoffel(spec, P)) < 1e-6);
      });
    }
}

TEST_CASE("christoffel patterns") {
  SUBCASE("family 2 with zero profiles at the origin is flat to first order") {
    const auto spec = FamilySpec::family2({ScalarProfile(), ScalarProfile()});
    CHECK(christoffel_oracle(spec, Vector::Zero(6)).is_zero());
  }
  SUBCASE("family 3 nabla_x d_x") {
    Rng rng = substream(kSuiteSeed, 14);
    const int r = 3;
    const auto spec = FamilySpec::family3(r, ScalarProfile::polynomial({0.0, 0.5, 1.0, -0.3}));
    const Vector P = random_point(rng, 2 * r + 2);
    const Tensor G = christoffel_oracle(spec, P);
    const Coords3 c = spec.coords3();
    const int x = c.x();
    for (int i = 0; i + 1 < r; ++i) {
      CHECK(G(x, x, c.u(i + 1)) == doctest::Approx(P(c.u(i))));
      CHECK(G(x, x, c.v(i)) == doctest::Approx(P(c.v(i + 1))));
    }
    CHECK(G(x, x, c.v(r - 1)) == doctest::Approx(spec.psi().derivative(P(c.u(r - 1)), 1)));
    CHECK(G(x, x, c.u(0)) == 0.0);
  }
  SUBCASE("family 1 feeds only the y-block with first-kind coefficients") {
    Rng rng = substream(kSuiteSeed, 15);
    const int p = 3;
    const auto spec = random_family(rng, FamilyKind::One, p);
    const Vector P = random_point(rng, 2 * p);
    const Tensor G = christoffel_oracle(spec, P);
    const Tensor dg = fd_metric_first(spec, P);
    const Coords1 c = spec.coords1();
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k) {
          const double first = 0.5 * (dg(j, k, i) + dg(i, k, j) - dg(i, j, k));
          CHECK(G(c.x(i), c.x(j), c.y(k)) == doctest::Approx(first).epsilon(1e-7));
          CHECK(G(c.x(i), c.x(j), c.x(k)) == 0.0);
          CHECK(G(c.y(i), c.x(j), c.y(k)) == 0.0);
        }
  }
}

TEST_CASE("vanishing patterns of R and nabla R") {
  SUBCASE("family 1: R vanishes when any argument is a y direction") {
    for_cases(kSuiteSeed + 16, 5, [](Rng& rng, int) {
      const auto spec = random_family(rng, FamilyKind::One, 3);
      const Vector P = random_point(rng, 6);
      const Tensor R = curvature_package(spec, P, 0).R;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
          for (int c = 0; c < 6; ++c)
            for (int d = 0; d < 6; ++d)
              if (a >= 3 || b >= 3 || c >= 3 || d >= 3) CHECK(R(a, b, c, d) == 0.0);
    });
  }
  SUBCASE("family 2: nabla R vanishes when any argument is a t or v direction") {
    for_cases(kSuiteSeed + 17, 5, [](Rng& rng, int) {
      const auto spec = random_family(rng, FamilyKind::Two, 2);
      const Vector P = random_point(rng, 6);
      const Tensor N = *curvature_package(spec, P, 1).nablaR;
      double stray = 0.0;
      for (std::size_t f = 0; f < N.size(); ++f) {
        std::array<int, 5> idx{};
        N.unflatten(f, idx);
        bool off = false;
        for (int i : idx) off = off || i >= 2;
        if (off) stray = std::max(stray, std::abs(N.components()[f]));
      }
      CHECK(stray < 1e-12);
    });
  }
}

TEST_CASE("closed-form curvature values") {
  SUBCASE("family 2, zero profiles, u = (1, 0)") {
    const auto spec = FamilySpec::family2({ScalarProfile(), ScalarProfile()});
    Vector P = Vector::Zero(6);
    P(0) = 1.0;
    const auto o = curvature_oracle(spec, P);
    const Coords2 c = spec.coords2();
    CHECK(o.R(c.u(0), c.u(1), c.u(1), c.u(0)) == 1.0);
    CHECK(o.R(c.u(0), c.u(1), c.u(1), c.t(0)) == 1.0);
    CHECK(o.nablaR(c.u(0), c.u(1), c.u(1), c.u(0), c.u(0)) == 4.0);
  }
  SUBCASE("family 3, psi = u^2") {
    const auto spec = symmetric_family(FamilyKind::Three, 2);
    Rng rng = substream(kSuiteSeed, 18);
    const auto o = curvature_oracle(spec, random_point(rng, 6));
    const Coords3 c = spec.coords3();
    CHECK(o.R(c.x(), c.u(1), c.u(1), c.x()) == 2.0);
    CHECK(o.nablaR.is_zero());
  }
  SUBCASE("family 1, f = sum x^2") {
    const auto spec = symmetric_family(FamilyKind::One, 3);
    Rng rng = substream(kSuiteSeed, 19);
    const auto o = curvature_oracle(spec, random_point(rng, 6));
    CHECK(o.R(0, 1, 1, 0) == 4.0);
    CHECK(o.R(0, 2, 2, 0) == 4.0);
    CHECK(o.nablaR.is_zero());
  }
}

TEST_CASE("family JSON and argument validation") {
  const auto spec = family_from_json(nlohmann::json::parse(R"({"family":2,"s":3,"profiles":"u^5"})"));
  CHECK(spec.kind() == FamilyKind::Two);
  CHECK(spec.size() == 3);
  CHECK(spec.fs()[1].derivative(1.0, 3) == 60.0);
  const auto again = family_from_json(to_json(spec));
  CHECK(again.fs()[2].coeffs() == spec.fs()[2].coeffs());

  const auto fam3 = family_from_json(nlohmann::json::parse(R"({"family":3,"r":2,"psi":"exp"})"));
  CHECK(fam3.psi().derivative(0.0, 2) == doctest::Approx(1.0));

  for (const char* bad : {R"({"family":4,"p":2})", R"({"family":1,"p":1,"profiles":"symmetric"})",
                          R"({"family":2,"s":2,"profiles":["zero"]})", R"({"family":3,"r":2,"psi":"cosh"})",
                          R"({"family":2,"s":2})"}) {
    CAPTURE(bad);
    try {
      family_from_json(nlohmann::json::parse(bad));
      FAIL("accepted a malformed family");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Schema);
    }
  }

  CHECK_THROWS_AS(metric_at(spec, Vector::Zero(4)), Error);
  CHECK_THROWS_AS(metric_jets(symmetric_family(FamilyKind::One, 2), Vector::Zero(4), 4), Error);
  CHECK(metric_jets(symmetric_family(FamilyKind::Two, 2), Vector::Zero(6), 4).order() == 4);
}
