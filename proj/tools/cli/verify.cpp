#include <algorithm>
#include <cmath>
#include <set>

#include "curvhom/curvature.hpp"
#include "curvhom/error.hpp"
#include "curvhom/geodesics.hpp"
#include "curvhom/homogeneity.hpp"
#include "curvhom/models.hpp"
#include "curvhom/operators.hpp"
#include "curvhom/random.hpp"
#include "run.hpp"

namespace curvhom::cli {

namespace {

using nlohmann::json;

double tensor_diff(const Tensor& a, const Tensor& b) {
  require(a.size() == b.size(), ErrorKind::DimensionMismatch, "tensor shapes differ");
  double m = 0.0;
  const auto ca = a.components();
  const auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

// Max relative error of exact first metric partials against fourth-order
// central differences of metric_at (step h).
double metric_fd_error(const FamilySpec& spec, const Vector& P, double h) {
  const int n = spec.dim();
  const Tensor dg = metric_jets(spec, P, 1).first_partials();
  double err = 0.0, scale = 1.0;
  for (int c = 0; c < n; ++c) {
    auto g = [&](double s) {
      Vector Q = P;
      Q(c) += s;
      return metric_at(spec, Q).matrix();
    };
    const Matrix fd = (-g(2 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2 * h)) / (12.0 * h);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        err = std::max(err, std::abs(fd(a, b) - dg(a, b, c)));
        scale = std::max(scale, std::abs(dg(a, b, c)));
      }
  }
  return err / scale;
}

int expected_nilpotency(const FamilySpec& spec) {
  switch (spec.kind()) {
    case FamilyKind::One: return 2;
    case FamilyKind::Two: return 3;
    case FamilyKind::Three: return 2 * spec.size();
  }
  return spec.dim();
}

Vector random_velocity(std::uint64_t seed, std::uint64_t i, int n) {
  Rng rng = substream(seed ^ 0x5bd1e995ULL, i);
  return uniform_vector(rng, n, -0.5, 0.5);
}

Vector random_target(std::uint64_t seed, std::uint64_t i, int n) {
  Rng rng = substream(seed ^ 0xc2b2ae35ULL, i);
  return uniform_vector(rng, n, -2.0, 2.0);
}

void families_checks(const JobConfig& job, const std::vector<Vector>& pts, Report& rep) {
  const FamilySpec& spec = job.family;
  rep.run_check("families.metric_fd", [&] {
    double worst = 0.0;
    json witness;
    for (const auto& P : pts) {
      const double e = metric_fd_error(spec, P, 1e-3);
      if (e >= worst) {
        worst = e;
        witness = vec_json(P);
      }
    }
    return deviation_check("", worst, job.tol.fd, witness);
  });
  rep.run_check("families.christoffel_oracle", [&] {
    double worst = 0.0;
    json witness;
    for (const auto& P : pts) {
      const double e = tensor_diff(christoffel_symbols(spec, P), christoffel_oracle(spec, P));
      if (e >= worst) {
        worst = e;
        witness = vec_json(P);
      }
    }
    return deviation_check("", worst, job.tol.oracle, witness);
  });
}

void curvature_checks(const JobConfig& job, const std::vector<Vector>& pts, Report& rep) {
  const FamilySpec& spec = job.family;
  double r_dev = 0.0, n_dev = 0.0, r_sym = 0.0, n_sym = 0.0;
  json r_wit, n_wit, rs_wit, ns_wit;
  bool sym_ok = true, nsym_ok = true;
  rep.run_check("curvature.oracle_R", [&] {
    for (const auto& P : pts) {
      const auto pkg = curvature_package(spec, P, 1);
      const auto oracle = curvature_oracle(spec, P);
      const double dr = tensor_diff(pkg.R, oracle.R);
      const double dn = tensor_diff(*pkg.nablaR, oracle.nablaR);
      if (dr >= r_dev) r_dev = dr, r_wit = vec_json(P);
      if (dn >= n_dev) n_dev = dn, n_wit = vec_json(P);
      const auto sr = check_curvature_symmetries(pkg.R, job.tol.symmetry);
      const auto sn = check_nabla_symmetries(*pkg.nablaR, job.tol.symmetry);
      if (sr.max_violation() >= r_sym) r_sym = sr.max_violation(), rs_wit = vec_json(P);
      if (sn.max_violation() >= n_sym) n_sym = sn.max_violation(), ns_wit = vec_json(P);
      sym_ok = sym_ok && sr.pass();
      nsym_ok = nsym_ok && sn.pass();
    }
    return deviation_check("", r_dev, job.tol.oracle, r_wit);
  });
  rep.add(deviation_check("curvature.oracle_nablaR", n_dev, job.tol.oracle, n_wit));
  Check s = deviation_check("curvature.symmetries_R", r_sym, job.tol.symmetry, rs_wit);
  s.status = sym_ok ? Status::Pass : Status::Fail;
  s.detail = {{"scaled", true}};
  rep.add(s);
  Check ns = deviation_check("curvature.symmetries_nablaR", n_sym, job.tol.symmetry, ns_wit);
  ns.status = nsym_ok ? Status::Pass : Status::Fail;
  ns.detail = {{"scaled", true}};
  rep.add(ns);
}

void operator_checks(const JobConfig& job, const std::vector<Vector>& pts, Report& rep) {
  const FamilySpec& spec = job.family;
  const int n = spec.dim();
  rep.run_check("operators.jacobi_structure", [&] {
    double worst = 0.0;
    json witness;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto pkg = curvature_package(spec, pts[i], 0);
      const Matrix& G = pkg.g.matrix();
      for (int k = 0; k < 4; ++k) {
        Rng rng = substream(job.seed ^ 0x1234ULL, i * 4 + static_cast<std::size_t>(k));
        const Vector x = uniform_vector(rng, n, -1.0, 1.0);
        const Matrix J = jacobi(pkg.R, pkg.g, x);
        const double scale = std::max(1.0, J.cwiseAbs().maxCoeff() * G.cwiseAbs().maxCoeff());
        const double self_adj = (J.transpose() * G - G * J).cwiseAbs().maxCoeff() / scale;
        const double kills_x = (J * x).cwiseAbs().maxCoeff() / std::max(1.0, J.cwiseAbs().maxCoeff());
        const double d = std::max(self_adj, kills_x);
        if (d >= worst) worst = d, witness = {{"point", vec_json(pts[i])}, {"x", vec_json(x)}};
      }
    }
    return deviation_check("", worst, 1e-10, witness);
  });
  rep.run_check("operators.nilpotency", [&] {
    const int expected = expected_nilpotency(spec);
    int worst = 0;
    json witness;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto pkg = curvature_package(spec, pts[i], 0);
      for (int k = 0; k < 8; ++k) {
        Rng rng = substream(job.seed ^ 0x4321ULL, i * 8 + static_cast<std::size_t>(k));
        const Vector x = uniform_vector(rng, n, -1.0, 1.0);
        const Matrix J = jacobi(pkg.R, pkg.g, x);
        const auto idx = nilpotency_index(J, job.tol.nilpotency);
        const int v = idx ? *idx : n + 1;
        if (v > worst) worst = v, witness = {{"point", vec_json(pts[i])}, {"x", vec_json(x)}};
      }
    }
    Check c;
    c.status = worst <= expected ? Status::Pass : Status::Fail;
    c.detail = {{"max_index", worst}, {"bound", expected}};
    if (c.status == Status::Fail) c.witness = witness;
    return c;
  });
  rep.run_check("operators.skew_structure", [&] {
    double worst = 0.0;
    json witness;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto pkg = curvature_package(spec, pts[i], 0);
      Rng rng = substream(job.seed ^ 0x7777ULL, i);
      const auto [e1, e2] = draw_plane(rng, pkg.g, 1, job.sampler);
      const Matrix S = skew_curvature_operator(pkg.R, pkg.g, e1, e2);
      const Matrix& G = pkg.g.matrix();
      const double scale = std::max(1.0, S.cwiseAbs().maxCoeff() * G.cwiseAbs().maxCoeff());
      const double d = (S.transpose() * G + G * S).cwiseAbs().maxCoeff() / scale;
      if (d >= worst) worst = d, witness = {{"point", vec_json(pts[i])}, {"e1", vec_json(e1)}, {"e2", vec_json(e2)}};
    }
    return deviation_check("", worst, 1e-10, witness);
  });
  if (spec.kind() == FamilyKind::Three) return;

  ProbeOptions opt;
  opt.rank_tol = job.tol.rank;
  opt.charpoly_tol = job.tol.charpoly;
  auto jordan = [&](const std::string& name, int sign, bool expect_constant) {
    rep.run_check(name, [&, sign, expect_constant] {
      ProbeOptions o = opt;
      o.search_witness = !expect_constant;
      const auto v = jordan_probe(spec, pts, sign, job.sampler, o);
      Check c;
      c.detail = to_json(v);
      if (expect_constant) {
        c.status = v.constant ? Status::Pass : Status::Fail;
        if (!v.constant) c.witness = c.detail.value("witness", json());
      } else {
        c.status = v.constant ? Status::Inconclusive : Status::Pass;
      }
      return c;
    });
  };
  jordan("operators.jordan_spacelike", 1, true);
  jordan("operators.jordan_timelike", -1, spec.kind() == FamilyKind::One);

  auto ip = [&](const std::string& name, int sign, int rank) {
    rep.run_check(name, [&, sign, rank] {
      const auto v = ip_probe(spec, pts, sign, job.sampler, opt);
      Check c;
      c.detail = to_json(v);
      const bool ok = v.constant && !v.ranks.empty() && v.ranks.front() == rank;
      c.status = ok ? Status::Pass : Status::Fail;
      if (!ok) c.witness = c.detail.value("witness", c.detail);
      return c;
    });
  };
  if (spec.kind() == FamilyKind::One) {
    ip("operators.ip_spacelike", 1, 2);
    ip("operators.ip_timelike", -1, 2);
  } else {
    ip("operators.ip_spacelike", 1, 4);
  }
}

void model_checks(const JobConfig& job, const std::vector<Vector>& pts, Report& rep) {
  const FamilySpec& spec = job.family;
  std::vector<int> orders{0};
  if (spec.kind() == FamilyKind::Three) orders.push_back(1);
  for (int order : orders) {
    const std::string name = order == 0 ? "models.match" : "models.match_order1";
    rep.run_check(name, [&, order] {
      const ModelSpace model = build_model(model_for(spec.kind(), order), spec.size());
      double worst = 0.0;
      json witness;
      int used = 0;
      json skipped = json::array();
      for (const auto& P : pts) {
        if (order == 1) {
          const Coords3 c = spec.coords3();
          if (std::abs(spec.psi().derivative(P(c.u(spec.size() - 1)), 3)) <= job.tol.zero) {
            skipped.push_back(vec_json(P));
            continue;
          }
        }
        NormalizedBasis basis;
        try {
          basis = normalize(spec, P, order);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotPositiveDefinite && e.kind() != ErrorKind::InvalidArgument)
            throw;
          skipped.push_back(vec_json(P));
          continue;
        }
        const auto m = verify_model_match(basis, curvature_package(spec, P, order), model,
                                          job.tol.model);
        double d = std::max(m.g_deviation, m.A_deviation);
        if (m.A1_deviation) d = std::max(d, *m.A1_deviation);
        ++used;
        if (d >= worst) worst = d, witness = vec_json(P);
      }
      Check c = deviation_check("", worst, job.tol.model, witness);
      c.detail = {{"points_used", used}, {"skipped", skipped}, {"model", to_string(model.kind)}};
      if (used == 0) c.status = Status::Inconclusive;
      return c;
    });
  }
  rep.run_check("models.annihilator", [&] {
    const ModelSpace model = build_model(model_for(spec.kind(), 0), spec.size());
    const Matrix K = annihilator(model.A);
    const int n = model.dim();
    double worst = 0.0;
    for (Eigen::Index col = 0; col < K.cols(); ++col)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int l = 0; l < n; ++l) s += model.A(i, j, k, l) * K(l, col);
            worst = std::max(worst, std::abs(s));
          }
    Check c = deviation_check("", worst, 1e-12);
    c.detail = {{"dimension", K.cols()}};
    return c;
  });
  if (spec.kind() == FamilyKind::One || spec.kind() == FamilyKind::Two) {
    rep.run_check("models.irreducibility", [&] {
      const auto which = spec.kind() == FamilyKind::One ? ReducedModel::B1p : ReducedModel::B2s;
      const auto v = irreducibility_witness_probe(which, spec.size(), job.seed);
      Check c;
      c.status = v.pass() ? Status::Pass : Status::Fail;
      c.max_deviation = std::max(v.max_hypothesis_residual, v.max_conclusion_residual);
      c.tol = v.tol;
      c.detail = {{"trials", v.trials}, {"generic_violations", v.generic_violations}};
      return c;
    });
  }
  if (spec.kind() == FamilyKind::One) {
    rep.run_check("models.bilinear_injectivity", [&] {
      const auto r = bilinear_injectivity_probe(spec.size(), 50, job.seed);
      Check c;
      c.status = r.min_curvature_distance > 1e-12 ? Status::Pass : Status::Fail;
      c.detail = {{"pairs", r.pairs},
                  {"min_form_distance", r.min_form_distance},
                  {"min_curvature_distance", r.min_curvature_distance}};
      return c;
    });
  }
}

void homogeneity_checks(const JobConfig& job, const std::vector<Vector>& pts, Report& rep) {
  const FamilySpec& spec = job.family;
  if (spec.kind() == FamilyKind::One) {
    rep.run_check("homogeneity.alpha1_fast_path", [&] {
      double worst = 0.0;
      json witness;
      int used = 0;
      for (const auto& P : pts) {
        double fast = 0.0;
        try {
          fast = alpha1(spec, P);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
          continue;
        }
        const double brute = alpha1_bruteforce(spec, P);
        const double d = std::abs(fast - brute) / std::max(1.0, std::abs(brute));
        ++used;
        if (d >= worst) worst = d, witness = vec_json(P);
      }
      Check c = deviation_check("", worst, job.tol.alpha_match, witness);
      c.detail = {{"points_used", used}};
      if (used == 0) c.status = Status::Inconclusive;
      return c;
    });
  }
  if ((spec.kind() == FamilyKind::One || spec.kind() == FamilyKind::Two) && pts.size() >= 2) {
    rep.run_check("homogeneity.constancy_scan", [&] {
      const auto inv = spec.kind() == FamilyKind::One ? Invariant::Alpha1 : Invariant::Alpha2;
      std::vector<Vector> usable;
      for (const auto& P : pts) {
        if (inv == Invariant::Alpha1) {
          try {
            alpha1(spec, P);
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
            continue;
          }
        }
        usable.push_back(P);
      }
      Check c;
      if (usable.size() < 2) {
        c.status = Status::Inconclusive;
        c.detail = {{"reason", "fewer than two points with a positive definite Hessian"}};
        return c;
      }
      c.detail = to_json(constancy_scan(inv, spec, usable, job.tol.constancy));
      return c;
    });
  }
  if (spec.kind() == FamilyKind::Three) {
    rep.run_check("homogeneity.kp_support", [&] {
      const Coords3 co = spec.coords3();
      const int ur = co.u(spec.size() - 1);
      Check c;
      json rows = json::array();
      bool marginal = false;
      for (const auto& P : pts) {
        const auto k = kp_classify(spec, P, job.tol.zero);
        const auto support = kp_support(spec, P, job.tol.zero);
        const bool third = std::abs(spec.psi().derivative(P(ur), 3)) > job.tol.zero;
        std::set<int> expected;
        if (k.quartic_nonzero) expected.insert(ur);
        if (k.mixed_nonzero && third) expected.insert(co.x());
        const bool ok = std::set<int>(support.begin(), support.end()) == expected;
        marginal = marginal || k.marginal;
        rows.push_back({{"point", vec_json(P)}, {"class", to_json(k)}, {"support", support}});
        if (!ok && !k.marginal && c.status != Status::Fail) {
          c.status = Status::Fail;
          c.witness = rows.back();
        }
      }
      if (c.status != Status::Fail && marginal) c.status = Status::Inconclusive;
      c.detail = rows;
      return c;
    });
  }
}

void geodesic_checks(const JobConfig& job, const std::vector<Vector>& pts, Report& rep) {
  const FamilySpec& spec = job.family;
  const int n = spec.dim();
  const std::size_t ng = std::min<std::size_t>(pts.size(), 2);
  rep.run_check("geodesics.triangular_order", [&] {
    Check c;
    c.detail = to_json(triangular_order(spec));
    return c;
  });
  std::vector<Geodesic> curves;
  rep.run_check("geodesics.recursive_vs_rk4", [&] {
    double worst = 0.0;
    json witness;
    for (std::size_t i = 0; i < ng; ++i) {
      const Vector v = random_velocity(job.seed, i, n);
      curves.push_back(integrate_recursive(spec, pts[i], v, 10.0, job.tol.geodesic));
      const auto rk = integrate_rk4(spec, pts[i], v, 10.0, 0.02);
      for (int k = 0; k <= 100; ++k) {
        const double t = 0.1 * k;
        const double d =
            (curves.back().position(t) - rk.position(t)).cwiseAbs().maxCoeff();
        if (d >= worst)
          worst = d, witness = {{"point", vec_json(pts[i])}, {"velocity", vec_json(v)}, {"t", t}};
      }
    }
    return deviation_check("", worst, job.tol.rk4_deviation, witness);
  });
  rep.run_check("geodesics.energy", [&] {
    double worst = 0.0;
    json witness;
    std::vector<double> ts;
    for (int k = 0; k <= 100; ++k) ts.push_back(0.1 * k);
    for (const auto& g : curves) {
      const auto e = energy_along(g, ts);
      const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
      if (*hi - *lo >= worst)
        worst = *hi - *lo,
        witness = {{"point", vec_json(g.initial_point())}, {"velocity", vec_json(g.initial_velocity())}};
    }
    return deviation_check("", worst, job.tol.energy, witness);
  });
  if (spec.kind() == FamilyKind::One) {
    rep.run_check("geodesics.affine_x", [&] {
      double worst = 0.0;
      for (const auto& g : curves)
        for (int k = 0; k <= g.intervals(); ++k) {
          const double t = g.t_max() * k / g.intervals();
          const auto st = g.node(k);
          for (int i = 0; i < spec.size(); ++i)
            worst = std::max(worst, std::abs(st.position(i) - (g.initial_point()(i) +
                                                               g.initial_velocity()(i) * t)));
        }
      Check c;
      c.status = worst == 0.0 ? Status::Pass : Status::Fail;
      c.max_deviation = worst;
      return c;
    });
  }
  rep.run_check("geodesics.exp_log_roundtrip", [&] {
    double worst = 0.0;
    json witness;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vector Q = random_target(job.seed, i, n);
      const Vector w = log_map(spec, pts[i], Q, job.tol.geodesic);
      const double d = (exp_map(spec, pts[i], w, job.tol.geodesic) - Q).cwiseAbs().maxCoeff();
      if (d >= worst) worst = d, witness = {{"P", vec_json(pts[i])}, {"Q", vec_json(Q)}};
    }
    return deviation_check("", worst, job.tol.roundtrip, witness);
  });
  rep.run_check("geodesics.symmetry_involution", [&] {
    double worst = 0.0;
    json witness;
    for (std::size_t i = 0; i < ng; ++i) {
      const Vector Q = random_target(job.seed, 100 + i, n);
      const Vector once = geodesic_symmetry(spec, pts[i], Q, job.tol.geodesic);
      const double d =
          (geodesic_symmetry(spec, pts[i], once, job.tol.geodesic) - Q).cwiseAbs().maxCoeff();
      if (d >= worst) worst = d, witness = {{"P", vec_json(pts[i])}, {"Q", vec_json(Q)}};
    }
    return deviation_check("", worst, job.tol.involution, witness);
  });

  // The isometry property of S_P is only claimed where nabla R vanishes.
  double nabla = 0.0;
  for (const auto& P : pts) nabla = std::max(nabla, curvature_package(spec, P, 1).nablaR->max_abs());
  if (nabla < job.tol.oracle) {
    rep.run_check("geodesics.symmetry_isometry", [&] {
      const Vector P = pts.front();
      std::vector<Vector> samples;
      for (std::size_t i = 0; i < std::min<std::size_t>(pts.size(), 3); ++i) {
        Rng rng = substream(job.seed ^ 0x1505ULL, i);
        samples.push_back(uniform_vector(rng, n, -1.0, 1.0));
      }
      const auto r = isometry_check(
          spec, [&](const Vector& q) { return geodesic_symmetry(spec, P, q, job.tol.geodesic); },
          samples, job.tol.isometry);
      Check c = deviation_check("", r.max_deviation, job.tol.isometry);
      c.detail = to_json(r);
      if (c.status == Status::Fail) c.witness = c.detail["witness"];
      return c;
    });
  }
}

}  // namespace

void run_verify(const JobConfig& job, Report& rep) {
  const auto pts = job_points(job);
  families_checks(job, pts, rep);
  curvature_checks(job, pts, rep);
  operator_checks(job, pts, rep);
  model_checks(job, pts, rep);
  homogeneity_checks(job, pts, rep);
  geodesic_checks(job, pts, rep);
}

}  // namespace curvhom::cli
