#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "curvhom/curvature.hpp"
#include "curvhom/error.hpp"
#include "curvhom/geodesics.hpp"
#include "curvhom/homogeneity.hpp"
#include "curvhom/models.hpp"
#include "curvhom/operators.hpp"

namespace curvhom::cli {

namespace {

using nlohmann::json;

void run_curvature(const JobConfig& job, Report& rep) {
  const auto pts = job_points(job);
  json rows = json::array();
  rep.run_check("curvature.symmetries", [&] {
    double worst = 0.0;
    json witness;
    bool ok = true;
    for (const auto& P : pts) {
      const auto pkg = curvature_package(job.family, P, job.depth);
      json row = to_json(pkg, job.tol.zero);
      const auto sr = check_curvature_symmetries(pkg.R, job.tol.symmetry);
      row["symmetries_R"] = to_json(sr);
      double v = sr.max_violation();
      bool pass = sr.pass();
      if (pkg.nablaR) {
        const auto sn = check_nabla_symmetries(*pkg.nablaR, job.tol.symmetry);
        row["symmetries_nablaR"] = to_json(sn);
        v = std::max(v, sn.max_violation());
        pass = pass && sn.pass();
      }
      rows.push_back(row);
      if (v >= worst) worst = v, witness = vec_json(P);
      ok = ok && pass;
    }
    Check c = deviation_check("", worst, job.tol.symmetry, witness);
    c.status = ok ? Status::Pass : Status::Fail;
    return c;
  });
  rep.run_check("curvature.oracle", [&] {
    double worst = 0.0;
    json witness;
    for (const auto& P : pts) {
      const auto pkg = curvature_package(job.family, P, std::min(job.depth, 1));
      const auto oracle = curvature_oracle(job.family, P);
      double d = max_abs_diff(pkg.R, oracle.R);
      if (pkg.nablaR) d = std::max(d, max_abs_diff(*pkg.nablaR, oracle.nablaR));
      if (d >= worst) worst = d, witness = vec_json(P);
    }
    return deviation_check("", worst, job.tol.oracle, witness);
  });
  rep.result["points"] = rows;
}

void run_geodesic(const JobConfig& job, Report& rep) {
  const Vector P = *job.point;
  const Vector v = job.velocity ? *job.velocity : Vector::Zero(job.family.dim());
  rep.run_check("geodesics.integrate", [&] {
    const Geodesic g = job.method == "rk4"
                           ? integrate_rk4(job.family, P, v, job.t_max, job.step)
                           : integrate_recursive(job.family, P, v, job.t_max, job.tol.geodesic);
    const json traj = trajectory_json(g, job.samples);
    double lo = traj.front()["energy"].get<double>(), hi = lo;
    for (const auto& row : traj) {
      lo = std::min(lo, row["energy"].get<double>());
      hi = std::max(hi, row["energy"].get<double>());
    }
    rep.result["method"] = g.method();
    rep.result["intervals"] = g.intervals();
    rep.result["trajectory"] = traj;
    Check c = deviation_check("", hi - lo, job.tol.energy);
    c.detail = {{"quantity", "energy spread"}};
    if (c.status == Status::Fail) c.witness = {{"point", vec_json(P)}, {"velocity", vec_json(v)}};
    return c;
  });
}

Invariant pick_invariant(const JobConfig& job) {
  if (job.invariant == "alpha1") return Invariant::Alpha1;
  if (job.invariant == "alpha2") return Invariant::Alpha2;
  require(job.family.kind() != FamilyKind::Three, ErrorKind::Schema,
          "/invariant: family 3 has no scalar invariant; use the kp command");
  return job.family.kind() == FamilyKind::One ? Invariant::Alpha1 : Invariant::Alpha2;
}

void run_invariants(const JobConfig& job, Report& rep) {
  const Invariant inv = pick_invariant(job);
  rep.run_check("homogeneity.constancy", [&] {
    const auto scan = constancy_scan(inv, job.family, job_points(job), job.tol.constancy);
    rep.result = to_json(scan);
    Check c;
    c.max_deviation = scan.spread;
    c.detail = {{"verdict", rep.result["verdict"]}};
    if (job.expect == "constant" || job.expect == "non-constant") {
      const bool ok = scan.constant == (job.expect == "constant");
      c.status = ok ? Status::Pass : Status::Fail;
      if (!ok) c.witness = rep.result["values"];
    }
    return c;
  });
}

Check probe_check(const ProbeVerdict& v, const std::string& expect) {
  Check c;
  c.detail = to_json(v);
  if (expect == "constant") {
    c.status = v.constant ? Status::Pass : Status::Fail;
    if (!v.constant) c.witness = c.detail.value("witness", json());
  } else if (expect == "varies") {
    c.status = v.constant ? Status::Inconclusive : Status::Pass;
  }
  return c;
}

void run_probe(const JobConfig& job, Report& rep, bool planes) {
  ProbeOptions opt;
  opt.rank_tol = job.tol.rank;
  opt.charpoly_tol = job.tol.charpoly;
  opt.search_witness = job.expect == "varies";
  const std::string name = planes ? "operators.ip_probe" : "operators.jordan_probe";
  rep.run_check(name, [&] {
    const auto pts = job_points(job);
    const auto v = planes ? ip_probe(job.family, pts, job.sign, job.sampler, opt)
                          : jordan_probe(job.family, pts, job.sign, job.sampler, opt);
    rep.result = to_json(v);
    rep.result["sign"] = job.sign > 0 ? "spacelike" : "timelike";
    return probe_check(v, job.expect);
  });
}

void run_normalize(const JobConfig& job, Report& rep) {
  json rows = json::array();
  rep.run_check("models.match", [&] {
    const ModelSpace model = build_model(model_for(job.family.kind(), job.order), job.family.size());
    double worst = 0.0;
    json witness;
    for (const auto& P : job_points(job)) {
      const auto basis = normalize(job.family, P, job.order);
      const auto m = verify_model_match(basis, curvature_package(job.family, P, job.order), model,
                                        job.tol.model);
      double d = std::max(m.g_deviation, m.A_deviation);
      if (m.A1_deviation) d = std::max(d, *m.A1_deviation);
      rows.push_back({{"basis", to_json(basis)}, {"match", to_json(m)}});
      if (d >= worst) worst = d, witness = vec_json(P);
    }
    rep.result["model"] = to_string(model.kind);
    return deviation_check("", worst, job.tol.model, witness);
  });
  rep.result["points"] = rows;
}

void run_kp(const JobConfig& job, Report& rep) {
  const auto pts = job_points(job);
  json rows = json::array();
  rep.run_check("homogeneity.kp_support", [&] {
    const Coords3 co = job.family.coords3();
    const int ur = co.u(job.family.size() - 1);
    Check c;
    bool marginal = false;
    for (const auto& P : pts) {
      const auto k = kp_classify(job.family, P, job.tol.zero);
      const auto support = kp_support(job.family, P, job.tol.zero);
      const bool third = std::abs(job.family.psi().derivative(P(ur), 3)) > job.tol.zero;
      std::vector<int> expected;
      if (k.quartic_nonzero) expected.push_back(ur);
      if (k.mixed_nonzero && third) expected.push_back(co.x());
      std::sort(expected.begin(), expected.end());
      rows.push_back({{"point", vec_json(P)}, {"class", to_json(k)}, {"support", support}});
      marginal = marginal || k.marginal;
      if (support != expected && !k.marginal && c.status != Status::Fail) {
        c.status = Status::Fail;
        c.witness = rows.back();
      }
    }
    if (c.status != Status::Fail && marginal) c.status = Status::Inconclusive;
    return c;
  });
  rep.result["points"] = rows;
  if (pts.size() >= 2) {
    const auto cmp = kp_scan(job.family, pts[0], pts[1], job.tol.zero);
    rep.result["differ"] = cmp.differ;
  }
}

}  // namespace

Report run(const JobConfig& job) {
  Report rep;
  rep.command = to_string(job.command);
  rep.config = config_echo(job);
  const auto t0 = std::chrono::steady_clock::now();
  switch (job.command) {
    case Command::Curvature: run_curvature(job, rep); break;
    case Command::Verify: run_verify(job, rep); break;
    case Command::Geodesic: run_geodesic(job, rep); break;
    case Command::Invariants: run_invariants(job, rep); break;
    case Command::ProbeOsserman: run_probe(job, rep, false); break;
    case Command::ProbeIP: run_probe(job, rep, true); break;
    case Command::Normalize: run_normalize(job, rep); break;
    case Command::KP: run_kp(job, rep); break;
    case Command::Report:
      run_verify(job, rep);
      run_curvature(job, rep);
      break;
  }
  rep.timings_ms["total"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace curvhom::cli
