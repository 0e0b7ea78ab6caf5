#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/families.hpp"
#include "curvhom/linalg.hpp"
#include "curvhom/operators.hpp"

namespace curvhom::cli {

inline constexpr int kReportSchema = 1;

enum class Command {
  Curvature,
  Verify,
  Geodesic,
  Invariants,
  ProbeOsserman,
  ProbeIP,
  Normalize,
  KP,
  Report
};

std::string to_string(Command c);

struct Tolerances {
  double oracle = 1e-9;
  double fd = 1e-5;
  double symmetry = 1e-10;
  double model = 1e-10;
  double rank = kDefaultRankTol;
  double charpoly = 1e-8;
  double zero = 1e-10;
  double constancy = 1e-9;
  double alpha_match = 1e-9;
  double geodesic = 1e-12;
  double rk4_deviation = 1e-6;
  double roundtrip = 1e-8;
  double involution = 1e-7;
  double energy = 1e-8;
  double isometry = 1e-5;
  double nilpotency = 1e-8;
};

struct Grid {
  int axis = 0;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
  std::optional<Vector> base;
};

struct JobConfig {
  Command command = Command::Verify;
  FamilySpec family;
  nlohmann::json family_json;
  std::uint64_t seed = 0;
  std::vector<Vector> points;
  std::optional<Grid> grid;
  /// Random points drawn from [-1, 1]^n when neither points nor grid are given.
  int count = 5;
  SamplerConfig sampler;
  Tolerances tol;
  std::string output;

  /// probe-osserman / probe-ip: +1 spacelike, -1 timelike.
  int sign = 1;
  /// "constant" or "varies" for probes, "constant" or "non-constant" for
  /// invariants; empty means report only.
  std::string expect;
  /// normalize: 0 or 1 (family 3).
  int order = 0;
  /// curvature: 0, 1 or 2.
  int depth = 1;

  // geodesic
  std::optional<Vector> point;
  std::optional<Vector> velocity;
  double t_max = 1.0;
  int samples = 10;
  std::string method = "recursive";
  double step = 0.01;

  /// invariants: "alpha1" or "alpha2"; empty picks the family's invariant.
  std::string invariant;

  nlohmann::json raw;
};

/// Throws Error(Schema) naming the offending field as a JSON pointer.
JobConfig parse_job(const nlohmann::json& j);

/// Points of the job: explicit, grid, or seeded random in [-1, 1]^n.
std::vector<Vector> job_points(const JobConfig& job);

/// The config as it will be echoed: input fields plus the effective seed.
nlohmann::json config_echo(const JobConfig& job);

nlohmann::json vec_json(const Vector& v);

}  // namespace curvhom::cli
