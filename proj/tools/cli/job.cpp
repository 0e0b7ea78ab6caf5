#include "job.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <utility>

#include "curvhom/error.hpp"
#include "curvhom/random.hpp"

namespace curvhom::cli {

namespace {

constexpr std::array<std::pair<Command, const char*>, 9> kCommands{{
    {Command::Curvature, "curvature"},
    {Command::Verify, "verify"},
    {Command::Geodesic, "geodesic"},
    {Command::Invariants, "invariants"},
    {Command::ProbeOsserman, "probe-osserman"},
    {Command::ProbeIP, "probe-ip"},
    {Command::Normalize, "normalize"},
    {Command::KP, "kp"},
    {Command::Report, "report"},
}};

const std::set<std::string> kKnownKeys{
    "command", "family", "p",       "s",      "r",     "profiles", "psi",       "seed",
    "points",  "grid",   "count",   "sampler", "tolerances", "output", "sign", "expect",
    "order",   "depth",  "point",   "velocity", "t_max", "samples", "method", "step",
    "invariant"};

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  fail(ErrorKind::Schema, where + ": " + what);
}

double number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  return j.get<double>();
}

int integer(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number_integer()) schema(where, "expected an integer");
  return j.get<int>();
}

Vector vector_field(const nlohmann::json& j, int n, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of numbers");
  if (static_cast<int>(j.size()) != n)
    schema(where, "expected " + std::to_string(n) + " coordinates, got " +
                      std::to_string(j.size()));
  Vector v(n);
  for (int i = 0; i < n; ++i)
    v(i) = number(j[static_cast<std::size_t>(i)], where + "/" + std::to_string(i));
  return v;
}

void parse_sampler(const nlohmann::json& j, SamplerConfig& cfg) {
  if (!j.is_object()) schema("/sampler", "expected an object");
  for (const auto& [key, val] : j.items()) {
    const std::string where = "/sampler/" + key;
    if (key == "count") cfg.count = integer(val, where);
    else if (key == "rejection_cap") cfg.rejection_cap = integer(val, where);
    else if (key == "box") cfg.box = number(val, where);
    else if (key == "frame_fraction") cfg.frame_fraction = number(val, where);
    else if (key == "sparse_fraction") cfg.sparse_fraction = number(val, where);
    else schema(where, "unknown sampler field");
  }
  if (cfg.count < 1) schema("/sampler/count", "must be >= 1");
  if (cfg.rejection_cap < 1) schema("/sampler/rejection_cap", "must be >= 1");
  if (!(cfg.box > 0.0)) schema("/sampler/box", "must be positive");
}

void parse_tolerances(const nlohmann::json& j, Tolerances& t) {
  if (!j.is_object()) schema("/tolerances", "expected an object");
  const std::array<std::pair<const char*, double*>, 16> fields{{
      {"oracle", &t.oracle},
      {"fd", &t.fd},
      {"symmetry", &t.symmetry},
      {"model", &t.model},
      {"rank", &t.rank},
      {"charpoly", &t.charpoly},
      {"zero", &t.zero},
      {"constancy", &t.constancy},
      {"alpha_match", &t.alpha_match},
      {"geodesic", &t.geodesic},
      {"rk4_deviation", &t.rk4_deviation},
      {"roundtrip", &t.roundtrip},
      {"involution", &t.involution},
      {"energy", &t.energy},
      {"isometry", &t.isometry},
      {"nilpotency", &t.nilpotency},
  }};
  for (const auto& [key, val] : j.items()) {
    const std::string where = "/tolerances/" + key;
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const auto& f) { return key == f.first; });
    if (it == fields.end()) schema(where, "unknown tolerance");
    const double v = number(val, where);
    if (!(v > 0.0)) schema(where, "must be positive");
    *it->second = v;
  }
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "unknown";
}

nlohmann::json vec_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

JobConfig parse_job(const nlohmann::json& j) {
  if (!j.is_object()) schema("/", "config must be a JSON object");
  for (const auto& [key, val] : j.items())
    if (!kKnownKeys.count(key)) schema("/" + key, "unknown field");

  JobConfig job;
  job.raw = j;
  if (!j.contains("command")) schema("/command", "missing field");
  if (!j.at("command").is_string()) schema("/command", "expected a string");
  const auto name = j.at("command").get<std::string>();
  auto it = std::find_if(kCommands.begin(), kCommands.end(),
                         [&](const auto& c) { return name == c.second; });
  if (it == kCommands.end()) schema("/command", "unknown command \"" + name + "\"");
  job.command = it->first;

  job.family = family_from_json(j);
  job.family_json = to_json(job.family);
  const int n = job.family.dim();

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() &&
                                                 j.at("seed").get<std::int64_t>() >= 0))
      schema("/seed", "expected a non-negative integer");
    job.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("points")) {
    const auto& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) schema("/points", "expected a non-empty array of points");
    for (std::size_t i = 0; i < pts.size(); ++i)
      job.points.push_back(vector_field(pts[i], n, "/points/" + std::to_string(i)));
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) schema("/grid", "expected an object");
    Grid grid;
    for (const char* key : {"axis", "from", "to", "steps"})
      if (!g.contains(key)) schema(std::string("/grid/") + key, "missing field");
    grid.axis = integer(g.at("axis"), "/grid/axis");
    grid.from = number(g.at("from"), "/grid/from");
    grid.to = number(g.at("to"), "/grid/to");
    grid.steps = integer(g.at("steps"), "/grid/steps");
    if (grid.axis < 0 || grid.axis >= n)
      schema("/grid/axis", "must lie in [0, " + std::to_string(n - 1) + "]");
    if (grid.steps < 1) schema("/grid/steps", "must be >= 1");
    if (g.contains("base")) grid.base = vector_field(g.at("base"), n, "/grid/base");
    job.grid = grid;
  }
  if (j.contains("count")) {
    job.count = integer(j.at("count"), "/count");
    if (job.count < 1) schema("/count", "must be >= 1");
  }
  job.sampler.seed = job.seed;
  if (j.contains("sampler")) parse_sampler(j.at("sampler"), job.sampler);
  if (j.contains("tolerances")) parse_tolerances(j.at("tolerances"), job.tol);
  if (j.contains("output")) {
    if (!j.at("output").is_string()) schema("/output", "expected a string");
    job.output = j.at("output").get<std::string>();
  }
  if (j.contains("sign")) {
    const auto& s = j.at("sign");
    if (s.is_string() && s.get<std::string>() == "spacelike") job.sign = 1;
    else if (s.is_string() && s.get<std::string>() == "timelike") job.sign = -1;
    else if (s.is_number_integer() && (s.get<int>() == 1 || s.get<int>() == -1)) job.sign = s.get<int>();
    else schema("/sign", "expected \"spacelike\", \"timelike\", 1 or -1");
  }
  if (j.contains("expect")) {
    if (!j.at("expect").is_string()) schema("/expect", "expected a string");
    job.expect = j.at("expect").get<std::string>();
    static const std::set<std::string> ok{"constant", "varies", "non-constant"};
    if (!ok.count(job.expect)) schema("/expect", "expected \"constant\", \"varies\" or \"non-constant\"");
  }
  if (j.contains("order")) {
    job.order = integer(j.at("order"), "/order");
    if (job.order != 0 && job.order != 1) schema("/order", "must be 0 or 1");
  }
  if (j.contains("depth")) {
    job.depth = integer(j.at("depth"), "/depth");
    if (job.depth < 0 || job.depth > 2) schema("/depth", "must be 0, 1 or 2");
  }
  if (j.contains("point")) job.point = vector_field(j.at("point"), n, "/point");
  if (j.contains("velocity")) job.velocity = vector_field(j.at("velocity"), n, "/velocity");
  if (j.contains("t_max")) {
    job.t_max = number(j.at("t_max"), "/t_max");
    if (!(job.t_max > 0.0)) schema("/t_max", "must be positive");
  }
  if (j.contains("samples")) {
    job.samples = integer(j.at("samples"), "/samples");
    if (job.samples < 1) schema("/samples", "must be >= 1");
  }
  if (j.contains("method")) {
    if (!j.at("method").is_string()) schema("/method", "expected a string");
    job.method = j.at("method").get<std::string>();
    if (job.method != "recursive" && job.method != "rk4")
      schema("/method", "expected \"recursive\" or \"rk4\"");
  }
  if (j.contains("step")) {
    job.step = number(j.at("step"), "/step");
    if (!(job.step > 0.0)) schema("/step", "must be positive");
  }
  if (j.contains("invariant")) {
    if (!j.at("invariant").is_string()) schema("/invariant", "expected a string");
    job.invariant = j.at("invariant").get<std::string>();
    if (job.invariant != "alpha1" && job.invariant != "alpha2")
      schema("/invariant", "expected \"alpha1\" or \"alpha2\"");
  }
  if (job.command == Command::Geodesic && !job.point) schema("/point", "geodesic needs a point");
  if (job.command == Command::KP && job.family.kind() != FamilyKind::Three)
    schema("/family", "kp needs family 3");
  return job;
}

std::vector<Vector> job_points(const JobConfig& job) {
  if (!job.points.empty()) return job.points;
  const int n = job.family.dim();
  if (job.grid) {
    const Grid& g = *job.grid;
    std::vector<Vector> out;
    const Vector base = g.base ? *g.base : Vector::Zero(n);
    for (int i = 0; i <= g.steps; ++i) {
      Vector P = base;
      P(g.axis) = g.from + (g.to - g.from) * i / g.steps;
      out.push_back(P);
    }
    return out;
  }
  std::vector<Vector> out;
  for (int i = 0; i < job.count; ++i) {
    Rng rng = substream(job.seed ^ 0x9e3779b97f4a7c15ULL, static_cast<std::uint64_t>(i));
    out.push_back(uniform_vector(rng, n, -1.0, 1.0));
  }
  return out;
}

nlohmann::json config_echo(const JobConfig& job) {
  nlohmann::json j = job.raw;
  j["seed"] = job.seed;
  return j;
}

}  // namespace curvhom::cli
