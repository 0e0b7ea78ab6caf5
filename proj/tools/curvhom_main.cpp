#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli/job.hpp"
#include "cli/report.hpp"
#include "cli/run.hpp"
#include "curvhom/error.hpp"

namespace {

constexpr int kExitSchema = 2;

int schema_error(const std::string& what) {
  std::cerr << "curvhom: config error: " << what << "\n";
  return kExitSchema;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvhom: curvature-homogeneous metric laboratory"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON job config")->required();
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_flag("--quiet", quiet, "Suppress the human-readable summary");
  app.set_version_flag("--version", CURVHOM_VERSION);
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(config_path);
  if (!in) return schema_error("cannot read " + config_path);
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    return schema_error(std::string("/: ") + e.what());
  }
  if (seed && raw.is_object()) raw["seed"] = *seed;

  curvhom::cli::JobConfig job;
  try {
    job = curvhom::cli::parse_job(raw);
  } catch (const curvhom::Error& e) {
    return schema_error(e.what());
  }
  if (out_path.empty()) out_path = job.output;

  curvhom::cli::Report rep;
  try {
    rep = curvhom::cli::run(job);
  } catch (const curvhom::Error& e) {
    if (e.kind() == curvhom::ErrorKind::Schema) return schema_error(e.what());
    throw;
  }
  const std::string text = curvhom::cli::to_json(rep).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    if (!quiet) std::cerr << curvhom::cli::summary(rep);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "curvhom: cannot write " << out_path << "\n";
      return 1;
    }
    out << text;
    if (!quiet) std::cout << curvhom::cli::summary(rep);
  }
  return curvhom::cli::exit_code(rep);
}
