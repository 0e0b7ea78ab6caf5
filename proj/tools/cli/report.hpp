#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "job.hpp"

namespace curvhom::cli {

enum class Status { Pass, Fail, Inconclusive };

std::string to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::Pass;
  std::optional<double> max_deviation;
  std::optional<double> tol;
  nlohmann::json witness;
  nlohmann::json detail;
};

/// pass when value < tol (or <= when inclusive), fail otherwise.
Check deviation_check(std::string name, double value, double tol, nlohmann::json witness = {},
                      nlohmann::json detail = {});

struct Report {
  nlohmann::json config;
  std::string command;
  std::vector<Check> checks;
  nlohmann::json result = nlohmann::json::object();
  std::map<std::string, double> timings_ms;

  /// Runs fn, timing it and turning a thrown Error into a failed check
  /// whose witness carries the message.
  void run_check(const std::string& name, const std::function<Check()>& fn);
  void add(Check c);

  Status status() const;
  bool failed() const { return status() == Status::Fail; }
};

/// Canonical JSON: checks sorted by name, timings under "timings_ms".
nlohmann::json to_json(const Report& r);

/// One line per check plus the overall status.
std::string summary(const Report& r);

/// 0 unless some check failed (1).
int exit_code(const Report& r);

}  // namespace curvhom::cli
