#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "curvhom/error.hpp"

namespace curvhom::cli {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Check deviation_check(std::string name, double value, double tol, nlohmann::json witness,
                      nlohmann::json detail) {
  Check c;
  c.name = std::move(name);
  c.max_deviation = value;
  c.tol = tol;
  c.status = value < tol ? Status::Pass : Status::Fail;
  c.witness = std::move(witness);
  c.detail = std::move(detail);
  return c;
}

void Report::add(Check c) {
  if (c.status == Status::Fail && c.witness.is_null())
    c.witness = c.detail.is_null() ? nlohmann::json("no witness recorded") : c.detail;
  checks.push_back(std::move(c));
}

void Report::run_check(const std::string& name, const std::function<Check()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = fn();
  } catch (const Error& e) {
    c = Check{};
    c.status = Status::Fail;
    c.witness = {{"error", e.what()}, {"kind", static_cast<int>(e.kind())}};
  }
  c.name = name;
  timings_ms[name] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  add(std::move(c));
}

Status Report::status() const {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return Status::Fail;
    if (c.status == Status::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Status::Inconclusive : Status::Pass;
}

nlohmann::json to_json(const Report& r) {
  std::vector<const Check*> sorted;
  for (const auto& c : r.checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Check* a, const Check* b) { return a->name < b->name; });
  auto checks = nlohmann::json::array();
  for (const Check* c : sorted) {
    nlohmann::json j{{"name", c->name}, {"status", to_string(c->status)}};
    if (c->max_deviation) j["max_deviation"] = *c->max_deviation;
    if (c->tol) j["tol"] = *c->tol;
    if (!c->witness.is_null()) j["witness"] = c->witness;
    if (!c->detail.is_null()) j["detail"] = c->detail;
    checks.push_back(j);
  }
  nlohmann::json j;
  j["tool"] = "curvhom";
  j["version"] = CURVHOM_VERSION;
  j["report_schema"] = kReportSchema;
  j["command"] = r.command;
  j["config"] = r.config;
  j["status"] = to_string(r.status());
  j["checks"] = checks;
  j["result"] = r.result;
  j["timings_ms"] = r.timings_ms;
  return j;
}

std::string summary(const Report& r) {
  std::ostringstream out;
  std::vector<const Check*> sorted;
  for (const auto& c : r.checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Check* a, const Check* b) { return a->name < b->name; });
  for (const Check* c : sorted) {
    out << to_string(c->status) << "  " << c->name;
    if (c->max_deviation) out << "  dev=" << *c->max_deviation;
    if (c->tol) out << " tol=" << *c->tol;
    out << "\n";
  }
  out << r.command << ": " << to_string(r.status()) << " (" << r.checks.size() << " checks)\n";
  return out.str();
}

int exit_code(const Report& r) { return r.failed() ? 1 : 0; }

}  // namespace curvhom::cli
