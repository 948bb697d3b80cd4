#include "qmaforge/report.hpp"

#include <algorithm>
#include <cmath>

namespace qmaforge {

ExperimentReport::ExperimentReport(std::string subcommand, std::string anchor, std::uint64_t seed)
    : subcommand_(std::move(subcommand)), anchor_(std::move(anchor)), seed_(seed) {}

CheckResult& ExperimentReport::check_close(std::string name, double measured, double expected, double tolerance) {
  const bool ok = std::abs(measured - expected) <= tolerance;
  return results_.emplace_back(CheckResult{std::move(name), measured, expected, tolerance, "close", ok});
}

CheckResult& ExperimentReport::check_at_most(std::string name, double measured, double bound, double tolerance) {
  const bool ok = measured <= bound + tolerance;
  return results_.emplace_back(CheckResult{std::move(name), measured, bound, tolerance, "at_most", ok});
}

CheckResult& ExperimentReport::check_at_least(std::string name, double measured, double bound, double tolerance) {
  const bool ok = measured >= bound - tolerance;
  return results_.emplace_back(CheckResult{std::move(name), measured, bound, tolerance, "at_least", ok});
}

CheckResult& ExperimentReport::check_true(std::string name, bool condition) {
  return results_.emplace_back(
      CheckResult{std::move(name), condition ? 1.0 : 0.0, 1.0, 0.0, "close", condition});
}

void ExperimentReport::merge(const ExperimentReport& other, const std::string& prefix) {
  for (auto r : other.results_) {
    r.name = prefix + r.name;
    results_.push_back(std::move(r));
  }
}

bool ExperimentReport::pass() const {
  return std::all_of(results_.begin(), results_.end(), [](const CheckResult& r) { return r.pass; });
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : results_) {
    results.push_back({{"check", r.name},
                       {"measured", r.measured},
                       {"expected", r.expected},
                       {"tolerance", r.tolerance},
                       {"relation", r.relation},
                       {"pass", r.pass}});
  }
  nlohmann::json out = {{"subcommand", subcommand_},
                        {"anchor", anchor_},
                        {"seed", seed_},
                        {"config", config_},
                        {"results", std::move(results)},
                        {"pass", pass()},
                        {"wall_time", wall_time_}};
  if (!details_.empty()) out["details"] = details_;
  return out;
}

}  // namespace qmaforge
