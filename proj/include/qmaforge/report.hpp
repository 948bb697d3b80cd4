#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qmaforge {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  // "close": |measured - expected| <= tolerance
  // "at_most": measured <= expected + tolerance
  // "at_least": measured >= expected - tolerance
  std::string relation;
  bool pass = false;
};

// Structured record of one run. Passes iff every check passes.
class ExperimentReport {
 public:
  ExperimentReport(std::string subcommand, std::string anchor, std::uint64_t seed);

  CheckResult& check_close(std::string name, double measured, double expected, double tolerance);
  CheckResult& check_at_most(std::string name, double measured, double bound, double tolerance = 0.0);
  CheckResult& check_at_least(std::string name, double measured, double bound, double tolerance = 0.0);
  CheckResult& check_true(std::string name, bool condition);

  // Appends another report's checks, prefixing their names.
  void merge(const ExperimentReport& other, const std::string& prefix);

  nlohmann::json& config() { return config_; }
  nlohmann::json& details() { return details_; }
  const std::vector<CheckResult>& results() const { return results_; }
  const std::string& subcommand() const { return subcommand_; }
  bool pass() const;
  void set_wall_time(double seconds) { wall_time_ = seconds; }

  nlohmann::json to_json() const;

 private:
  std::string subcommand_;
  std::string anchor_;
  std::uint64_t seed_;
  nlohmann::json config_ = nlohmann::json::object();
  nlohmann::json details_ = nlohmann::json::object();
  std::vector<CheckResult> results_;
  double wall_time_ = 0.0;
};

}  // namespace qmaforge
