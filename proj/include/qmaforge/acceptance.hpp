#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmaforge/report.hpp"

namespace qmaforge::acceptance {

ExperimentReport swap_test_formula(std::uint64_t seed, int trials = 200);
ExperimentReport fidelity_lemmas(std::uint64_t seed, int trials = 1000);
ExperimentReport three_to_two(std::uint64_t seed, int restarts = 32, std::size_t samples = 1000000);
ExperimentReport general_reduction(std::uint64_t seed);
ExperimentReport amplification(std::uint64_t seed);
ExperimentReport perfect_soundness(std::uint64_t seed, int verifiers = 50);
ExperimentReport indistinguishability(std::uint64_t seed, int trials = 100);
ExperimentReport optimizer_sanity(std::uint64_t seed, int operators = 200);

struct Criterion {
  int number;
  std::string name;
  double time_limit_seconds;
  std::function<ExperimentReport(std::uint64_t)> run;
};

// The eight acceptance criteria with their runtime limits.
std::vector<Criterion> criteria();

}  // namespace qmaforge::acceptance
