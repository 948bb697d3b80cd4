#pragma once

#include <cstdint>
#include <limits>

#include "qmaforge/linalg.hpp"

namespace qmaforge {

// Mixes a seed with a stream index; used to give every trial, restart, or
// sample its own independent generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Counter-based generator: output n is splitmix64(key + n * golden). Streams
// are reproducible bit-for-bit on every platform; Gaussian variates use our
// own Box-Muller transform rather than std::normal_distribution, whose output
// is implementation-defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  // Uniform on the open interval (0, 1).
  double uniform();
  double gaussian();
  // Standard complex Gaussian: real and imaginary parts each N(0, 1/2).
  Complex complex_gaussian();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

ComplexVector gaussian_vector(CounterRng& rng, Eigen::Index n);
ComplexMatrix gaussian_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace qmaforge
