#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmaforge/verifier.hpp"

namespace qmaforge {

struct ProductSearchConfig {
  // Haar-random starting points; one deterministic marginal start is added.
  int restarts = 8;
  // Maximum number of full sweeps over the slots per restart.
  int max_iterations = 500;
  double convergence_tol = 1e-13;
  std::uint64_t seed = 0;
};

// Operator M_i on slot `hold_out` with <phi|M_i|phi> equal to the joint
// quadratic form of M when phi fills that slot and `proofs` fill the others.
ComplexMatrix effective_operator(const AcceptanceOperator& m, const ProofTuple& proofs, std::size_t hold_out);

struct SeesawResult {
  double value = 0.0;
  ProofTuple proofs;
  // Objective after each single-slot update of the winning restart, starting
  // with the value at its initial point.
  std::vector<double> trace;
  // Same, for every restart (the marginal start first).
  std::vector<std::vector<double>> all_traces;
};

// Alternating maximization of <phi_1 ... phi_k|M|phi_1 ... phi_k> over
// product proofs. Slot dimensions must be powers of two whose product is the
// dimension of M. Nonconvex: the value is a lower bound on the product optimum.
SeesawResult seesaw(const AcceptanceOperator& m, const std::vector<std::size_t>& slot_dims,
                    const ProductSearchConfig& config);

// Maximum of the quadratic form over `samples` Haar-random product tuples and
// every computational-basis product tuple. Sample j depends only on (seed, j).
double brute_force_product(const AcceptanceOperator& m, const std::vector<std::size_t>& slot_dims,
                           std::size_t samples, std::uint64_t seed);

// Largest joint dimension brute_force_product accepts.
inline constexpr std::size_t kBruteForceMaxDim = 64;

struct SoundnessCertificate {
  double product_lower_bound = 0.0;    // best product strategy found
  double entangled_upper_bound = 0.0;  // lambda_max(M)
  double threshold = 0.0;
  // lambda_max(M) <= threshold: no strategy, entangled or not, beats it.
  bool conclusive = false;
  // "entangled_upper_bound" or "product_lower_bound".
  std::string bound_used;
  double seesaw_value = 0.0;
  // Set when the brute-force oracle ran; negative otherwise.
  double brute_force_value = -1.0;
  int restarts = 0;
  std::uint64_t seed = 0;

  // The bound named by bound_used.
  double value() const { return conclusive ? entangled_upper_bound : product_lower_bound; }
  bool brute_force_ran() const { return brute_force_value >= 0.0; }
};

// Combines the entangled optimum with a see-saw search (and, when
// `oracle_samples` > 0 and the joint dimension is at most kBruteForceMaxDim,
// the brute-force oracle).
SoundnessCertificate certify_soundness(const Verifier& v, const std::vector<std::size_t>& slot_dims,
                                       double threshold, const ProductSearchConfig& config,
                                       std::size_t oracle_samples = 0);

// Slot dimensions of a verifier's proof registers.
std::vector<std::size_t> proof_slot_dims(const Verifier& v);

}  // namespace qmaforge
