#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmaforge/states.hpp"
#include "qmaforge/verifier.hpp"

namespace qmaforge {

// ---------------------------------------------------------------------------
// Controlled-swap test
// ---------------------------------------------------------------------------

// Two-proof verifier over registers (B, R1, R2): H on B, swap R1 and R2 when
// B is 1, H on B, accept iff B reads 0. The final X on B maps "B = 0" onto the
// output-qubit-equals-1 acceptance convention.
Verifier swap_test_verifier(int n_qubits);

// 1/2 + tr(rho sigma)/2.
double swap_test_analytic(const DensityOperator& rho, const DensityOperator& sigma);

// Acceptance probability for mixed proofs, by evolving the full density
// matrix |0><0| (x) rho_1 (x) ... (x) rho_k through the circuit.
double accept_probability_mixed(const Verifier& v, const std::vector<DensityOperator>& proofs);

// ---------------------------------------------------------------------------
// Parallel repetition
// ---------------------------------------------------------------------------

struct AmplifiedParams {
  long n_attempts = 0;        // N = 2 p q^2
  long threshold = 0;         // T = ceil(N (c + s) / 2)
  double completeness = 0.0;  // 1 - 2^-p
  double soundness = 0.0;     // 2s / (c + s)
  double soundness_relaxed = 0.0;  // 1 - (c - s) / 2
  double gap_floor = 0.0;          // 1 - 1 / (2q)
};

// Throws HypothesisError unless c - s >= 1/q.
AmplifiedParams amplify(const SystemParams& params, int gap_q, int target_p);

// P[Binomial(N, p) >= T]: acceptance of the repeated system when every attempt
// is run with an independent honest proof accepted with probability p.
double amplified_accept_honest(double per_attempt_p, const AmplifiedParams& amp);

// Runs `attempts` copies of v side by side and accepts iff at least
// `threshold` of them accept. Proof registers are attempt-major.
Verifier parallel_repetition(const Verifier& v, int attempts, int threshold);

// ---------------------------------------------------------------------------
// Proof-count reductions
// ---------------------------------------------------------------------------

struct StageParams {
  int k = 0;
  double epsilon = 0.0;  // completeness 1 - epsilon
  double delta = 0.0;    // soundness 1 - delta
};

struct ReductionReport {
  StageParams input;
  StageParams output;
  std::optional<Verifier> constructed;
};

// Bound arithmetic of one (3a+r) -> (2a+r) stage: (k, eps, delta) ->
// (2a+r, eps/2, delta/20). Throws HypothesisError unless delta > 10 eps.
StageParams reduce_stage_params(const StageParams& in);

// Three proofs -> two proofs of twice the size. Storage order
// (T, O, V..., B, R1, S1, R2, S2) with proof registers P1 = (R1, S1) and
// P2 = (R2, S2). T is a selector prepared in |+>: T = 0 runs the swap test on
// S1 and S2 controlled by B; T = 1 runs v on (V, R1, R2, S1). O is the output.
Verifier reduce_3_to_2(const Verifier& v);

// (3k + r) proofs -> (2k + r) proofs. Proof registers
// P1.j = (R1.j, S1.j), P2.j = (R2.j, S2.j), P3.j = (R3.j, S3.j); any S3 qubit
// reading 1 rejects.
Verifier reduce_3kr_to_2kr(const Verifier& v, int k, int r);

// Honest proofs for the reduced verifier built from honest proofs phi of the
// original: psi_{1,j} = phi_j (x) phi_{2k+j}, psi_{2,j} = phi_{k+j} (x) phi_{2k+j},
// psi_{3,j} = phi_{3k+j} (x) |0>.
ProofTuple reduced_honest_proofs(const ProofTuple& original, int k, int r);

struct ChainResult {
  AmplifiedParams amplification;
  std::vector<ReductionReport> stages;
  std::optional<Verifier> final_verifier;
  // Final soundness is 1 - 1/q_final.
  long q_final = 0;
};

// Amplification bookkeeping followed by (3a+r) -> (2a+r) stages until two
// proofs remain. With `materialize` false only the bound arithmetic is
// produced. A stage that would exceed the dense budget throws SizeLimitError
// naming the stage index.
ChainResult reduce_chain(const Verifier& v, const SystemParams& params, int gap_q, int target_p,
                         bool materialize = true);

// ---------------------------------------------------------------------------
// Perfect soundness
// ---------------------------------------------------------------------------

// One-proof verifier reading all k proofs from a single register "M" of
// k q_M qubits. Same acceptance operator as v.
Verifier concat_proofs(const Verifier& v);

// Proof-free circuit: Hadamard every proof qubit, copy the proof register into
// a fresh register, then run v. Its acceptance equals tr(M) / 2^{q_M}.
Verifier nqp_circuit(const Verifier& v);

struct NqpResult {
  double acceptance = 0.0;
  bool zero = false;  // acceptance <= 1e-12
};

NqpResult nqp_simulation(const Verifier& v);

}  // namespace qmaforge
