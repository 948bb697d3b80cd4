#pragma once

#include <cstdint>
#include <vector>

#include "qmaforge/verifier.hpp"

namespace qmaforge {

// Verifier with one work qubit "V" (the output) and k = log2(accept.size())
// one-qubit proofs "P1".."Pk". On the computational-basis proof x it accepts
// with probability accept[x]; with `hadamard_last` the last proof is read in
// the Hadamard basis instead. The acceptance operator is diagonal (up to that
// Hadamard) with the entries of `accept`.
Verifier rotation_verifier(const std::vector<double>& accept, bool hadamard_last = false);

// Three-proof instances of the rotation verifier. The yes-instance accepts the
// honest proofs |0>, |0>, |+> with probability 0.95 and has entangled optimum
// 0.95; the no-instance has entangled optimum 0.4.
Verifier toy_yes_verifier();
Verifier toy_no_verifier();
ProofTuple toy_honest_proofs();

// Identity on work "W" (work_qubits) and proofs "P1".."Pk": never accepts.
Verifier always_reject(int work_qubits, int proof_count, int proof_qubits);
// X on the output qubit: always accepts.
Verifier always_accept(int work_qubits, int proof_count, int proof_qubits);

// Haar-random unitary over work "W" and proofs "P1".."Pk"; output qubit 0.
Verifier random_verifier(int work_qubits, int proof_count, int proof_qubits, std::uint64_t seed);

// Work "W" of two qubits; a Haar-random unitary acts on everything except the
// output qubit, so the acceptance probability is identically zero.
Verifier perfect_soundness_verifier(int proof_count, int proof_qubits, std::uint64_t seed);

// A single-qubit proof register "P" of `proof_qubits` qubits and one work
// qubit. Flips the output when the proof reads `marked`: acceptance of any
// proof phi is |<marked|phi>|^2.
Verifier marked_basis_verifier(int proof_qubits, std::size_t marked);

}  // namespace qmaforge
