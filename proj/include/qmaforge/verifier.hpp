#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmaforge/linalg.hpp"
#include "qmaforge/states.hpp"

namespace qmaforge {

// A k-proof verifier: one unitary over work registers (initialized to |0>) and
// k proof registers of equal size. It accepts when the designated output
// qubit reads 1 after the circuit runs.
class Verifier {
 public:
  // `output_qubit` counts work qubits only, in layout order. Throws
  // ContractError for a non-unitary circuit and LayoutError for malformed
  // register lists.
  Verifier(ComplexMatrix circuit, RegisterLayout layout, std::vector<std::string> proof_registers,
           int output_qubit);

  const ComplexMatrix& circuit() const { return circuit_; }
  const RegisterLayout& layout() const { return layout_; }
  const std::vector<std::string>& proof_registers() const { return proof_registers_; }
  int output_qubit() const { return output_qubit_; }

  std::size_t proof_count() const { return proof_registers_.size(); }
  // Qubits per proof register (0 when there are no proofs).
  int proof_qubits() const { return proof_qubits_; }
  std::vector<std::string> work_registers() const;
  int work_qubits() const { return layout_.total_qubits() - proof_qubits_ * static_cast<int>(proof_count()); }
  // Layout of the joint proof space, proofs in proof order.
  RegisterLayout proof_layout() const { return layout_.select(proof_registers_); }
  std::size_t proof_dimension() const { return proof_layout().dimension(); }
  // Bit position of the output qubit in a full basis index.
  int output_bit() const { return output_bit_; }

 private:
  ComplexMatrix circuit_;
  RegisterLayout layout_;
  std::vector<std::string> proof_registers_;
  int output_qubit_ = 0;
  int proof_qubits_ = 0;
  int output_bit_ = 0;
};

using ProofTuple = std::vector<PureState>;

// PSD operator M on the joint proof space with <phi|M|phi> equal to the
// acceptance probability of the joint proof phi.
class AcceptanceOperator {
 public:
  explicit AcceptanceOperator(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
};

struct SystemParams {
  int k = 0;
  double completeness = 0.0;
  double soundness = 0.0;
  // Optional q with completeness - soundness >= 1/q.
  std::optional<int> gap_q;
};

// Throws CompatibilityError unless every proof has q_M qubits and the count
// matches the proof registers.
void check_compatible(const Verifier& v, const ProofTuple& proofs);

// Joint proof vector phi_1 (x) ... (x) phi_k.
ComplexVector joint_proof(const ProofTuple& proofs);

double accept_probability(const Verifier& v, const ProofTuple& proofs);
// Acceptance of an arbitrary (possibly entangled) joint proof vector.
double accept_probability_joint(const Verifier& v, const ComplexVector& joint);

AcceptanceOperator acceptance_operator(const Verifier& v);

struct EntangledOptimum {
  double value = 0.0;
  PureState proof;
};

// Top eigenpair of the acceptance operator.
EntangledOptimum optimal_entangled_proof(const Verifier& v);

struct SystemVerdict {
  double completeness_value = 0.0;
  double soundness_bound = 0.0;
  double completeness = 0.0;
  double soundness = 0.0;
  bool completeness_ok = false;
  bool soundness_ok = false;
};

SystemVerdict check_system(const Verifier& v, const ProofTuple& yes_proofs, const SystemParams& params,
                           double soundness_bound);

// Composes a circuit gate by gate over a fixed layout.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(RegisterLayout layout);

  // Applies `op` to `targets` (read in the order given).
  CircuitBuilder& apply(const ComplexMatrix& op, std::span<const std::string> targets);
  CircuitBuilder& apply(const ComplexMatrix& op, std::initializer_list<std::string> targets);
  // Applies the basis permutation |i> -> |f(i)>. Throws ContractError if f is
  // not a bijection.
  CircuitBuilder& apply_classical(const std::function<std::size_t(std::size_t)>& f);

  const RegisterLayout& layout() const { return layout_; }
  const ComplexMatrix& unitary() const { return unitary_; }
  ComplexMatrix take() && { return std::move(unitary_); }

 private:
  RegisterLayout layout_;
  ComplexMatrix unitary_;
};

}  // namespace qmaforge
