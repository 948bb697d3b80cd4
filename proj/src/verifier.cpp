#include "qmaforge/verifier.hpp"

#include <algorithm>
#include <set>

#include "qmaforge/errors.hpp"

namespace qmaforge {

namespace {

// Slack for comparing computed probabilities against thresholds.
constexpr double kThresholdSlack = 1e-12;

std::vector<Eigen::Index> proof_columns(const Verifier& v) {
  const QubitMap map(v.layout(), v.proof_registers());
  std::vector<Eigen::Index> cols(map.dimension());
  for (std::size_t p = 0; p < cols.size(); ++p) cols[p] = static_cast<Eigen::Index>(map.scatter(p));
  return cols;
}

std::vector<Eigen::Index> accepting_rows(const Verifier& v) {
  const auto dim = v.layout().dimension();
  const std::size_t bit = std::size_t{1} << v.output_bit();
  std::vector<Eigen::Index> rows;
  rows.reserve(dim / 2);
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & bit) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

}  // namespace

Verifier::Verifier(ComplexMatrix circuit, RegisterLayout layout, std::vector<std::string> proof_registers,
                   int output_qubit)
    : circuit_(std::move(circuit)),
      layout_(std::move(layout)),
      proof_registers_(std::move(proof_registers)),
      output_qubit_(output_qubit) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (circuit_.rows() != dim || circuit_.cols() != dim) {
    throw LayoutError("Verifier: circuit dimension does not match layout");
  }
  check_finite(circuit_, "Verifier");
  std::set<std::string> seen;
  for (const auto& name : proof_registers_) {
    const int q = layout_.at(name).qubits;
    if (!seen.insert(name).second) throw LayoutError("Verifier: proof register '" + name + "' listed twice");
    if (proof_qubits_ == 0) proof_qubits_ = q;
    if (q != proof_qubits_) throw LayoutError("Verifier: proof registers differ in size");
  }
  if (output_qubit_ < 0 || output_qubit_ >= work_qubits()) {
    throw LayoutError("Verifier: output qubit is outside the work registers");
  }
  int work_seen = 0;
  int offset = 0;
  const int n = layout_.total_qubits();
  for (const auto& r : layout_.registers()) {
    if (!seen.contains(r.name)) {
      if (output_qubit_ < work_seen + r.qubits) {
        output_bit_ = n - 1 - offset - (output_qubit_ - work_seen);
        break;
      }
      work_seen += r.qubits;
    }
    offset += r.qubits;
  }
  if (!is_unitary(circuit_)) throw ContractError("Verifier: circuit is not unitary");
}

std::vector<std::string> Verifier::work_registers() const {
  return layout_.without(proof_registers_).names();
}

AcceptanceOperator::AcceptanceOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ShapeError("AcceptanceOperator: matrix is not square");
  const auto e = eig_hermitian(matrix_);
  if (e.values.size() > 0 && (e.values.minCoeff() < -kPsdTol || e.values.maxCoeff() > 1.0 + kPsdTol)) {
    throw ContractError("AcceptanceOperator: eigenvalues outside [0, 1]");
  }
}

void check_compatible(const Verifier& v, const ProofTuple& proofs) {
  if (proofs.size() != v.proof_count()) {
    throw CompatibilityError("expected " + std::to_string(v.proof_count()) + " proofs, got " +
                             std::to_string(proofs.size()));
  }
  for (const auto& p : proofs) {
    if (p.layout().total_qubits() != v.proof_qubits()) {
      throw CompatibilityError("proof has " + std::to_string(p.layout().total_qubits()) +
                               " qubits, verifier expects " + std::to_string(v.proof_qubits()));
    }
  }
}

ComplexVector joint_proof(const ProofTuple& proofs) {
  ComplexVector out = ComplexVector::Ones(1);
  for (const auto& p : proofs) out = tensor(out, p.amplitudes());
  return out;
}

double accept_probability_joint(const Verifier& v, const ComplexVector& joint) {
  const auto cols = proof_columns(v);
  if (static_cast<std::size_t>(joint.size()) != cols.size()) {
    throw CompatibilityError("joint proof dimension does not match the verifier");
  }
  const auto rows = accepting_rows(v);
  const ComplexVector out = v.circuit()(rows, cols) * joint;
  return std::clamp(out.squaredNorm(), 0.0, 1.0);
}

double accept_probability(const Verifier& v, const ProofTuple& proofs) {
  check_compatible(v, proofs);
  return accept_probability_joint(v, joint_proof(proofs));
}

AcceptanceOperator acceptance_operator(const Verifier& v) {
  const ComplexMatrix c = v.circuit()(accepting_rows(v), proof_columns(v));
  ComplexMatrix m = c.adjoint() * c;
  m = (m + m.adjoint()).eval() / 2.0;
  return AcceptanceOperator(std::move(m));
}

EntangledOptimum optimal_entangled_proof(const Verifier& v) {
  const auto m = acceptance_operator(v);
  const auto e = eig_hermitian(m.matrix());
  return {std::max(e.values(0), 0.0), PureState::normalized(v.proof_layout(), e.vectors.col(0))};
}

SystemVerdict check_system(const Verifier& v, const ProofTuple& yes_proofs, const SystemParams& params,
                           double soundness_bound) {
  SystemVerdict out;
  out.completeness_value = accept_probability(v, yes_proofs);
  out.soundness_bound = soundness_bound;
  out.completeness = params.completeness;
  out.soundness = params.soundness;
  out.completeness_ok = out.completeness_value >= params.completeness - kThresholdSlack;
  out.soundness_ok = soundness_bound <= params.soundness + kThresholdSlack;
  return out;
}

CircuitBuilder::CircuitBuilder(RegisterLayout layout) : layout_(std::move(layout)) {
  const auto dim = layout_.dimension();
  check_budget(dim, dim, "CircuitBuilder");
  unitary_ = ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

CircuitBuilder& CircuitBuilder::apply(const ComplexMatrix& op, std::span<const std::string> targets) {
  if (!is_unitary(op)) throw ContractError("CircuitBuilder: gate is not unitary");
  apply_left(unitary_, op, layout_, targets);
  return *this;
}

CircuitBuilder& CircuitBuilder::apply(const ComplexMatrix& op, std::initializer_list<std::string> targets) {
  return apply(op, std::span<const std::string>(targets.begin(), targets.size()));
}

CircuitBuilder& CircuitBuilder::apply_classical(const std::function<std::size_t(std::size_t)>& f) {
  const auto dim = layout_.dimension();
  std::vector<bool> hit(dim, false);
  ComplexMatrix next(unitary_.rows(), unitary_.cols());
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j = f(i);
    if (j >= dim || hit[j]) throw ContractError("CircuitBuilder: classical map is not a bijection");
    hit[j] = true;
    next.row(static_cast<Eigen::Index>(j)) = unitary_.row(static_cast<Eigen::Index>(i));
  }
  unitary_ = std::move(next);
  return *this;
}

}  // namespace qmaforge
