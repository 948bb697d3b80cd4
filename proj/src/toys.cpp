#include "qmaforge/toys.hpp"

#include <bit>
#include <cmath>

#include "qmaforge/errors.hpp"
#include "qmaforge/states.hpp"

namespace qmaforge {

namespace {

RegisterLayout work_and_proofs(int work_qubits, int proof_count, int proof_qubits,
                               std::vector<std::string>& proofs) {
  std::vector<Register> regs{{"W", work_qubits}};
  for (int i = 1; i <= proof_count; ++i) {
    regs.push_back({"P" + std::to_string(i), proof_qubits});
    proofs.push_back(regs.back().name);
  }
  return RegisterLayout(std::move(regs));
}

}  // namespace

Verifier rotation_verifier(const std::vector<double>& accept, bool hadamard_last) {
  if (accept.size() < 2 || !std::has_single_bit(accept.size())) {
    throw ShapeError("rotation_verifier: need 2^k acceptance values");
  }
  const int k = std::countr_zero(accept.size());
  std::vector<Register> regs{{"V", 1}};
  std::vector<std::string> proofs;
  for (int i = 1; i <= k; ++i) {
    regs.push_back({"P" + std::to_string(i), 1});
    proofs.push_back(regs.back().name);
  }
  const RegisterLayout layout(regs);

  // Block-diagonal rotation: proofs control an R_y on V.
  const auto n = static_cast<Eigen::Index>(accept.size());
  ComplexMatrix rotations = ComplexMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double p = accept[static_cast<std::size_t>(x)];
    if (!(p >= 0.0 && p <= 1.0)) throw ContractError("rotation_verifier: probability outside [0, 1]");
    rotations.block(2 * x, 2 * x, 2, 2) = gates::ry(2.0 * std::asin(std::sqrt(p)));
  }
  std::vector<std::string> targets = proofs;
  targets.push_back("V");

  CircuitBuilder builder(layout);
  if (hadamard_last) builder.apply(gates::hadamard(), {proofs.back()});
  builder.apply(rotations, targets);
  if (hadamard_last) builder.apply(gates::hadamard(), {proofs.back()});
  return Verifier(std::move(builder).take(), layout, proofs, 0);
}

Verifier toy_yes_verifier() {
  return rotation_verifier({0.95, 0.5, 0.3, 0.6, 0.2, 0.4, 0.1, 0.7}, true);
}

Verifier toy_no_verifier() {
  return rotation_verifier({0.4, 0.1, 0.3, 0.2, 0.35, 0.05, 0.25, 0.15}, true);
}

ProofTuple toy_honest_proofs() {
  const RegisterLayout one({{"proof", 1}});
  ComplexVector plus(2);
  plus << 1.0, 1.0;
  return {PureState::basis(one, 0), PureState::basis(one, 0), PureState::normalized(one, plus)};
}

Verifier always_reject(int work_qubits, int proof_count, int proof_qubits) {
  std::vector<std::string> proofs;
  RegisterLayout layout = work_and_proofs(work_qubits, proof_count, proof_qubits, proofs);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return Verifier(ComplexMatrix::Identity(dim, dim), std::move(layout), std::move(proofs), 0);
}

Verifier always_accept(int work_qubits, int proof_count, int proof_qubits) {
  std::vector<std::string> proofs;
  RegisterLayout layout = work_and_proofs(work_qubits, proof_count, proof_qubits, proofs);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  const std::size_t bit = std::size_t{1} << (layout.total_qubits() - 1);
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) u(static_cast<Eigen::Index>(static_cast<std::size_t>(i) ^ bit), i) = 1.0;
  return Verifier(std::move(u), std::move(layout), std::move(proofs), 0);
}

Verifier random_verifier(int work_qubits, int proof_count, int proof_qubits, std::uint64_t seed) {
  std::vector<std::string> proofs;
  RegisterLayout layout = work_and_proofs(work_qubits, proof_count, proof_qubits, proofs);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return Verifier(haar_random_unitary(dim, seed), std::move(layout), std::move(proofs), 0);
}

Verifier perfect_soundness_verifier(int proof_count, int proof_qubits, std::uint64_t seed) {
  std::vector<std::string> proofs;
  std::vector<Register> regs{{"O", 1}, {"W", 1}};
  for (int i = 1; i <= proof_count; ++i) {
    regs.push_back({"P" + std::to_string(i), proof_qubits});
    proofs.push_back(regs.back().name);
  }
  const RegisterLayout layout(regs);
  const auto rest = layout.without(std::vector<std::string>{"O"});
  const auto rest_names = rest.names();
  const ComplexMatrix u = haar_random_unitary(static_cast<Eigen::Index>(rest.dimension()), seed);
  return Verifier(embed(u, layout, rest_names), layout, proofs, 0);
}

Verifier marked_basis_verifier(int proof_qubits, std::size_t marked) {
  const RegisterLayout layout({{"V", 1}, {"P", proof_qubits}});
  if (marked >= (std::size_t{1} << proof_qubits)) throw IndexError("marked_basis_verifier: index out of range");
  CircuitBuilder builder(layout);
  const std::size_t vbit = std::size_t{1} << proof_qubits;
  builder.apply_classical([&](std::size_t i) { return (i & (vbit - 1)) == marked ? i ^ vbit : i; });
  return Verifier(std::move(builder).take(), layout, {"P"}, 0);
}

}  // namespace qmaforge
