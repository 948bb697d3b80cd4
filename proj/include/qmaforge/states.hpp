#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmaforge/linalg.hpp"

namespace qmaforge {

inline constexpr double kNormTol = 1e-10;

// Unit vector over a register layout.
class PureState {
 public:
  PureState(RegisterLayout layout, ComplexVector amplitudes);

  // Rescales `amplitudes` to unit norm; throws ContractError on a zero vector.
  static PureState normalized(RegisterLayout layout, ComplexVector amplitudes);
  static PureState basis(RegisterLayout layout, std::size_t index);

  const RegisterLayout& layout() const { return layout_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }

 private:
  RegisterLayout layout_;
  ComplexVector amplitudes_;
};

// Hermitian, trace-one, positive semidefinite operator over a register layout.
class DensityOperator {
 public:
  DensityOperator(RegisterLayout layout, ComplexMatrix matrix);

  static DensityOperator maximally_mixed(RegisterLayout layout);

  const RegisterLayout& layout() const { return layout_; }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  RegisterLayout layout_;
  ComplexMatrix matrix_;
};

// Measurement given by PSD elements summing to the identity.
class Povm {
 public:
  Povm(RegisterLayout layout, std::vector<ComplexMatrix> elements);

  const RegisterLayout& layout() const { return layout_; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  RegisterLayout layout_;
  std::vector<ComplexMatrix> elements_;
};

DensityOperator density_of(const PureState& psi);

PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Normalized vector of i.i.d. complex Gaussians: Haar distributed.
PureState haar_random_pure(const RegisterLayout& layout, std::uint64_t seed);
// QR of a complex Ginibre matrix with the phases of R's diagonal removed.
ComplexMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed);
// W W^dagger / tr(W W^dagger) for a Gaussian dim x rank matrix W.
DensityOperator random_density(const RegisterLayout& layout, int rank, std::uint64_t seed);

// F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);

// Member of the generalized Bell basis on two registers "A" and "B" of
// log2(d) qubits each:
//   g_{k,l} = d^{-1/2} sum_{j=1}^{d} exp(2 pi i jk/d) |j mod d> (x) |(j+l) mod d>.
// Valid for 1 <= k, l <= d.
PureState bell_state(int d, int k, int l);

struct SchmidtDecomposition {
  RealVector coefficients;  // descending, nonnegative
  ComplexMatrix left;       // columns: vectors on the cut registers
  ComplexMatrix right;      // columns: vectors on the complement
  RegisterLayout left_layout;
  RegisterLayout right_layout;
};

// psi = sum_i c_i left_i (x) right_i, with the cut registers (in layout order)
// on the left.
SchmidtDecomposition schmidt(const PureState& psi, std::span<const std::string> cut);

struct ProductApproximation {
  PureState product;  // on psi's layout
  double fidelity = 0.0;
};

// Closest product state across the cut: the top Schmidt pair. The fidelity is
// the largest Schmidt coefficient.
ProductApproximation nearest_product_state(const PureState& psi, std::span<const std::string> cut);

bool is_maximally_entangled(const PureState& psi, std::span<const std::string> cut, double tol);

// Reassembles a vector given on (cut registers, complement) back into the
// register order of `layout`.
ComplexVector join_across_cut(const ComplexVector& left, const ComplexVector& right,
                              const RegisterLayout& layout, std::span<const std::string> cut);

}  // namespace qmaforge
