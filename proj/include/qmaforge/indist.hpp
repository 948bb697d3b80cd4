#pragma once

#include <cstdint>

#include "qmaforge/states.hpp"

namespace qmaforge {

// Uniform mixture of the d^2 computational product states |e_i e_j>.
DensityOperator product_basis_mixture(int d);
// Uniform mixture of the d^2 generalized Bell states g_{k,l}.
DensityOperator bell_mixture(int d);

// Gram matrix <g_{k,l}|g_{k',l'}>, rows and columns in (k, l) order.
ComplexMatrix bell_gram(int d);

struct ErrorPair {
  double p01 = 0.0;  // tr(M_1 mix0): product state reported as entangled
  double p10 = 0.0;  // tr(M_0 mix1): entangled state reported as product
};

ErrorPair povm_error_pair(const Povm& m, const DensityOperator& mix0, const DensityOperator& mix1);

// {E, I - E} with E = W W^dagger rescaled to a uniform random top eigenvalue
// in (0, 1].
Povm random_binary_povm(const RegisterLayout& layout, std::uint64_t seed);

// (U (x) I) g_{d,d} with U Haar random.
PureState random_maximally_entangled(int d, std::uint64_t seed);

struct FidelityFloorReport {
  int d = 0;
  int trials = 0;
  double floor = 0.0;  // 1 / sqrt(d)
  // max |F - 1/sqrt(d)| over random maximally entangled states
  double max_entangled_deviation = 0.0;
  // min F over Haar-random pure states
  double min_random_fidelity = 0.0;
  bool entangled_ok = false;
  bool random_ok = false;
  bool pass() const { return entangled_ok && random_ok; }
};

// Best product-state fidelity equals 1/sqrt(d) on maximally entangled states
// (within 1e-9) and is at least 1/sqrt(d) - 1e-9 on Haar-random states.
FidelityFloorReport fidelity_floor_check(int d, int trials, std::uint64_t seed);

}  // namespace qmaforge
