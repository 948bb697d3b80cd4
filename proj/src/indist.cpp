#include "qmaforge/indist.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "qmaforge/errors.hpp"
#include "qmaforge/random.hpp"

namespace qmaforge {

namespace {

constexpr double kFloorTol = 1e-9;

RegisterLayout pair_layout(int d) {
  if (d < 2 || !std::has_single_bit(static_cast<unsigned>(d))) {
    throw ContractError("dimension must be a power of two >= 2");
  }
  const int q = std::countr_zero(static_cast<unsigned>(d));
  return RegisterLayout({{"A", q}, {"B", q}});
}

}  // namespace

DensityOperator product_basis_mixture(int d) {
  const RegisterLayout layout = pair_layout(d);
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ComplexVector ei = ComplexVector::Zero(d);
      ComplexVector ej = ComplexVector::Zero(d);
      ei(i) = 1.0;
      ej(j) = 1.0;
      const ComplexVector v = tensor(ei, ej);
      sum += v * v.adjoint();
    }
  }
  return DensityOperator(layout, sum / static_cast<double>(dim));
}

DensityOperator bell_mixture(int d) {
  const RegisterLayout layout = pair_layout(d);
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (int k = 1; k <= d; ++k) {
    for (int l = 1; l <= d; ++l) {
      const ComplexVector v = bell_state(d, k, l).amplitudes();
      sum += v * v.adjoint();
    }
  }
  return DensityOperator(layout, sum / static_cast<double>(dim));
}

ComplexMatrix bell_gram(int d) {
  pair_layout(d);
  std::vector<ComplexVector> family;
  for (int k = 1; k <= d; ++k) {
    for (int l = 1; l <= d; ++l) family.push_back(bell_state(d, k, l).amplitudes());
  }
  const auto n = static_cast<Eigen::Index>(family.size());
  ComplexMatrix gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) gram(a, b) = family[a].dot(family[b]);
  }
  return gram;
}

ErrorPair povm_error_pair(const Povm& m, const DensityOperator& mix0, const DensityOperator& mix1) {
  if (m.elements().size() != 2) throw ShapeError("povm_error_pair: POVM must have exactly two elements");
  if (m.layout() != mix0.layout() || m.layout() != mix1.layout()) {
    throw LayoutError("povm_error_pair: layouts differ");
  }
  return {(m.elements()[1] * mix0.matrix()).trace().real(), (m.elements()[0] * mix1.matrix()).trace().real()};
}

Povm random_binary_povm(const RegisterLayout& layout, std::uint64_t seed) {
  CounterRng rng(seed);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  const ComplexMatrix w = gaussian_matrix(rng, dim, dim);
  ComplexMatrix e = w * w.adjoint();
  e = (e + e.adjoint()).eval() / 2.0;
  e *= rng.uniform() / max_eigenvalue(e);
  const ComplexMatrix rest = ComplexMatrix::Identity(dim, dim) - e;
  return Povm(layout, {e, rest});
}

PureState random_maximally_entangled(int d, std::uint64_t seed) {
  const PureState g = bell_state(d, d, d);
  const ComplexMatrix u = tensor(haar_random_unitary(d, seed), ComplexMatrix(ComplexMatrix::Identity(d, d)));
  return PureState::normalized(g.layout(), u * g.amplitudes());
}

FidelityFloorReport fidelity_floor_check(int d, int trials, std::uint64_t seed) {
  const RegisterLayout layout = pair_layout(d);
  const std::vector<std::string> cut{"A"};
  FidelityFloorReport out;
  out.d = d;
  out.trials = trials;
  out.floor = 1.0 / std::sqrt(static_cast<double>(d));
  out.min_random_fidelity = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const auto entangled = random_maximally_entangled(d, derive_seed(seed, 2 * static_cast<std::uint64_t>(t)));
    out.max_entangled_deviation = std::max(out.max_entangled_deviation,
                                           std::abs(nearest_product_state(entangled, cut).fidelity - out.floor));
    const auto random = haar_random_pure(layout, derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + 1));
    out.min_random_fidelity = std::min(out.min_random_fidelity, nearest_product_state(random, cut).fidelity);
  }
  out.entangled_ok = out.max_entangled_deviation <= kFloorTol;
  out.random_ok = trials == 0 || out.min_random_fidelity >= out.floor - kFloorTol;
  return out;
}

}  // namespace qmaforge
