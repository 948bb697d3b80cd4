#include "qmaforge/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmaforge/errors.hpp"
#include "qmaforge/random.hpp"

namespace qmaforge {

PureState::PureState(RegisterLayout layout, ComplexVector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.dimension()) {
    throw LayoutError("PureState: amplitude count does not match layout dimension");
  }
  if (!amplitudes_.allFinite()) throw ContractError("PureState: non-finite amplitude");
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTol) {
    throw ContractError("PureState: vector is not normalized");
  }
}

PureState PureState::normalized(RegisterLayout layout, ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ContractError("PureState: cannot normalize");
  return PureState(std::move(layout), amplitudes / n);
}

PureState PureState::basis(RegisterLayout layout, std::size_t index) {
  if (index >= layout.dimension()) throw IndexError("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(layout), std::move(v));
}

DensityOperator::DensityOperator(RegisterLayout layout, ComplexMatrix matrix)
    : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw LayoutError("DensityOperator: matrix dimension does not match layout");
  }
  check_finite(matrix_, "DensityOperator");
  if (!is_hermitian(matrix_)) throw ContractError("DensityOperator: matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > kNormTol) {
    throw ContractError("DensityOperator: trace is not one");
  }
  if (min_eigenvalue(matrix_) < -kPsdTol) throw NotPsdError("DensityOperator: matrix is not PSD");
}

DensityOperator DensityOperator::maximally_mixed(RegisterLayout layout) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  ComplexMatrix m = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityOperator(std::move(layout), std::move(m));
}

Povm::Povm(RegisterLayout layout, std::vector<ComplexMatrix> elements)
    : layout_(std::move(layout)), elements_(std::move(elements)) {
  const auto dim = static_cast<Eigen::Index>(layout_.dimension());
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& e : elements_) {
    if (e.rows() != dim || e.cols() != dim) throw LayoutError("Povm: element dimension mismatch");
    if (min_eigenvalue(e) < -kPsdTol) throw NotPsdError("Povm: element is not PSD");
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::Identity(dim, dim)) > 1e-9) {
    throw ContractError("Povm: elements do not sum to the identity");
  }
}

DensityOperator density_of(const PureState& psi) {
  const auto& v = psi.amplitudes();
  return DensityOperator(psi.layout(), v * v.adjoint());
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState::normalized(a.layout().concat(b.layout()), tensor(a.amplitudes(), b.amplitudes()));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.layout().concat(b.layout()), tensor(a.matrix(), b.matrix()));
}

PureState haar_random_pure(const RegisterLayout& layout, std::uint64_t seed) {
  CounterRng rng(seed);
  return PureState::normalized(layout, gaussian_vector(rng, static_cast<Eigen::Index>(layout.dimension())));
}

ComplexMatrix haar_random_unitary(Eigen::Index dim, std::uint64_t seed) {
  CounterRng rng(seed);
  const ComplexMatrix z = gaussian_matrix(rng, dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  const ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  ComplexVector phases(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    phases(i) = mag > 0 ? r(i, i) / mag : Complex(1.0);
  }
  return q * phases.asDiagonal();
}

DensityOperator random_density(const RegisterLayout& layout, int rank, std::uint64_t seed) {
  if (rank < 1) throw ContractError("random_density: rank must be positive");
  CounterRng rng(seed);
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  const ComplexMatrix w = gaussian_matrix(rng, dim, rank);
  ComplexMatrix rho = w * w.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return DensityOperator(layout, std::move(rho));
}

namespace {

// sqrt of a numerically-zero eigenvalue (~1e-17) is ~3e-9, so eigenvalues
// below dim * eps * scale are treated as exact zeros.
RealVector clamp_noise(const RealVector& values) {
  const double scale = std::max(1.0, values.size() > 0 ? values.cwiseAbs().maxCoeff() : 0.0);
  const double floor = static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon() * scale;
  return values.unaryExpr([floor](double x) { return x <= floor ? 0.0 : x; });
}

}  // namespace

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.layout() != sigma.layout()) throw LayoutError("fidelity: layouts differ");
  const auto er = eig_hermitian(rho.matrix());
  if (er.values.minCoeff() < -kPsdTol) throw NotPsdError("fidelity: rho is not PSD");
  const RealVector roots = clamp_noise(er.values).cwiseSqrt();
  const ComplexMatrix root = er.vectors * roots.cast<Complex>().asDiagonal() * er.vectors.adjoint();
  const ComplexMatrix inner = root * sigma.matrix() * root;
  const auto e = eig_hermitian((inner + inner.adjoint()) / 2.0);
  return std::clamp(clamp_noise(e.values).cwiseSqrt().sum(), 0.0, 1.0);
}

PureState bell_state(int d, int k, int l) {
  if (d < 2 || !std::has_single_bit(static_cast<unsigned>(d))) {
    throw ContractError("bell_state: dimension must be a power of two >= 2");
  }
  if (k < 1 || k > d || l < 1 || l > d) throw IndexError("bell_state: indices must lie in [1, d]");
  const int qubits = std::countr_zero(static_cast<unsigned>(d));
  RegisterLayout layout({{"A", qubits}, {"B", qubits}});
  ComplexVector v = ComplexVector::Zero(d * d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 1; j <= d; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) * k / d;
    v((j % d) * d + (j + l) % d) = norm * Complex(std::cos(angle), std::sin(angle));
  }
  return PureState(std::move(layout), std::move(v));
}

namespace {

std::vector<std::string> validated_cut(const RegisterLayout& layout, std::span<const std::string> cut) {
  if (cut.empty()) throw CutError("cut must contain at least one register");
  for (const auto& name : cut) {
    if (!layout.contains(name)) throw CutError("cut register '" + name + "' is not in the layout");
  }
  std::vector<std::string> ordered;
  for (const auto& name : layout.names()) {
    if (std::find(cut.begin(), cut.end(), name) != cut.end()) ordered.push_back(name);
  }
  if (ordered.size() != cut.size()) throw CutError("cut lists a register twice");
  if (ordered.size() == layout.size()) throw CutError("cut must be a proper subset of the registers");
  return ordered;
}

}  // namespace

SchmidtDecomposition schmidt(const PureState& psi, std::span<const std::string> cut) {
  const auto& layout = psi.layout();
  const auto left_names = validated_cut(layout, cut);
  const auto right_names = layout.without(left_names).names();
  const QubitMap lmap(layout, left_names);
  const QubitMap rmap(layout, right_names);

  const auto dl = static_cast<Eigen::Index>(lmap.dimension());
  const auto dr = static_cast<Eigen::Index>(rmap.dimension());
  ComplexMatrix reshaped(dl, dr);
  for (Eigen::Index a = 0; a < dl; ++a) {
    const auto la = lmap.scatter(a);
    for (Eigen::Index b = 0; b < dr; ++b) reshaped(a, b) = psi.amplitudes()(la | rmap.scatter(b));
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();
  out.left = svd.matrixU();
  out.right = svd.matrixV().conjugate();
  out.left_layout = layout.select(left_names);
  out.right_layout = layout.select(right_names);
  return out;
}

ComplexVector join_across_cut(const ComplexVector& left, const ComplexVector& right,
                              const RegisterLayout& layout, std::span<const std::string> cut) {
  const auto left_names = validated_cut(layout, cut);
  const auto right_names = layout.without(left_names).names();
  const QubitMap lmap(layout, left_names);
  const QubitMap rmap(layout, right_names);
  if (static_cast<std::size_t>(left.size()) != lmap.dimension() ||
      static_cast<std::size_t>(right.size()) != rmap.dimension()) {
    throw LayoutError("join_across_cut: factor dimensions do not match the cut");
  }
  ComplexVector out(static_cast<Eigen::Index>(layout.dimension()));
  for (Eigen::Index a = 0; a < left.size(); ++a) {
    const auto la = lmap.scatter(a);
    for (Eigen::Index b = 0; b < right.size(); ++b) out(la | rmap.scatter(b)) = left(a) * right(b);
  }
  return out;
}

ProductApproximation nearest_product_state(const PureState& psi, std::span<const std::string> cut) {
  const auto s = schmidt(psi, cut);
  const ComplexVector joined = join_across_cut(s.left.col(0), s.right.col(0), psi.layout(), cut);
  return {PureState::normalized(psi.layout(), joined), s.coefficients(0)};
}

bool is_maximally_entangled(const PureState& psi, std::span<const std::string> cut, double tol) {
  const auto left_names = validated_cut(psi.layout(), cut);
  const auto left_dim = psi.layout().select(left_names).dimension();
  const auto right_dim = psi.layout().without(left_names).dimension();
  if (left_dim != right_dim) throw CutError("is_maximally_entangled: cut sides have unequal dimension");
  const auto s = schmidt(psi, cut);
  const double target = 1.0 / static_cast<double>(left_dim);
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    if (std::abs(s.coefficients(i) * s.coefficients(i) - target) > tol) return false;
  }
  return true;
}

}  // namespace qmaforge
