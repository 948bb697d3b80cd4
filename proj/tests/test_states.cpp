#include <doctest.h>

#include <cmath>

#include "qmaforge/errors.hpp"
#include "qmaforge/random.hpp"
#include "qmaforge/states.hpp"

using namespace qmaforge;

namespace {

RegisterLayout reg(const char* name, int q) { return RegisterLayout({{name, q}}); }

// ||sqrt(rho) sqrt(sigma)||_1 via singular values.
double nuclear_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
  const ComplexMatrix p = psd_sqrt(rho.matrix()) * psd_sqrt(sigma.matrix());
  Eigen::JacobiSVD<ComplexMatrix> svd(p);
  return svd.singularValues().sum();
}

}  // namespace

TEST_CASE("state contracts") {
  CHECK_THROWS_AS(PureState(reg("A", 1), ComplexVector::Ones(2)), ContractError);
  CHECK_THROWS_AS(PureState(reg("A", 2), ComplexVector::Ones(2) / std::sqrt(2.0)), LayoutError);
  CHECK_THROWS_AS(PureState::normalized(reg("A", 1), ComplexVector::Zero(2)), ContractError);
  CHECK_THROWS_AS(PureState::basis(reg("A", 1), 2), IndexError);

  ComplexMatrix not_psd = ComplexMatrix::Zero(2, 2);
  not_psd(0, 0) = 1.5;
  not_psd(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(reg("A", 1), not_psd), NotPsdError);
  CHECK_THROWS_AS(DensityOperator(reg("A", 1), ComplexMatrix::Identity(2, 2)), ContractError);
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityOperator(reg("A", 1), skew), ContractError);

  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(Povm(reg("A", 1), {half, half}));
  CHECK_THROWS_AS(Povm(reg("A", 1), {half, half / 2.0}), ContractError);
}

TEST_CASE("haar sampling is deterministic and has the right second moment") {
  const RegisterLayout layout = reg("A", 2);
  CHECK(max_abs_diff(haar_random_pure(layout, 9).amplitudes(), haar_random_pure(layout, 9).amplitudes()) == 0.0);
  CHECK(max_abs_diff(haar_random_pure(layout, 9).amplitudes(), haar_random_pure(layout, 10).amplitudes()) > 0.0);

  // E|psi_0|^2 = 1/d and E|psi_0|^4 = 2 / (d (d + 1)) for d = 4.
  const int n = 100000;
  double m2 = 0.0;
  double m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(haar_random_pure(layout, derive_seed(77, i)).amplitudes()(0));
    m2 += p;
    m4 += p * p;
  }
  m2 /= n;
  m4 /= n;
  // Standard deviations of the estimators are below 1e-3.
  CHECK(std::abs(m2 - 0.25) < 5e-3);
  CHECK(std::abs(m4 - 0.1) < 5e-3);

  const ComplexMatrix u = haar_random_unitary(8, 3);
  CHECK(is_unitary(u));
  CHECK(max_abs_diff(u, haar_random_unitary(8, 3)) == 0.0);
}

TEST_CASE("random density operators have the requested rank") {
  const auto rho = random_density(reg("A", 3), 2, 5);
  const auto e = eig_hermitian(rho.matrix());
  CHECK(e.values(1) > 1e-6);
  CHECK(std::abs(e.values(2)) < 1e-12);
  CHECK(std::abs(rho.matrix().trace() - Complex(1.0)) < 1e-12);
}

TEST_CASE("fidelity agrees with the nuclear-norm form") {
  for (int q = 1; q <= 3; ++q) {
    for (int t = 0; t < 20; ++t) {
      const int d = 1 << q;
      const auto rho = random_density(reg("A", q), 1 + t % d, derive_seed(q, 2 * t));
      const auto sigma = random_density(reg("A", q), 1 + (t / 2) % d, derive_seed(q, 2 * t + 1));
      CHECK(fidelity(rho, sigma) == doctest::Approx(nuclear_fidelity(rho, sigma)).epsilon(1e-7));
      CHECK(fidelity(rho, sigma) == doctest::Approx(fidelity(sigma, rho)).epsilon(1e-7));
    }
  }
  const auto psi = haar_random_pure(reg("A", 2), 1);
  const auto phi = haar_random_pure(reg("A", 2), 2);
  CHECK(fidelity(density_of(psi), density_of(phi)) ==
        doctest::Approx(std::abs(psi.amplitudes().dot(phi.amplitudes()))).epsilon(1e-7));
  CHECK(fidelity(density_of(psi), density_of(psi)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(fidelity(density_of(psi), DensityOperator::maximally_mixed(reg("B", 2))), LayoutError);
}

TEST_CASE("generalized Bell family") {
  for (int d : {2, 4, 8}) {
    for (int k = 1; k <= d; ++k) {
      for (int l = 1; l <= d; ++l) {
        const auto g = bell_state(d, k, l);
        // Oracle: the definition term by term.
        ComplexVector want = ComplexVector::Zero(d * d);
        for (int j = 1; j <= d; ++j) {
          want((j % d) * d + (j + l) % d) += std::polar(1.0 / std::sqrt(double(d)), 2.0 * M_PI * j * k / d);
        }
        CHECK(max_abs_diff(g.amplitudes(), want) < 1e-14);
        CHECK(is_maximally_entangled(g, std::vector<std::string>{"A"}, 1e-12));
      }
    }
  }
  // g_{d,d} is the standard maximally entangled vector.
  const auto g = bell_state(2, 2, 2);
  CHECK(std::abs(g.amplitudes()(0) - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(g.amplitudes()(3) - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK_THROWS_AS(bell_state(3, 1, 1), ContractError);
  CHECK_THROWS_AS(bell_state(2, 0, 1), IndexError);
}

TEST_CASE("schmidt decomposition reassembles the state") {
  const RegisterLayout layout({{"A", 1}, {"B", 2}, {"C", 1}});
  const auto psi = haar_random_pure(layout, 12);
  const std::vector<std::string> cut{"C", "A"};
  const auto s = schmidt(psi, cut);
  CHECK(s.left_layout.names() == std::vector<std::string>{"A", "C"});
  CHECK(s.coefficients.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  ComplexVector back = ComplexVector::Zero(16);
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    back += s.coefficients(i) * join_across_cut(s.left.col(i), s.right.col(i), layout, cut);
  }
  CHECK(max_abs_diff(back, psi.amplitudes()) < 1e-13);

  CHECK_THROWS_AS(schmidt(psi, std::vector<std::string>{}), CutError);
  CHECK_THROWS_AS(schmidt(psi, std::vector<std::string>{"A", "B", "C"}), CutError);
  CHECK_THROWS_AS(schmidt(psi, std::vector<std::string>{"Q"}), CutError);
}

TEST_CASE("nearest product state beats random product states") {
  const RegisterLayout layout({{"A", 1}, {"B", 1}});
  const std::vector<std::string> cut{"A"};
  for (int t = 0; t < 50; ++t) {
    const auto psi = haar_random_pure(layout, derive_seed(5, t));
    const auto best = nearest_product_state(psi, cut);
    CHECK(std::abs(best.product.amplitudes().dot(psi.amplitudes())) == doctest::Approx(best.fidelity).epsilon(1e-12));
    CHECK(best.fidelity >= 1.0 / std::sqrt(2.0) - 1e-12);
    for (int r = 0; r < 20; ++r) {
      const auto a = haar_random_pure(reg("A", 1), derive_seed(6, 100 * t + r));
      const auto b = haar_random_pure(reg("B", 1), derive_seed(7, 100 * t + r));
      CHECK(std::abs(tensor(a, b).amplitudes().dot(psi.amplitudes())) <= best.fidelity + 1e-12);
    }
  }
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = std::cos(M_PI / 6);
  v(3) = std::sin(M_PI / 6);
  CHECK(nearest_product_state(PureState(layout, v), cut).fidelity == doctest::Approx(std::cos(M_PI / 6)));
}
