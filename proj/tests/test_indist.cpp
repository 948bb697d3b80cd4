#include <doctest.h>

#include <cmath>

#include "qmaforge/errors.hpp"
#include "qmaforge/indist.hpp"

using namespace qmaforge;

TEST_CASE("both mixtures are maximally mixed") {
  for (int d : {2, 4}) {
    const ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d) / double(d * d);
    CHECK(max_abs_diff(product_basis_mixture(d).matrix(), id) == 0.0);
    CHECK(max_abs_diff(bell_mixture(d).matrix(), id) < 1e-12);
    CHECK(max_abs_diff(bell_gram(d), ComplexMatrix::Identity(d * d, d * d)) < 1e-12);
  }
  CHECK_THROWS_AS(product_basis_mixture(3), ContractError);
}

TEST_CASE("povm error pairs") {
  const auto mix = product_basis_mixture(2);
  const auto& layout = mix.layout();
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const auto trivial = povm_error_pair(Povm(layout, {id, ComplexMatrix::Zero(4, 4)}), mix, mix);
  CHECK(trivial.p01 == doctest::Approx(0.0));
  CHECK(trivial.p10 == doctest::Approx(1.0));
  const auto coin = povm_error_pair(Povm(layout, {id / 2.0, id / 2.0}), mix, mix);
  CHECK(coin.p01 == doctest::Approx(0.5));
  CHECK(coin.p10 == doctest::Approx(0.5));

  for (int t = 0; t < 100; ++t) {
    const auto pair = povm_error_pair(random_binary_povm(layout, t), mix, bell_mixture(2));
    CHECK(std::abs(pair.p01 + pair.p10 - 1.0) <= 1e-10);
  }
  CHECK_THROWS_AS(povm_error_pair(Povm(layout, {id / 3.0, id / 3.0, id / 3.0}), mix, mix), ShapeError);
  CHECK_THROWS_AS(povm_error_pair(Povm(RegisterLayout({{"Q", 2}}), {id, ComplexMatrix::Zero(4, 4)}), mix, mix),
                  LayoutError);
}

TEST_CASE("product fidelity floor") {
  for (int d : {2, 4}) {
    const auto g = bell_state(d, 1, 2);
    CHECK(nearest_product_state(g, std::vector<std::string>{"A"}).fidelity ==
          doctest::Approx(1.0 / std::sqrt(double(d))).epsilon(1e-12));
    const auto report = fidelity_floor_check(d, 100, 3);
    CHECK(report.pass());
    CHECK(report.max_entangled_deviation <= 1e-9);
    CHECK(report.min_random_fidelity >= report.floor - 1e-9);
    const auto u = random_maximally_entangled(d, 5);
    CHECK(is_maximally_entangled(u, std::vector<std::string>{"A"}, 1e-10));
  }
}

TEST_CASE("random pure two-qubit states stay above the floor") {
  const RegisterLayout layout({{"A", 1}, {"B", 1}});
  double lowest = 1.0;
  for (int t = 0; t < 10000; ++t) {
    lowest = std::min(lowest, nearest_product_state(haar_random_pure(layout, t), std::vector<std::string>{"A"}).fidelity);
  }
  CHECK(lowest >= 1.0 / std::sqrt(2.0) - 1e-6);
  CHECK(lowest < 0.75);
}
