#include <doctest.h>

#include <cmath>

#include "qmaforge/errors.hpp"
#include "qmaforge/prover_opt.hpp"
#include "qmaforge/random.hpp"
#include "qmaforge/toys.hpp"

using namespace qmaforge;

namespace {

RegisterLayout reg(const char* name, int q) { return RegisterLayout({{name, q}}); }

AcceptanceOperator random_operator(int dim, std::uint64_t seed) {
  CounterRng rng(seed);
  const ComplexMatrix w = gaussian_matrix(rng, dim, dim);
  ComplexMatrix m = w * w.adjoint();
  m /= max_eigenvalue(m);
  return AcceptanceOperator((m + m.adjoint()) / 2.0);
}

ProductSearchConfig config_with(int restarts, std::uint64_t seed) {
  ProductSearchConfig c;
  c.restarts = restarts;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("effective operator reproduces the joint quadratic form") {
  const auto m = random_operator(16, 3);
  ProofTuple proofs{haar_random_pure(reg("P", 1), 1), haar_random_pure(reg("P", 2), 2),
                    haar_random_pure(reg("P", 1), 3)};
  for (std::size_t hold = 0; hold < proofs.size(); ++hold) {
    const ComplexMatrix e = effective_operator(m, proofs, hold);
    const auto phi = haar_random_pure(proofs[hold].layout(), 10 + hold);
    ProofTuple swapped = proofs;
    swapped[hold] = phi;
    const ComplexVector joint = joint_proof(swapped);
    const double want = joint.dot(m.matrix() * joint).real();
    CHECK(phi.amplitudes().dot(e * phi.amplitudes()).real() == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK_THROWS_AS(effective_operator(m, proofs, 3), IndexError);
  CHECK_THROWS_AS(effective_operator(m, {proofs[0], proofs[0]}, 0), ShapeError);
}

TEST_CASE("see-saw on basis projectors and pure operators") {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(1, 1) = 1.0;
  CHECK(seesaw(AcceptanceOperator(p), {2, 2}, config_with(4, 1)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(brute_force_product(AcceptanceOperator(p), {2, 2}, 10, 1) == doctest::Approx(1.0));

  // M = |psi><psi|: the product optimum is the squared top Schmidt coefficient.
  const RegisterLayout layout({{"A", 1}, {"B", 2}});
  for (int t = 0; t < 20; ++t) {
    const auto psi = haar_random_pure(layout, derive_seed(4, t));
    const ComplexVector v = psi.amplitudes();
    const AcceptanceOperator m(v * v.adjoint());
    const double top = nearest_product_state(psi, std::vector<std::string>{"A"}).fidelity;
    CHECK(seesaw(m, {2, 4}, config_with(4, t)).value == doctest::Approx(top * top).epsilon(1e-7));
  }
}

TEST_CASE("see-saw traces are monotone and bounded by the entangled optimum") {
  for (int t = 0; t < 30; ++t) {
    const auto m = random_operator(8, derive_seed(5, t));
    const auto r = seesaw(m, {2, 2, 2}, config_with(3, t));
    CHECK(r.all_traces.size() == 4);
    for (const auto& trace : r.all_traces) {
      for (std::size_t j = 1; j < trace.size(); ++j) CHECK(trace[j] >= trace[j - 1] - 1e-12);
    }
    CHECK(r.value <= max_eigenvalue(m.matrix()) + 1e-9);
    CHECK(r.value == doctest::Approx(joint_proof(r.proofs).dot(m.matrix() * joint_proof(r.proofs)).real()));
  }
}

TEST_CASE("see-saw is deterministic") {
  const auto m = random_operator(16, 8);
  const auto a = seesaw(m, {4, 4}, config_with(6, 99));
  const auto b = seesaw(m, {4, 4}, config_with(6, 99));
  CHECK(a.value == b.value);
  CHECK(a.trace == b.trace);
  CHECK(max_abs_diff(joint_proof(a.proofs), joint_proof(b.proofs)) == 0.0);
}

TEST_CASE("brute force oracle") {
  const auto m = random_operator(4, 11);
  const double small = brute_force_product(m, {2, 2}, 5000, 3);
  const double large = brute_force_product(m, {2, 2}, 10000, 3);
  CHECK(large >= small);
  CHECK(large <= seesaw(m, {2, 2}, config_with(8, 3)).value + 1e-12);
  CHECK_THROWS_AS(brute_force_product(random_operator(128, 1), {2, 64}, 10, 1), SizeLimitError);
  CHECK_THROWS_AS(brute_force_product(m, {2}, 10, 1), ShapeError);
  CHECK_THROWS_AS(brute_force_product(m, {3, 1}, 10, 1), ShapeError);
}

// Haar sampling of a 4-real-dimensional product manifold falls short of the
// optimum by roughly 1/sqrt(samples), so 1e6 samples usually miss 1e-4.
TEST_CASE("brute force and see-saw agree on a random two-qubit operator" * doctest::may_fail()) {
  const auto m = random_operator(4, 12);
  const double oracle = brute_force_product(m, {2, 2}, 1000000, 7);
  const double search = seesaw(m, {2, 2}, config_with(32, 7)).value;
  MESSAGE("brute force " << oracle << ", see-saw " << search);
  CHECK(oracle <= search + 1e-12);
  CHECK(std::abs(oracle - search) <= 1e-4);
}

TEST_CASE("soundness certificates") {
  const auto rej = certify_soundness(always_reject(1, 2, 1), {2, 2}, 0.1, config_with(2, 0));
  CHECK(rej.conclusive);
  CHECK(rej.entangled_upper_bound == 0.0);
  CHECK(rej.bound_used == "entangled_upper_bound");
  CHECK_FALSE(rej.brute_force_ran());

  const Verifier yes = toy_yes_verifier();
  const auto cert = certify_soundness(yes, proof_slot_dims(yes), 0.5, config_with(4, 1), 1000);
  CHECK_FALSE(cert.conclusive);
  CHECK(cert.bound_used == "product_lower_bound");
  CHECK(cert.brute_force_ran());
  CHECK(cert.value() == doctest::Approx(0.95).epsilon(1e-9));
  CHECK(cert.product_lower_bound <= cert.entangled_upper_bound + 1e-9);
}
