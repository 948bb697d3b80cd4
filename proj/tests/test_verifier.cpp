#include <doctest.h>

#include "qmaforge/errors.hpp"
#include "qmaforge/random.hpp"
#include "qmaforge/toys.hpp"
#include "qmaforge/verifier.hpp"

using namespace qmaforge;

namespace {

RegisterLayout reg(const char* name, int q) { return RegisterLayout({{name, q}}); }

ProofTuple basis_tuple(std::size_t x, int k) {
  ProofTuple out;
  for (int i = k - 1; i >= 0; --i) out.insert(out.begin(), PureState::basis(reg("P", 1), (x >> (k - 1 - i)) & 1));
  return out;
}

// Reference simulation: full state vector, explicit projection on the output bit.
double simulate(const Verifier& v, const ComplexVector& joint) {
  const auto& layout = v.layout();
  ComplexVector state = ComplexVector::Zero(static_cast<Eigen::Index>(layout.dimension()));
  const QubitMap proofs(layout, v.proof_registers());
  for (Eigen::Index i = 0; i < joint.size(); ++i) state(proofs.scatter(i)) = joint(i);
  const ComplexVector out = v.circuit() * state;
  double p = 0.0;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if ((static_cast<std::size_t>(i) >> v.output_bit()) & 1) p += std::norm(out(i));
  }
  return p;
}

}  // namespace

TEST_CASE("rotation toy verdicts match hand-computed probabilities") {
  const std::vector<double> table{0.95, 0.5, 0.3, 0.6, 0.2, 0.4, 0.1, 0.7};
  const Verifier plain = rotation_verifier(table);
  for (std::size_t x = 0; x < 8; ++x) CHECK(accept_probability(plain, basis_tuple(x, 3)) == doctest::Approx(table[x]));

  // Reading the last proof in the Hadamard basis: |0>|0>|+> hits table[0].
  const Verifier yes = toy_yes_verifier();
  CHECK(accept_probability(yes, toy_honest_proofs()) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(max_eigenvalue(acceptance_operator(yes).matrix()) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(max_eigenvalue(acceptance_operator(toy_no_verifier()).matrix()) == doctest::Approx(0.4).epsilon(1e-12));
  // |0>|0>|0> under the Hadamard reading: (0.95 + 0.5) / 2.
  CHECK(accept_probability(yes, basis_tuple(0, 3)) == doctest::Approx(0.725).epsilon(1e-12));
}

TEST_CASE("trivial verifiers") {
  const Verifier rej = always_reject(2, 3, 1);
  const Verifier acc = always_accept(1, 2, 2);
  const auto proofs3 = ProofTuple(3, haar_random_pure(reg("P", 1), 1));
  const auto proofs2 = ProofTuple(2, haar_random_pure(reg("P", 2), 2));
  CHECK(accept_probability(rej, proofs3) == 0.0);
  CHECK(accept_probability(acc, proofs2) == doctest::Approx(1.0));
  CHECK(max_abs(acceptance_operator(rej).matrix()) == 0.0);

  const Verifier marked = marked_basis_verifier(2, 3);
  const auto phi = haar_random_pure(reg("P", 2), 3);
  CHECK(accept_probability(marked, {phi}) == doctest::Approx(std::norm(phi.amplitudes()(3))).epsilon(1e-12));
}

TEST_CASE("acceptance operator reproduces simulation on entangled proofs") {
  for (int t = 0; t < 10; ++t) {
    const Verifier v = random_verifier(1 + t % 2, 2 + t % 2, 1, derive_seed(3, t));
    const auto m = acceptance_operator(v);
    const auto joint = haar_random_pure(v.proof_layout(), derive_seed(4, t)).amplitudes();
    const double want = simulate(v, joint);
    CHECK(joint.dot(m.matrix() * joint).real() == doctest::Approx(want).epsilon(1e-12));
    CHECK(accept_probability_joint(v, joint) == doctest::Approx(want).epsilon(1e-12));

    ProofTuple product;
    for (std::size_t i = 0; i < v.proof_count(); ++i) {
      product.push_back(haar_random_pure(reg("P", 1), derive_seed(5, 10 * t + i)));
    }
    CHECK(accept_probability(v, product) == doctest::Approx(simulate(v, joint_proof(product))).epsilon(1e-12));

    // Mixed joint proofs never beat the top eigenvector.
    const auto best = optimal_entangled_proof(v);
    CHECK(accept_probability_joint(v, best.proof.amplitudes()) == doctest::Approx(best.value).epsilon(1e-12));
    const auto rho = random_density(v.proof_layout(), 3, derive_seed(6, t));
    CHECK((m.matrix() * rho.matrix()).trace().real() <= best.value + 1e-12);
  }
}

TEST_CASE("verifier contracts") {
  const RegisterLayout layout({{"W", 1}, {"P1", 1}, {"P2", 2}});
  const ComplexMatrix id = ComplexMatrix::Identity(16, 16);
  CHECK_THROWS_AS(Verifier(id, layout, {"P1", "P2"}, 0), LayoutError);
  CHECK_THROWS_AS(Verifier(id, RegisterLayout({{"W", 1}, {"P1", 1}, {"P2", 1}}), {"P1", "Q"}, 0), LayoutError);
  CHECK_THROWS_AS(Verifier(2.0 * ComplexMatrix::Identity(8, 8), RegisterLayout({{"W", 1}, {"P1", 1}, {"P2", 1}}),
                           {"P1", "P2"}, 0),
                  ContractError);
  CHECK_THROWS_AS(Verifier(ComplexMatrix::Identity(8, 8), RegisterLayout({{"W", 1}, {"P1", 1}, {"P2", 1}}),
                           {"P1", "P2"}, 1),
                  LayoutError);

  const Verifier v = always_reject(1, 2, 1);
  CHECK_THROWS_AS(accept_probability(v, ProofTuple(3, PureState::basis(reg("P", 1), 0))), CompatibilityError);
  CHECK_THROWS_AS(accept_probability(v, ProofTuple(2, PureState::basis(reg("P", 2), 0))), CompatibilityError);
  CHECK_THROWS_AS(AcceptanceOperator(2.0 * ComplexMatrix::Identity(2, 2)), ContractError);

  // Zero proofs are allowed.
  const Verifier none(gates::pauli_x(), reg("O", 1), {}, 0);
  CHECK(accept_probability(none, {}) == doctest::Approx(1.0));
}

TEST_CASE("system verdicts") {
  const SystemParams params{3, 0.95, 0.4, std::nullopt};
  const auto verdict = check_system(toy_yes_verifier(), toy_honest_proofs(), params, 0.4);
  CHECK(verdict.completeness_ok);
  CHECK(verdict.soundness_ok);
  const auto bad = check_system(toy_yes_verifier(), toy_honest_proofs(), {3, 0.96, 0.4, std::nullopt}, 0.5);
  CHECK_FALSE(bad.completeness_ok);
  CHECK_FALSE(bad.soundness_ok);
}

TEST_CASE("circuit builder composes in application order") {
  const RegisterLayout layout({{"A", 1}, {"B", 1}});
  CircuitBuilder b(layout);
  b.apply(gates::hadamard(), {"A"}).apply(controlled(gates::pauli_x()), {"A", "B"});
  const ComplexVector bell = b.unitary().col(0);
  CHECK(std::abs(bell(0) - Complex(1.0 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(bell(3) - Complex(1.0 / std::sqrt(2.0))) < 1e-15);

  CircuitBuilder c(layout);
  c.apply_classical([](std::size_t i) { return (i + 1) % 4; });
  CHECK(std::abs(c.unitary()(1, 0) - Complex(1.0)) == 0.0);
  CHECK_THROWS_AS(c.apply_classical([](std::size_t) { return std::size_t{0}; }), ContractError);
  CHECK_THROWS_AS(c.apply(2.0 * gates::hadamard(), {"A"}), ContractError);
}
