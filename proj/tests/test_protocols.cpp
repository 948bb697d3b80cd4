#include <doctest.h>

#include <cmath>
#include <string>

#include "qmaforge/errors.hpp"
#include "qmaforge/protocols.hpp"
#include "qmaforge/random.hpp"
#include "qmaforge/toys.hpp"

using namespace qmaforge;

namespace {

RegisterLayout reg(const char* name, int q) { return RegisterLayout({{name, q}}); }

double binomial_tail(int n, int t, double p) {
  double sum = 0.0;
  for (int j = t; j <= n; ++j) sum += std::tgamma(n + 1) / (std::tgamma(j + 1) * std::tgamma(n - j + 1)) *
                                      std::pow(p, j) * std::pow(1 - p, n - j);
  return sum;
}

}  // namespace

TEST_CASE("swap test on pure and mixed states") {
  const Verifier v = swap_test_verifier(1);
  CHECK(v.layout().names() == std::vector<std::string>{"B", "R1", "R2"});
  const auto zero = PureState::basis(reg("R", 1), 0);
  const auto one = PureState::basis(reg("R", 1), 1);
  CHECK(accept_probability(v, {zero, zero}) == doctest::Approx(1.0));
  CHECK(accept_probability(v, {zero, one}) == doctest::Approx(0.5));

  for (int t = 0; t < 10; ++t) {
    const auto a = haar_random_pure(reg("R", 2), derive_seed(1, t));
    const auto b = haar_random_pure(reg("R", 2), derive_seed(2, t));
    const Verifier v2 = swap_test_verifier(2);
    const double overlap = std::norm(a.amplitudes().dot(b.amplitudes()));
    CHECK(accept_probability(v2, {a, b}) == doctest::Approx(0.5 + overlap / 2).epsilon(1e-12));
    CHECK(accept_probability_mixed(v2, {density_of(a), density_of(b)}) ==
          doctest::Approx(0.5 + overlap / 2).epsilon(1e-12));
  }
  const auto mixed = DensityOperator::maximally_mixed(reg("R", 1));
  CHECK(accept_probability_mixed(v, {mixed, mixed}) == doctest::Approx(0.75));
  CHECK(swap_test_analytic(mixed, mixed) == doctest::Approx(0.75));
  CHECK_THROWS_AS(accept_probability_mixed(v, {mixed}), CompatibilityError);
}

TEST_CASE("amplification parameters") {
  const auto a = amplify({0, 2.0 / 3.0, 1.0 / 3.0, 3}, 3, 10);
  CHECK(a.n_attempts == 180);
  CHECK(a.threshold == 90);
  CHECK(a.completeness == doctest::Approx(1.0 - 1.0 / 1024));
  CHECK(a.soundness == doctest::Approx(2.0 / 3.0));

  const auto b = amplify({0, 0.6, 0.4, 5}, 5, 3);
  CHECK(b.n_attempts == 150);
  CHECK(b.soundness == doctest::Approx(0.8));
  CHECK(b.soundness <= b.soundness_relaxed);
  CHECK(b.soundness_relaxed == doctest::Approx(0.9));
  CHECK(b.soundness_relaxed <= b.gap_floor);

  CHECK_THROWS_AS(amplify({0, 0.6, 0.5, std::nullopt}, 5, 3), HypothesisError);
  CHECK_THROWS_AS(amplify({0, 0.4, 0.6, std::nullopt}, 5, 3), HypothesisError);

  // The log-space tail against a direct sum.
  for (double p : {0.1, 0.5, 2.0 / 3.0, 0.9}) {
    AmplifiedParams small;
    small.n_attempts = 12;
    small.threshold = 7;
    CHECK(amplified_accept_honest(p, small) == doctest::Approx(binomial_tail(12, 7, p)).epsilon(1e-12));
  }
  CHECK(amplified_accept_honest(2.0 / 3.0, a) >= a.completeness);
  CHECK(amplified_accept_honest(1.0 / 3.0, a) <= std::ldexp(1.0, -10));
}

TEST_CASE("parallel repetition matches the binomial tail") {
  const Verifier base = rotation_verifier({0.7, 0.2});
  const auto zero = PureState::basis(reg("P", 1), 0);
  for (auto [n, t] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 1}, std::pair{3, 3}}) {
    const Verifier rep = parallel_repetition(base, n, t);
    CHECK(rep.proof_count() == static_cast<std::size_t>(n));
    CHECK(accept_probability(rep, ProofTuple(n, zero)) == doctest::Approx(binomial_tail(n, t, 0.7)).epsilon(1e-12));
  }
  // Independent proofs per attempt.
  const Verifier rep = parallel_repetition(base, 2, 2);
  const auto one = PureState::basis(reg("P", 1), 1);
  CHECK(accept_probability(rep, {zero, one}) == doctest::Approx(0.7 * 0.2).epsilon(1e-12));
}

TEST_CASE("three-to-two reduction on the toys") {
  const Verifier reduced = reduce_3_to_2(toy_yes_verifier());
  CHECK(reduced.proof_count() == 2);
  CHECK(reduced.proof_qubits() == 2);
  const auto honest = reduced_honest_proofs(toy_honest_proofs(), 1, 0);
  CHECK(accept_probability(reduced, honest) == doctest::Approx(0.975).epsilon(1e-12));

  // Entangled optimum is the average of the two branch optima.
  const Verifier no = reduce_3_to_2(toy_no_verifier());
  CHECK(max_eigenvalue(acceptance_operator(no).matrix()) <= 0.7 + 1e-12);

  // Mismatched S registers: the swap-test branch alone gives 1/2 + overlap / 2.
  const auto zero = PureState::basis(reg("P", 1), 0);
  const auto one = PureState::basis(reg("P", 1), 1);
  const ProofTuple split{PureState::normalized(reg("P", 2), tensor(zero.amplitudes(), zero.amplitudes())),
                         PureState::normalized(reg("P", 2), tensor(zero.amplitudes(), one.amplitudes()))};
  const double p_cons = accept_probability(toy_yes_verifier(), {zero, zero, zero});
  CHECK(accept_probability(reduced, split) == doctest::Approx(0.5 * 0.5 + 0.5 * p_cons).epsilon(1e-12));

  CHECK_THROWS_AS(reduce_3_to_2(always_reject(1, 2, 1)), ShapeError);
}

TEST_CASE("general reduction agrees with the three-proof case") {
  const Verifier v = random_verifier(1, 3, 1, 17);
  const auto a = acceptance_operator(reduce_3kr_to_2kr(v, 1, 0));
  const auto b = acceptance_operator(reduce_3_to_2(v));
  CHECK(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);

  const Verifier four = rotation_verifier(std::vector<double>(16, 0.9));
  const Verifier r1 = reduce_3kr_to_2kr(four, 1, 1);
  CHECK(r1.proof_registers() == std::vector<std::string>{"P1.1", "P2.1", "P3.1"});
  ProofTuple honest = reduced_honest_proofs(ProofTuple(4, PureState::basis(reg("P", 1), 0)), 1, 1);
  CHECK(accept_probability(r1, honest) == doctest::Approx(0.95).epsilon(1e-12));
  honest[2] = PureState::basis(reg("P", 2), 1);
  CHECK(accept_probability(r1, honest) < 1e-12);

  CHECK_THROWS_AS(reduce_3kr_to_2kr(v, 1, 1), ShapeError);
  CHECK_THROWS_AS(reduce_3kr_to_2kr(v, 0, 3), ShapeError);
}

TEST_CASE("stage parameters and the reduction chain") {
  const auto s = reduce_stage_params({9, 0.001, 0.5});
  CHECK(s.k == 6);
  CHECK(s.epsilon == doctest::Approx(0.0005));
  CHECK(s.delta == doctest::Approx(0.025));
  CHECK(reduce_stage_params({4, 0.001, 0.5}).k == 3);
  CHECK(reduce_stage_params({5, 0.001, 0.5}).k == 4);
  CHECK_THROWS_AS(reduce_stage_params({3, 0.1, 0.5}), HypothesisError);

  const SystemParams params{9, 2.0 / 3.0, 1.0 / 3.0, 3};
  const Verifier nine = always_reject(1, 9, 1);
  const auto chain = reduce_chain(nine, params, 3, 20, false);
  REQUIRE(chain.stages.size() == 4);
  std::vector<int> ks;
  for (const auto& st : chain.stages) ks.push_back(st.output.k);
  CHECK(ks == std::vector<int>{6, 4, 3, 2});
  const double eps = std::ldexp(1.0, -20);
  const double delta = 1.0 / 6.0;
  CHECK(chain.stages.back().output.epsilon == doctest::Approx(eps / 16));
  CHECK(chain.stages.back().output.delta == doctest::Approx(delta / 160000));
  CHECK(chain.q_final == static_cast<long>(std::ceil(160000 / delta)));
  CHECK_FALSE(chain.final_verifier.has_value());

  CHECK_THROWS_AS(reduce_chain(nine, params, 3, 10, false), HypothesisError);
  try {
    reduce_chain(nine, params, 3, 20, true);
    FAIL("expected a size-limit error");
  } catch (const SizeLimitError& e) {
    CHECK(std::string(e.what()).find("stage 0") != std::string::npos);
  }

  const auto small = reduce_chain(toy_yes_verifier(), {3, 2.0 / 3.0, 1.0 / 3.0, 3}, 3, 10, true);
  REQUIRE(small.stages.size() == 1);
  REQUIRE(small.final_verifier.has_value());
  CHECK(small.final_verifier->proof_count() == 2);
}

TEST_CASE("concatenation and the proof-free simulation") {
  const Verifier v = random_verifier(2, 3, 1, 23);
  const Verifier joined = concat_proofs(v);
  CHECK(joined.proof_registers() == std::vector<std::string>{"M"});
  CHECK(joined.proof_qubits() == 3);
  CHECK(max_abs_diff(acceptance_operator(v).matrix(), acceptance_operator(joined).matrix()) < 1e-14);

  ProofTuple proofs;
  for (int i = 0; i < 3; ++i) proofs.push_back(haar_random_pure(reg("P", 1), derive_seed(8, i)));
  const auto single = PureState::normalized(reg("M", 3), joint_proof(proofs));
  CHECK(accept_probability(joined, {single}) == doctest::Approx(accept_probability(v, proofs)).epsilon(1e-12));

  const auto marked = nqp_simulation(marked_basis_verifier(2, 1));
  CHECK(marked.acceptance == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_FALSE(marked.zero);

  const auto perfect = nqp_simulation(concat_proofs(perfect_soundness_verifier(2, 1, 4)));
  CHECK(perfect.zero);
  CHECK(perfect.acceptance <= 1e-12);
  CHECK(nqp_circuit(joined).proof_count() == 0);
  CHECK_THROWS_AS(nqp_circuit(v), ShapeError);
  CHECK_THROWS_AS(concat_proofs(Verifier(gates::pauli_x(), reg("O", 1), {}, 0)), ShapeError);
}
