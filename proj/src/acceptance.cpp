#include "qmaforge/acceptance.hpp"

#include <algorithm>
#include <cmath>

#include "qmaforge/indist.hpp"
#include "qmaforge/parallel.hpp"
#include "qmaforge/protocols.hpp"
#include "qmaforge/prover_opt.hpp"
#include "qmaforge/random.hpp"
#include "qmaforge/states.hpp"
#include "qmaforge/toys.hpp"
#include "qmaforge/verifier.hpp"

namespace qmaforge::acceptance {

namespace {

RegisterLayout qubits_layout(const std::string& name, int qubits) { return RegisterLayout({{name, qubits}}); }

int random_rank(std::uint64_t seed, int dim) {
  CounterRng rng(seed);
  return 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(dim));
}

DensityOperator random_mixed(const RegisterLayout& layout, std::uint64_t seed) {
  const int dim = static_cast<int>(layout.dimension());
  return random_density(layout, random_rank(derive_seed(seed, 0), dim), derive_seed(seed, 1));
}

// Work register between the proofs, so that concatenation has to reorder.
Verifier interleaved_verifier(int proof_count, std::uint64_t seed) {
  std::vector<Register> regs{{"P1", 1}, {"W", 2}};
  std::vector<std::string> proofs{"P1"};
  for (int i = 2; i <= proof_count; ++i) {
    regs.push_back({"P" + std::to_string(i), 1});
    proofs.push_back("P" + std::to_string(i));
  }
  RegisterLayout layout(std::move(regs));
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  return Verifier(haar_random_unitary(dim, seed), std::move(layout), std::move(proofs), 1);
}

ProofTuple basis_proofs(int count, int qubits) {
  return ProofTuple(static_cast<std::size_t>(count), PureState::basis(qubits_layout("P", qubits), 0));
}

ProofTuple haar_proofs(int count, int qubits, std::uint64_t seed) {
  ProofTuple out;
  for (int i = 0; i < count; ++i) out.push_back(haar_random_pure(qubits_layout("P", qubits), derive_seed(seed, i)));
  return out;
}

AcceptanceOperator random_psd(int dim, std::uint64_t seed) {
  CounterRng rng(seed);
  const ComplexMatrix w = gaussian_matrix(rng, dim, dim);
  ComplexMatrix m = w * w.adjoint();
  m /= max_eigenvalue(m);
  return AcceptanceOperator((m + m.adjoint()) / 2.0);
}

}  // namespace

ExperimentReport swap_test_formula(std::uint64_t seed, int trials) {
  ExperimentReport report("swap-test", "controlled-swap acceptance equals 1/2 + tr(rho sigma)/2", seed);
  report.config() = {{"trials", trials}, {"qubits", {1, 2, 3}}, {"tolerance", 1e-12}};
  for (int n = 1; n <= 3; ++n) {
    const Verifier v = swap_test_verifier(n);
    const auto errors = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
      const std::uint64_t s = derive_seed(derive_seed(seed, n), t);
      const auto rho = random_mixed(qubits_layout("R", n), derive_seed(s, 0));
      const auto sigma = random_mixed(qubits_layout("R", n), derive_seed(s, 1));
      return std::abs(accept_probability_mixed(v, {rho, sigma}) - swap_test_analytic(rho, sigma));
    });
    report.check_at_most("n" + std::to_string(n) + ".max_abs_error", *std::max_element(errors.begin(), errors.end()),
                         1e-12);
  }
  return report;
}

ExperimentReport fidelity_lemmas(std::uint64_t seed, int trials) {
  ExperimentReport report("fidelity", "fidelity multiplicativity and F(r,s)^2 + F(s,x)^2 <= 1 + F(r,x)", seed);
  report.config() = {{"trials", trials}, {"dims", {2, 4, 8}}};
  for (int q = 1; q <= 3; ++q) {
    const RegisterLayout a = qubits_layout("A", q);
    const RegisterLayout b = qubits_layout("B", q);
    struct Outcome {
      double product_error;
      double chain_slack;
    };
    const auto outcomes = parallel_map(static_cast<std::size_t>(trials), [&](std::size_t t) {
      const std::uint64_t s = derive_seed(derive_seed(seed, 100 + q), t);
      const auto r1 = random_mixed(a, derive_seed(s, 0));
      const auto s1 = random_mixed(a, derive_seed(s, 1));
      const auto r2 = random_mixed(b, derive_seed(s, 2));
      const auto s2 = random_mixed(b, derive_seed(s, 3));
      const auto xi = random_mixed(a, derive_seed(s, 4));
      const double joint = fidelity(tensor(r1, r2), tensor(s1, s2));
      const double f_rs = fidelity(r1, s1);
      const double f_sx = fidelity(s1, xi);
      const double f_rx = fidelity(r1, xi);
      return Outcome{std::abs(joint - f_rs * fidelity(r2, s2)), 1.0 + f_rx - f_rs * f_rs - f_sx * f_sx};
    });
    double worst_product = 0.0;
    double worst_slack = 2.0;
    for (const auto& o : outcomes) {
      worst_product = std::max(worst_product, o.product_error);
      worst_slack = std::min(worst_slack, o.chain_slack);
    }
    const std::string prefix = "d" + std::to_string(1 << q) + ".";
    report.check_at_most(prefix + "multiplicativity_error", worst_product, 1e-7);
    report.check_at_least(prefix + "chain_slack", worst_slack, -1e-9);
  }
  return report;
}

ExperimentReport three_to_two(std::uint64_t seed, int restarts, std::size_t samples) {
  ExperimentReport report("reduce", "three proofs to two: completeness 1 - eps/2, soundness 1 - delta/20", seed);
  report.config() = {{"epsilon", 0.05}, {"delta", 0.6}, {"restarts", restarts}, {"samples", samples}};

  const Verifier yes = toy_yes_verifier();
  const double original = accept_probability(yes, toy_honest_proofs());
  report.check_at_least("yes.original_honest", original, 0.95, 1e-12);
  const Verifier reduced_yes = reduce_3_to_2(yes);
  const double honest = accept_probability(reduced_yes, reduced_honest_proofs(toy_honest_proofs(), 1, 0));
  report.check_at_least("yes.constructed_honest", honest, 0.975, 1e-10);
  report.check_close("yes.constructed_formula", honest, 0.5 + original / 2.0, 1e-12);

  const Verifier no = toy_no_verifier();
  report.check_at_most("no.original_entangled_optimum", max_eigenvalue(acceptance_operator(no).matrix()), 0.4, 1e-12);
  const Verifier reduced_no = reduce_3_to_2(no);
  ProductSearchConfig config;
  config.restarts = restarts;
  config.seed = seed;
  const auto cert = certify_soundness(reduced_no, proof_slot_dims(reduced_no), 0.97, config, samples);
  const double agreement = cert.brute_force_ran() ? std::abs(cert.brute_force_value - cert.seesaw_value) : -1.0;
  report.details() = {{"entangled_upper_bound", cert.entangled_upper_bound},
                      {"seesaw_value", cert.seesaw_value},
                      {"brute_force_value", cert.brute_force_value},
                      {"oracle_disagreement", agreement},
                      {"bound_used", cert.bound_used}};
  report.check_true("no.certified", cert.conclusive || (agreement >= 0.0 && agreement <= 1e-4));
  report.check_at_most("no.certificate_value", cert.value(), 0.97);
  return report;
}

ExperimentReport general_reduction(std::uint64_t seed) {
  ExperimentReport report("reduce-3kr", "(3k + r) to (2k + r) proofs with an ancilla check on S3", seed);
  report.config() = {{"cases", {{{"k", 1}, {"r", 0}}, {{"k", 1}, {"r", 1}}}}};

  const std::vector<std::pair<std::string, Verifier>> cases = {
      {"toy_yes", toy_yes_verifier()}, {"random", random_verifier(1, 3, 1, derive_seed(seed, 0))}};
  for (const auto& [name, v] : cases) {
    const auto a = acceptance_operator(reduce_3kr_to_2kr(v, 1, 0));
    const auto b = acceptance_operator(reduce_3_to_2(v));
    report.check_at_most(name + ".operator_difference", max_abs_diff(a.matrix(), b.matrix()), 1e-12);
  }

  // Four proofs: honest basis proof |0000> accepted with probability 0.95.
  std::vector<double> table(16);
  CounterRng rng(derive_seed(seed, 1));
  for (auto& p : table) p = rng.uniform();
  table[0] = 0.95;
  const Verifier four = rotation_verifier(table);
  const Verifier reduced = reduce_3kr_to_2kr(four, 1, 1);
  const auto m = acceptance_operator(reduced);

  double leak = 0.0;
  for (Eigen::Index i = 0; i < m.matrix().rows(); ++i) {
    for (Eigen::Index j = 0; j < m.matrix().cols(); ++j) {
      if ((i & 1) || (j & 1)) leak = std::max(leak, std::abs(m.matrix()(i, j)));
    }
  }
  report.check_at_most("r1.operator_on_s3_one", leak, 1e-12);

  const RegisterLayout slot = qubits_layout("P", 2);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    ProofTuple proofs = haar_proofs(2, 2, derive_seed(derive_seed(seed, 2), t));
    const auto r3 = haar_random_pure(qubits_layout("R", 1), derive_seed(derive_seed(seed, 3), t));
    ComplexVector one = ComplexVector::Zero(2);
    one(1) = 1.0;
    proofs.push_back(PureState::normalized(slot, tensor(r3.amplitudes(), one)));
    worst = std::max(worst, accept_probability(reduced, proofs));
  }
  report.check_at_most("r1.s3_one_acceptance", worst, 0.0, 1e-12);

  const double honest = accept_probability(reduced, reduced_honest_proofs(basis_proofs(4, 1), 1, 1));
  report.check_at_least("r1.honest", honest, 0.975, 1e-10);
  return report;
}

ExperimentReport amplification(std::uint64_t seed) {
  ExperimentReport report("amplify", "parallel repetition with threshold ceil(N (c + s) / 2)", seed);
  const SystemParams params{0, 2.0 / 3.0, 1.0 / 3.0, 3};
  report.config() = {{"completeness", params.completeness}, {"soundness", params.soundness}, {"q", 3}, {"p", 10}};
  const auto amp = amplify(params, 3, 10);
  report.check_close("n_attempts", static_cast<double>(amp.n_attempts), 180.0, 0.0);
  report.check_close("threshold", static_cast<double>(amp.threshold), 90.0, 0.0);
  report.check_close("completeness_bound", amp.completeness, 1.0 - std::ldexp(1.0, -10), 1e-15);
  report.check_close("soundness_bound", amp.soundness, 2.0 / 3.0, 1e-15);
  report.check_at_least("honest_binomial", amplified_accept_honest(2.0 / 3.0, amp), amp.completeness);

  const Verifier base = rotation_verifier({2.0 / 3.0, 0.25});
  const double p = accept_probability(base, basis_proofs(1, 1));
  for (const auto [n, t] : {std::pair{2, 1}, std::pair{3, 2}}) {
    const Verifier rep = parallel_repetition(base, n, t);
    AmplifiedParams small;
    small.n_attempts = n;
    small.threshold = t;
    const double circuit = accept_probability(rep, basis_proofs(n, 1));
    report.check_close("circuit_n" + std::to_string(n) + "_t" + std::to_string(t), circuit,
                       amplified_accept_honest(p, small), 1e-10);
  }
  return report;
}

ExperimentReport perfect_soundness(std::uint64_t seed, int verifiers) {
  ExperimentReport report("nqp-sim", "proof concatenation and the proof-free Hadamard-copy simulation", seed);
  report.config() = {{"verifiers", verifiers}};
  struct Outcome {
    double concat_error;
    double nqp_error;
    bool verdict_agrees;
    bool zero;
  };
  const auto outcomes = parallel_map(static_cast<std::size_t>(verifiers), [&](std::size_t i) {
    const std::uint64_t s = derive_seed(seed, i);
    const int k = 2 + static_cast<int>(i % 2);
    Verifier v = i % 3 == 0   ? perfect_soundness_verifier(k, 1, s)
                 : i % 3 == 1 ? random_verifier(1, k, 1, s)
                              : interleaved_verifier(k, s);
    const auto m = acceptance_operator(v);
    const Verifier joined = concat_proofs(v);
    const auto mj = acceptance_operator(joined);
    const auto nqp = nqp_simulation(joined);
    const double expected = m.matrix().trace().real() / static_cast<double>(m.dimension());
    const bool zero_operator = max_eigenvalue(m.matrix()) <= 1e-12;
    return Outcome{max_abs_diff(m.matrix(), mj.matrix()), std::abs(nqp.acceptance - expected),
                   nqp.zero == zero_operator, nqp.zero};
  });
  double concat = 0.0;
  double nqp = 0.0;
  int agree = 0;
  int zeros = 0;
  for (const auto& o : outcomes) {
    concat = std::max(concat, o.concat_error);
    nqp = std::max(nqp, o.nqp_error);
    agree += o.verdict_agrees ? 1 : 0;
    zeros += o.zero ? 1 : 0;
  }
  report.details() = {{"zero_verdicts", zeros}};
  report.check_at_most("concat_operator_difference", concat, 1e-14);
  report.check_at_most("nqp_trace_error", nqp, 1e-12);
  report.check_close("zero_verdict_agreement", agree, verifiers, 0.0);
  return report;
}

ExperimentReport indistinguishability(std::uint64_t seed, int trials) {
  ExperimentReport report("indist", "product and generalized-Bell mixtures coincide; floor 1/sqrt(d)", seed);
  report.config() = {{"dims", {2, 4}}, {"trials", trials}};
  for (int d : {2, 4}) {
    const std::string prefix = "d" + std::to_string(d) + ".";
    const auto id = ComplexMatrix::Identity(d * d, d * d) / static_cast<double>(d * d);
    const auto mix0 = product_basis_mixture(d);
    const auto mix1 = bell_mixture(d);
    report.check_at_most(prefix + "product_mixture", max_abs_diff(mix0.matrix(), id), 1e-12);
    report.check_at_most(prefix + "bell_mixture", max_abs_diff(mix1.matrix(), id), 1e-12);
    report.check_at_most(prefix + "gram_identity",
                         max_abs_diff(bell_gram(d), ComplexMatrix::Identity(d * d, d * d)), 1e-12);

    double sum_error = 0.0;
    double element_gap = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto povm = random_binary_povm(mix0.layout(), derive_seed(derive_seed(seed, d), t));
      const auto pair = povm_error_pair(povm, mix0, mix1);
      sum_error = std::max(sum_error, std::abs(pair.p01 + pair.p10 - 1.0));
      for (const auto& e : povm.elements()) {
        element_gap = std::max(element_gap, std::abs((e * mix0.matrix()).trace() - (e * mix1.matrix()).trace()));
      }
    }
    report.check_at_most(prefix + "povm_error_sum", sum_error, 1e-10);
    report.check_at_most(prefix + "povm_statistics_gap", element_gap, 1e-10);

    const auto floor = fidelity_floor_check(d, trials, derive_seed(seed, 10 + d));
    report.check_at_most(prefix + "entangled_fidelity_deviation", floor.max_entangled_deviation, 1e-9);
    report.check_at_least(prefix + "random_fidelity_floor", floor.min_random_fidelity, floor.floor, 1e-9);
  }
  return report;
}

ExperimentReport optimizer_sanity(std::uint64_t seed, int operators) {
  ExperimentReport report("optimize", "see-saw over product proofs against the entangled optimum", seed);
  report.config() = {{"operators", operators}, {"shapes", {{2, 2}, {2, 2, 2}}}};
  for (int k : {2, 3}) {
    const std::vector<std::size_t> dims(static_cast<std::size_t>(k), 2);
    struct Outcome {
      double drop;
      double excess;
      double product_error;
    };
    const auto outcomes = parallel_map(static_cast<std::size_t>(operators), [&](std::size_t i) {
      const std::uint64_t s = derive_seed(derive_seed(seed, k), i);
      ProductSearchConfig config;
      config.seed = s;
      const auto m = acceptance_operator(random_verifier(1, k, 1, s));
      const auto result = seesaw(m, dims, config);
      double drop = 0.0;
      for (const auto& trace : result.all_traces) {
        for (std::size_t j = 1; j < trace.size(); ++j) drop = std::max(drop, trace[j - 1] - trace[j]);
      }
      const double excess = result.value - max_eigenvalue(m.matrix());

      const int half = 1 << (k - 1);
      const auto a = random_psd(2, derive_seed(s, 1));
      const auto b = random_psd(half, derive_seed(s, 2));
      const AcceptanceOperator ab(tensor(a.matrix(), b.matrix()));
      const double target = max_eigenvalue(a.matrix()) * max_eigenvalue(b.matrix());
      const double product_error = k == 2 ? std::abs(seesaw(ab, dims, config).value - target) : 0.0;
      return Outcome{drop, excess, product_error};
    });
    double drop = 0.0;
    double excess = -1.0;
    double product_error = 0.0;
    for (const auto& o : outcomes) {
      drop = std::max(drop, o.drop);
      excess = std::max(excess, o.excess);
      product_error = std::max(product_error, o.product_error);
    }
    const std::string prefix = "k" + std::to_string(k) + ".";
    report.check_at_most(prefix + "max_trace_drop", drop, 1e-12);
    report.check_at_most(prefix + "excess_over_lambda_max", excess, 1e-9);
    if (k == 2) report.check_at_most(prefix + "product_operator_error", product_error, 1e-8);
  }

  // Three-slot product operators A (x) B (x) C.
  double worst = 0.0;
  for (int i = 0; i < operators; ++i) {
    const std::uint64_t s = derive_seed(derive_seed(seed, 7), i);
    const auto a = random_psd(2, derive_seed(s, 0));
    const auto b = random_psd(2, derive_seed(s, 1));
    const auto c = random_psd(2, derive_seed(s, 2));
    const AcceptanceOperator abc(tensor(tensor(a.matrix(), b.matrix()), c.matrix()));
    ProductSearchConfig config;
    config.seed = s;
    config.restarts = 2;
    const double value = seesaw(abc, {2, 2, 2}, config).value;
    worst = std::max(worst, std::abs(value - max_eigenvalue(a.matrix()) * max_eigenvalue(b.matrix()) *
                                                 max_eigenvalue(c.matrix())));
  }
  report.check_at_most("k3.product_operator_error", worst, 1e-8);
  return report;
}

std::vector<Criterion> criteria() {
  return {
      {1, "swap-test formula", 10.0, [](std::uint64_t s) { return swap_test_formula(s); }},
      {2, "fidelity lemmas", 30.0, [](std::uint64_t s) { return fidelity_lemmas(s); }},
      {3, "three-to-two reduction", 120.0, [](std::uint64_t s) { return three_to_two(s); }},
      {4, "general reduction specialization", 60.0, [](std::uint64_t s) { return general_reduction(s); }},
      {5, "amplification arithmetic", 10.0, [](std::uint64_t s) { return amplification(s); }},
      {6, "perfect soundness and nqp", 30.0, [](std::uint64_t s) { return perfect_soundness(s); }},
      {7, "indistinguishability", 30.0, [](std::uint64_t s) { return indistinguishability(s); }},
      {8, "optimizer sanity", 120.0, [](std::uint64_t s) { return optimizer_sanity(s); }},
  };
}

}  // namespace qmaforge::acceptance
