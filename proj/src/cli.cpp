#include "qmaforge/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qmaforge/acceptance.hpp"
#include "qmaforge/errors.hpp"
#include "qmaforge/indist.hpp"
#include "qmaforge/protocols.hpp"
#include "qmaforge/prover_opt.hpp"
#include "qmaforge/random.hpp"
#include "qmaforge/serialize.hpp"
#include "qmaforge/toys.hpp"

namespace qmaforge::cli {

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::string out;
  std::string in;
  std::string emit;
  std::string toy = "yes";
  int trials = 0;
  double tolerance = 0.0;
  int qubits = 0;
  int dim = 2;
  int k = 0;
  double epsilon = 0.05;
  double delta = 0.6;
  int restarts = 8;
  bool certify = false;
  double completeness = 2.0 / 3.0;
  double soundness = 1.0 / 3.0;
  int gap_q = 3;
  int target_p = 10;
  std::size_t samples = 0;
  double threshold = -1.0;
  bool no_materialize = false;
};

Json read_json(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream file(path);
  if (!file) throw FormatError("cannot write '" + path + "'");
  file << j.dump(2) << "\n";
}

std::optional<Verifier> input_verifier(const Options& o) {
  if (o.in.empty()) return std::nullopt;
  return verifier_from_json(read_json(o.in));
}

int or_default(int value, int fallback) { return value > 0 ? value : fallback; }

ExperimentReport swap_test(const Options& o) {
  const int n = or_default(o.qubits, 2);
  const int trials = or_default(o.trials, 200);
  const double tol = o.tolerance > 0.0 ? o.tolerance : 1e-12;
  ExperimentReport report("swap-test", "controlled-swap acceptance equals 1/2 + tr(rho sigma)/2", o.seed);
  report.config() = {{"qubits", n}, {"trials", trials}, {"tolerance", tol}};
  const Verifier v = swap_test_verifier(n);
  const RegisterLayout layout({{"R", n}});
  const auto dim = static_cast<int>(layout.dimension());
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(o.seed, static_cast<std::uint64_t>(t));
    CounterRng rng(derive_seed(s, 0));
    const int rank_a = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(dim));
    const int rank_b = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(dim));
    const auto rho = random_density(layout, rank_a, derive_seed(s, 1));
    const auto sigma = random_density(layout, rank_b, derive_seed(s, 2));
    report.check_close("trial" + std::to_string(t), accept_probability_mixed(v, {rho, sigma}),
                       swap_test_analytic(rho, sigma), tol);
  }
  return report;
}

ExperimentReport amplify_cmd(const Options& o) {
  ExperimentReport report("amplify", "parallel repetition with threshold ceil(N (c + s) / 2)", o.seed);
  const SystemParams params{0, o.completeness, o.soundness, o.gap_q};
  report.config() = {{"completeness", o.completeness},
                     {"soundness", o.soundness},
                     {"gap_q", o.gap_q},
                     {"target_p", o.target_p}};
  const auto amp = amplify(params, o.gap_q, o.target_p);
  const double honest = amplified_accept_honest(o.completeness, amp);
  report.details() = {{"amplified", to_json(amp)}, {"honest_acceptance", honest}};
  report.check_close("n_attempts", static_cast<double>(amp.n_attempts), 2.0 * o.target_p * o.gap_q * o.gap_q, 0.0);
  report.check_at_least("honest_meets_completeness", honest, amp.completeness);
  report.check_at_most("soundness_le_relaxed", amp.soundness, amp.soundness_relaxed, 1e-15);
  report.check_at_most("relaxed_le_gap_floor", amp.soundness_relaxed, amp.gap_floor, 1e-15);
  if (o.soundness > 0.0) {
    report.check_at_most("repeated_soundness_tail", amplified_accept_honest(o.soundness, amp),
                         std::ldexp(1.0, -o.target_p), 1e-15);
  }
  return report;
}

ExperimentReport reduce_cmd(const Options& o) {
  ExperimentReport report("reduce", "three proofs to two: completeness 1 - eps/2, soundness 1 - delta/20", o.seed);
  const auto loaded = input_verifier(o);
  if (!loaded && o.toy != "yes" && o.toy != "no") throw ContractError("--toy must be 'yes' or 'no'");
  const Verifier v = loaded ? *loaded : (o.toy == "yes" ? toy_yes_verifier() : toy_no_verifier());
  const int k = or_default(o.k, static_cast<int>(v.proof_count()));
  if (static_cast<std::size_t>(k) != v.proof_count()) {
    throw ShapeError("--k " + std::to_string(k) + " does not match the verifier's " +
                     std::to_string(v.proof_count()) + " proofs");
  }
  const std::size_t samples = o.samples > 0 ? o.samples : 100000;
  report.config() = {{"in", o.in.empty() ? "toy-" + o.toy : o.in}, {"k", k},
                     {"epsilon", o.epsilon}, {"delta", o.delta},
                     {"certify", o.certify}, {"restarts", o.restarts},
                     {"samples", samples}};

  const auto stage = reduce_stage_params({k, o.epsilon, o.delta});
  const Verifier reduced = k == 3 ? reduce_3_to_2(v) : reduce_3kr_to_2kr(v, k / 3, k % 3);
  report.check_close("output_proofs", static_cast<double>(reduced.proof_count()), stage.k, 0.0);

  // Best product proofs of the original stand in for the honest ones.
  ProductSearchConfig config;
  config.restarts = o.restarts;
  config.seed = o.seed;
  const auto best = seesaw(acceptance_operator(v), proof_slot_dims(v), config);
  ProofTuple original;
  for (const auto& p : best.proofs) original.push_back(PureState(RegisterLayout({{"P", v.proof_qubits()}}), p.amplitudes()));
  const double p = accept_probability(v, original);
  const double honest = accept_probability(reduced, reduced_honest_proofs(original, k / 3, k % 3));
  const bool yes_side = p >= 1.0 - o.epsilon - 1e-12;
  Json details = {{"original_honest", p}, {"constructed_honest", honest}, {"completeness_hypothesis", yes_side},
                  {"stage", to_json(stage)}};
  if (k == 3) report.check_close("constructed_formula", honest, 0.5 + p / 2.0, 1e-12);
  report.check_true("honest_ge_1_minus_eps_over_2", !yes_side || honest >= 1.0 - stage.epsilon - 1e-10);

  if (o.certify) {
    const double lambda = max_eigenvalue(acceptance_operator(v).matrix());
    const bool no_side = lambda <= 1.0 - o.delta + 1e-12;
    const auto cert = certify_soundness(reduced, proof_slot_dims(reduced), 1.0 - stage.delta, config, samples);
    details["soundness_hypothesis"] = no_side;
    details["certificate"] = to_json(cert);
    report.check_true("certificate_le_1_minus_delta_over_20", !no_side || cert.value() <= 1.0 - stage.delta + 1e-12);
  }
  report.details() = std::move(details);
  if (!o.emit.empty()) write_json(o.emit, to_json(reduced));
  return report;
}

ExperimentReport reduce_chain_cmd(const Options& o) {
  ExperimentReport report("reduce-chain", "amplify, then repeat the (3k + r) to (2k + r) stage down to two proofs",
                          o.seed);
  const auto loaded = input_verifier(o);
  const Verifier v = loaded ? *loaded : toy_yes_verifier();
  const SystemParams params{static_cast<int>(v.proof_count()), o.completeness, o.soundness, o.gap_q};
  report.config() = {{"in", o.in.empty() ? "toy-yes" : o.in}, {"completeness", o.completeness},
                     {"soundness", o.soundness}, {"gap_q", o.gap_q},
                     {"target_p", o.target_p}, {"materialize", !o.no_materialize}};
  const auto chain = reduce_chain(v, params, o.gap_q, o.target_p, !o.no_materialize);
  Json stages = Json::array();
  for (std::size_t i = 0; i < chain.stages.size(); ++i) {
    const auto& s = chain.stages[i];
    stages.push_back(to_json(s));
    const std::string prefix = "stage" + std::to_string(i) + ".";
    report.check_true(prefix + "delta_gt_10_eps", s.input.delta > 10.0 * s.input.epsilon);
    if (s.constructed) {
      report.check_close(prefix + "constructed_proofs", static_cast<double>(s.constructed->proof_count()),
                         s.output.k, 0.0);
    }
  }
  report.details() = {{"amplified", to_json(chain.amplification)}, {"stages", stages}, {"q_final", chain.q_final}};
  report.check_at_least("amplified_honest", amplified_accept_honest(o.completeness, chain.amplification),
                        chain.amplification.completeness);
  report.check_close("final_proofs", chain.stages.empty() ? static_cast<double>(v.proof_count())
                                                         : chain.stages.back().output.k,
                     2.0, 0.0);
  if (!o.emit.empty() && chain.final_verifier) write_json(o.emit, to_json(*chain.final_verifier));
  return report;
}

ExperimentReport concat_cmd(const Options& o) {
  ExperimentReport report("concat", "k proofs read from one register keep the same acceptance operator", o.seed);
  const auto loaded = input_verifier(o);
  const Verifier v = loaded ? *loaded : random_verifier(1, or_default(o.k, 2), or_default(o.qubits, 1), o.seed);
  report.config() = {{"in", o.in.empty() ? "random" : o.in}, {"k", v.proof_count()}, {"qubits", v.proof_qubits()}};
  const Verifier joined = concat_proofs(v);
  report.check_at_most("operator_difference",
                       max_abs_diff(acceptance_operator(v).matrix(), acceptance_operator(joined).matrix()), 1e-14);
  if (!o.emit.empty()) write_json(o.emit, to_json(joined));
  return report;
}

ExperimentReport nqp_cmd(const Options& o) {
  const auto loaded = input_verifier(o);
  if (!loaded) {
    auto report = acceptance::perfect_soundness(o.seed, or_default(o.trials, 50));
    return report;
  }
  ExperimentReport report("nqp-sim", "proof-free Hadamard-copy simulation accepts with tr(M) / 2^q", o.seed);
  report.config() = {{"in", o.in}};
  const Verifier joined = loaded->proof_count() == 1 ? *loaded : concat_proofs(*loaded);
  const auto m = acceptance_operator(joined);
  const auto nqp = nqp_simulation(joined);
  report.details() = {{"acceptance", nqp.acceptance}, {"zero", nqp.zero}};
  report.check_close("trace_formula", nqp.acceptance,
                     m.matrix().trace().real() / static_cast<double>(m.dimension()), 1e-12);
  report.check_true("zero_verdict_matches_lambda_max", nqp.zero == (max_eigenvalue(m.matrix()) <= 1e-12));
  return report;
}

ExperimentReport optimize_cmd(const Options& o) {
  ExperimentReport report("optimize", "see-saw over product proofs against the entangled optimum", o.seed);
  const auto loaded = input_verifier(o);
  const Verifier v = loaded ? *loaded : random_verifier(1, or_default(o.k, 2), or_default(o.qubits, 1), o.seed);
  ProductSearchConfig config;
  config.restarts = o.restarts;
  config.seed = o.seed;
  const double threshold = o.threshold >= 0.0 ? o.threshold : 1.0;
  report.config() = {{"in", o.in.empty() ? "random" : o.in}, {"restarts", o.restarts},
                     {"samples", o.samples}, {"threshold", threshold}};
  const auto m = acceptance_operator(v);
  const auto result = seesaw(m, proof_slot_dims(v), config);
  double drop = 0.0;
  for (const auto& trace : result.all_traces) {
    for (std::size_t j = 1; j < trace.size(); ++j) drop = std::max(drop, trace[j - 1] - trace[j]);
  }
  const auto cert = certify_soundness(v, proof_slot_dims(v), threshold, config, o.samples);
  report.details() = {{"certificate", to_json(cert)}, {"seesaw_value", result.value}};
  report.check_at_most("max_trace_drop", drop, 1e-12);
  report.check_at_most("seesaw_le_lambda_max", result.value, max_eigenvalue(m.matrix()), 1e-9);
  if (o.certify) report.check_at_most("certificate_value", cert.value(), threshold, 1e-12);
  return report;
}

ExperimentReport indist_cmd(const Options& o) {
  const int d = o.dim;
  const int trials = or_default(o.trials, 100);
  ExperimentReport report("indist", "product and generalized-Bell mixtures coincide; floor 1/sqrt(d)", o.seed);
  report.config() = {{"dim", d}, {"trials", trials}};
  const auto mix0 = product_basis_mixture(d);
  const auto mix1 = bell_mixture(d);
  const ComplexMatrix id = ComplexMatrix::Identity(d * d, d * d) / static_cast<double>(d * d);
  report.check_at_most("product_mixture", max_abs_diff(mix0.matrix(), id), 1e-12);
  report.check_at_most("bell_mixture", max_abs_diff(mix1.matrix(), id), 1e-12);
  report.check_at_most("gram_identity", max_abs_diff(bell_gram(d), ComplexMatrix::Identity(d * d, d * d)), 1e-12);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto pair = povm_error_pair(random_binary_povm(mix0.layout(), derive_seed(o.seed, t)), mix0, mix1);
    worst = std::max(worst, std::abs(pair.p01 + pair.p10 - 1.0));
  }
  report.check_at_most("povm_error_sum", worst, 1e-10);
  const auto floor = fidelity_floor_check(d, trials, derive_seed(o.seed, 1u << 20));
  report.check_at_most("entangled_fidelity_deviation", floor.max_entangled_deviation, 1e-9);
  report.check_at_least("random_fidelity_floor", floor.min_random_fidelity, floor.floor, 1e-9);
  return report;
}

ExperimentReport all_cmd(const Options& o) {
  ExperimentReport report("all", "full acceptance suite", o.seed);
  Json summary = Json::array();
  for (const auto& c : acceptance::criteria()) {
    const auto r = c.run(o.seed);
    summary.push_back({{"criterion", c.number}, {"name", c.name}, {"pass", r.pass()}});
    report.merge(r, "c" + std::to_string(c.number) + ".");
  }
  report.details() = {{"criteria", summary}};
  return report;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qma-forge: multi-proof verifier constructions and checks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--out", o.out, "Write the report here instead of stdout");
    return sub;
  };
  auto verifier_in = [&](CLI::App* sub) {
    sub->add_option("--in", o.in, "Verifier JSON");
    sub->add_option("--emit", o.emit, "Write the constructed verifier JSON here");
  };

  auto* swap = common(app.add_subcommand("swap-test", "Controlled-swap circuit against 1/2 + tr(rho sigma)/2"));
  swap->add_option("--qubits", o.qubits, "Qubits per state")->check(CLI::Range(1, 5));
  swap->add_option("--trials", o.trials)->check(CLI::PositiveNumber);
  swap->add_option("--tolerance", o.tolerance)->check(CLI::PositiveNumber);

  auto* amp = common(app.add_subcommand("amplify", "Parallel repetition parameters"));
  amp->add_option("--completeness", o.completeness);
  amp->add_option("--soundness", o.soundness);
  amp->add_option("--gap-q", o.gap_q)->check(CLI::PositiveNumber);
  amp->add_option("--target-p", o.target_p)->check(CLI::Range(1, 1000));

  auto* red = common(app.add_subcommand("reduce", "One proof-count reduction stage"));
  verifier_in(red);
  red->add_option("--toy", o.toy, "Built-in instance when --in is absent: yes or no");
  red->add_option("--k", o.k)->check(CLI::Range(3, 64));
  red->add_option("--epsilon", o.epsilon);
  red->add_option("--delta", o.delta);
  red->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
  red->add_option("--samples", o.samples);
  red->add_flag("--certify", o.certify, "Certify soundness of the constructed verifier");

  auto* chain = common(app.add_subcommand("reduce-chain", "Amplification followed by repeated reductions"));
  verifier_in(chain);
  chain->add_option("--completeness", o.completeness);
  chain->add_option("--soundness", o.soundness);
  chain->add_option("--gap-q", o.gap_q)->check(CLI::PositiveNumber);
  chain->add_option("--target-p", o.target_p)->check(CLI::Range(1, 1000));
  chain->add_flag("--no-materialize", o.no_materialize, "Bound arithmetic only");

  auto* cat = common(app.add_subcommand("concat", "Merge all proof registers into one"));
  verifier_in(cat);
  cat->add_option("--k", o.k)->check(CLI::Range(1, 8));
  cat->add_option("--qubits", o.qubits)->check(CLI::Range(1, 4));

  auto* nqp = common(app.add_subcommand("nqp-sim", "Proof-free simulation of a one-proof verifier"));
  nqp->add_option("--in", o.in, "Verifier JSON");
  nqp->add_option("--trials", o.trials, "Random verifiers when --in is absent")->check(CLI::PositiveNumber);

  auto* opt = common(app.add_subcommand("optimize", "See-saw product search and soundness certificate"));
  opt->add_option("--in", o.in, "Verifier JSON");
  opt->add_option("--k", o.k)->check(CLI::Range(2, 6));
  opt->add_option("--qubits", o.qubits)->check(CLI::Range(1, 3));
  opt->add_option("--restarts", o.restarts)->check(CLI::PositiveNumber);
  opt->add_option("--samples", o.samples);
  opt->add_option("--tolerance", o.threshold, "Certificate threshold")->check(CLI::Range(0.0, 1.0));
  opt->add_flag("--certify", o.certify, "Fail unless the certificate is at most the threshold");

  auto* ind = common(app.add_subcommand("indist", "Product versus generalized-Bell mixtures"));
  ind->add_option("--dim", o.dim)->check(CLI::IsMember({2, 4, 8, 16}));
  ind->add_option("--trials", o.trials)->check(CLI::PositiveNumber);

  auto* all = common(app.add_subcommand("all", "Run the full acceptance suite"));

  std::vector<const char*> argv{"qma-forge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  std::optional<ExperimentReport> report;
  try {
    if (swap->parsed()) report = swap_test(o);
    if (amp->parsed()) report = amplify_cmd(o);
    if (red->parsed()) report = reduce_cmd(o);
    if (chain->parsed()) report = reduce_chain_cmd(o);
    if (cat->parsed()) report = concat_cmd(o);
    if (nqp->parsed()) report = nqp_cmd(o);
    if (opt->parsed()) report = optimize_cmd(o);
    if (ind->parsed()) report = indist_cmd(o);
    if (all->parsed()) report = all_cmd(o);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  report->set_wall_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  const std::string text = report->to_json().dump(2);
  if (o.out.empty()) {
    out << text << "\n";
  } else {
    std::ofstream file(o.out);
    if (!file) {
      err << "error: cannot write '" << o.out << "'\n";
      return 2;
    }
    file << text << "\n";
  }
  return report->pass() ? 0 : 1;
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}

}  // namespace qmaforge::cli
