#include "qmaforge/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "qmaforge/errors.hpp"

namespace qmaforge {

namespace {

constexpr double kZeroAcceptance = 1e-12;

std::string work_name(const std::string& name) { return "V." + name; }

// Register and in-register qubit index of the verifier's output qubit.
std::pair<std::string, int> output_location(const Verifier& v) {
  const int n = v.layout().total_qubits();
  const int position = n - 1 - v.output_bit();
  int offset = 0;
  for (const auto& r : v.layout().registers()) {
    if (position < offset + r.qubits) return {r.name, position - offset};
    offset += r.qubits;
  }
  throw LayoutError("output qubit not found in layout");
}

std::size_t bit_of(const RegisterLayout& layout, const std::string& name, int qubit = 0) {
  return std::size_t{1} << (layout.total_qubits() - 1 - layout.qubit_offset(name) - qubit);
}

std::size_t mask_of(const RegisterLayout& layout, std::span<const std::string> names) {
  return QubitMap(layout, names).mask();
}

// Selector qubit first, prepared by a Hadamard, choosing `when0` or `when1`:
// (diag(when0, when1)) (H (x) I).
ComplexMatrix branch_on_selector(const ComplexMatrix& when0, const ComplexMatrix& when1) {
  const auto h = when0.rows();
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexMatrix out(2 * h, 2 * h);
  out.topLeftCorner(h, h) = s * when0;
  out.topRightCorner(h, h) = s * when0;
  out.bottomLeftCorner(h, h) = s * when1;
  out.bottomRightCorner(h, h) = -s * when1;
  return out;
}

// Flips the bit `target` on every basis state satisfying `pred`. `pred` must
// not read `target`.
template <typename Pred>
ComplexMatrix mark(ComplexMatrix u, std::size_t target, Pred pred) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if ((idx & target) == 0 && pred(idx)) u.row(i).swap(u.row(static_cast<Eigen::Index>(idx | target)));
  }
  return u;
}

// Separability branch on `layout`: H_B, swap `left` and `right` blocks when B
// is 1, H_B.
ComplexMatrix swap_test_branch(const RegisterLayout& layout, const std::vector<std::string>& left,
                               const std::vector<std::string>& right) {
  int block_qubits = 0;
  for (const auto& n : left) block_qubits += layout.at(n).qubits;
  std::vector<std::string> targets{"B"};
  targets.insert(targets.end(), left.begin(), left.end());
  targets.insert(targets.end(), right.begin(), right.end());
  CircuitBuilder sep(layout);
  sep.apply(gates::hadamard(), {"B"});
  sep.apply(controlled(gates::swap(block_qubits)), targets);
  sep.apply(gates::hadamard(), {"B"});
  return std::move(sep).take();
}

std::vector<Register> work_registers_of(const Verifier& v) {
  std::vector<Register> out;
  for (const auto& r : v.layout().registers()) {
    if (std::find(v.proof_registers().begin(), v.proof_registers().end(), r.name) ==
        v.proof_registers().end()) {
      out.push_back({work_name(r.name), r.qubits});
    }
  }
  return out;
}

}  // namespace

Verifier swap_test_verifier(int n_qubits) {
  if (n_qubits < 1) throw ShapeError("swap_test_verifier: registers need at least one qubit");
  check_budget(std::size_t{1} << (2 * n_qubits + 1), std::size_t{1} << (2 * n_qubits + 1),
               "swap_test_verifier");
  RegisterLayout layout({{"B", 1}, {"R1", n_qubits}, {"R2", n_qubits}});
  ComplexMatrix u = swap_test_branch(layout, {"R1"}, {"R2"});
  apply_left(u, gates::pauli_x(), layout, std::vector<std::string>{"B"});
  return Verifier(std::move(u), std::move(layout), {"R1", "R2"}, 0);
}

double swap_test_analytic(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.layout() != sigma.layout()) throw LayoutError("swap_test_analytic: layouts differ");
  return 0.5 + 0.5 * (rho.matrix() * sigma.matrix()).trace().real();
}

double accept_probability_mixed(const Verifier& v, const std::vector<DensityOperator>& proofs) {
  if (proofs.size() != v.proof_count()) throw CompatibilityError("accept_probability_mixed: proof count");
  ComplexMatrix joint = ComplexMatrix::Identity(1, 1);
  for (const auto& p : proofs) {
    if (p.layout().total_qubits() != v.proof_qubits()) {
      throw CompatibilityError("accept_probability_mixed: proof size");
    }
    joint = tensor(joint, p.matrix());
  }
  const QubitMap map(v.layout(), v.proof_registers());
  const auto dim = static_cast<Eigen::Index>(v.layout().dimension());
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < joint.rows(); ++a) {
    for (Eigen::Index b = 0; b < joint.cols(); ++b) {
      rho(map.scatter(a), map.scatter(b)) = joint(a, b);
    }
  }
  const ComplexMatrix out = v.circuit() * rho * v.circuit().adjoint();
  const std::size_t bit = std::size_t{1} << v.output_bit();
  double p = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (static_cast<std::size_t>(i) & bit) p += out(i, i).real();
  }
  return std::clamp(p, 0.0, 1.0);
}

AmplifiedParams amplify(const SystemParams& params, int gap_q, int target_p) {
  const double c = params.completeness;
  const double s = params.soundness;
  if (gap_q < 1 || target_p < 1) throw HypothesisError("amplify: q and p must be positive");
  if (!(0.0 <= s && s <= c && c <= 1.0)) throw HypothesisError("amplify: need 0 <= s <= c <= 1");
  if (c - s < 1.0 / gap_q - 1e-12) throw HypothesisError("amplify: gap c - s is below 1/q");
  AmplifiedParams out;
  out.n_attempts = 2L * target_p * gap_q * gap_q;
  const double cut = static_cast<double>(out.n_attempts) * (c + s) / 2.0;
  const double nearest = std::round(cut);
  out.threshold = std::abs(cut - nearest) < 1e-9 ? static_cast<long>(nearest) : static_cast<long>(std::ceil(cut));
  out.completeness = 1.0 - std::ldexp(1.0, -target_p);
  out.soundness = c + s > 0.0 ? 2.0 * s / (c + s) : 0.0;
  out.soundness_relaxed = 1.0 - (c - s) / 2.0;
  out.gap_floor = 1.0 - 1.0 / (2.0 * gap_q);
  return out;
}

double amplified_accept_honest(double per_attempt_p, const AmplifiedParams& amp) {
  if (!(per_attempt_p >= 0.0 && per_attempt_p <= 1.0)) {
    throw ContractError("amplified_accept_honest: probability outside [0, 1]");
  }
  const long n = amp.n_attempts;
  const long t = std::max(amp.threshold, 0L);
  if (t > n) return 0.0;
  if (t == 0) return 1.0;
  if (per_attempt_p == 0.0) return 0.0;
  if (per_attempt_p == 1.0) return 1.0;
  const double lp = std::log(per_attempt_p);
  const double lq = std::log1p(-per_attempt_p);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n - t + 1));
  for (long j = t; j <= n; ++j) {
    const double log_binom = std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(j) + 1) -
                             std::lgamma(static_cast<double>(n - j) + 1);
    terms.push_back(log_binom + j * lp + (n - j) * lq);
  }
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double x : terms) sum += std::exp(x - top);
  return std::clamp(std::exp(top + std::log(sum)), 0.0, 1.0);
}

Verifier parallel_repetition(const Verifier& v, int attempts, int threshold) {
  if (attempts < 1) throw ShapeError("parallel_repetition: need at least one attempt");
  std::vector<Register> regs{{"O", 1}};
  std::vector<std::string> proofs;
  std::vector<std::vector<std::string>> blocks;
  for (int a = 0; a < attempts; ++a) {
    const std::string prefix = "a" + std::to_string(a) + ".";
    std::vector<std::string> block;
    for (const auto& r : v.layout().registers()) {
      regs.push_back({prefix + r.name, r.qubits});
      block.push_back(prefix + r.name);
    }
    for (const auto& p : v.proof_registers()) proofs.push_back(prefix + p);
    blocks.push_back(std::move(block));
  }
  RegisterLayout layout(std::move(regs));
  CircuitBuilder builder(layout);
  for (const auto& block : blocks) builder.apply(v.circuit(), block);

  const int nv = v.layout().total_qubits();
  std::vector<std::size_t> outputs;
  for (int a = 0; a < attempts; ++a) {
    outputs.push_back(std::size_t{1} << ((attempts - 1 - a) * nv + v.output_bit()));
  }
  const std::size_t obit = bit_of(layout, "O");
  ComplexMatrix u = mark(std::move(builder).take(), obit, [&](std::size_t i) {
    int count = 0;
    for (auto b : outputs) count += (i & b) ? 1 : 0;
    return count >= threshold;
  });
  return Verifier(std::move(u), std::move(layout), std::move(proofs), 0);
}

StageParams reduce_stage_params(const StageParams& in) {
  if (in.k < 3) throw ShapeError("reduction stage needs at least three proofs");
  if (!(in.delta > 10.0 * in.epsilon)) {
    throw HypothesisError("reduction stage requires delta > 10 epsilon (delta = " + std::to_string(in.delta) +
                          ", epsilon = " + std::to_string(in.epsilon) + ")");
  }
  const int a = in.k / 3;
  const int r = in.k % 3;
  return {2 * a + r, in.epsilon / 2.0, in.delta / 20.0};
}

Verifier reduce_3_to_2(const Verifier& v) {
  if (v.proof_count() != 3) throw ShapeError("reduce_3_to_2: verifier must take exactly three proofs");
  const int q = v.proof_qubits();
  const auto work = work_registers_of(v);

  std::vector<Register> rest_regs{{"O", 1}};
  rest_regs.insert(rest_regs.end(), work.begin(), work.end());
  rest_regs.push_back({"B", 1});
  for (const char* name : {"R1", "S1", "R2", "S2"}) rest_regs.push_back({name, q});
  const RegisterLayout rest(rest_regs);
  std::vector<Register> fine_regs{{"T", 1}};
  fine_regs.insert(fine_regs.end(), rest_regs.begin(), rest_regs.end());
  const RegisterLayout fine(fine_regs);
  const std::size_t dim = fine.dimension();
  check_budget(dim, dim, "reduce_3_to_2");

  const ComplexMatrix separability = swap_test_branch(rest, {"S1"}, {"S2"});

  // v runs on (V, R1, R2, S1): its k-th proof register is played by the k-th
  // entry below.
  const std::string roles[3] = {"R1", "R2", "S1"};
  std::vector<std::string> targets;
  for (const auto& name : v.layout().names()) {
    const auto it = std::find(v.proof_registers().begin(), v.proof_registers().end(), name);
    targets.push_back(it == v.proof_registers().end() ? work_name(name)
                                                      : roles[it - v.proof_registers().begin()]);
  }
  const ComplexMatrix consistency = embed(v.circuit(), rest, targets);

  const auto [out_reg, out_qubit] = output_location(v);
  const std::size_t tbit = bit_of(fine, "T");
  const std::size_t bbit = bit_of(fine, "B");
  const std::size_t vbit = bit_of(fine, work_name(out_reg), out_qubit);
  ComplexMatrix u = mark(branch_on_selector(separability, consistency), bit_of(fine, "O"), [&](std::size_t i) {
    return (i & tbit) ? (i & vbit) != 0 : (i & bbit) == 0;
  });

  std::vector<Register> final_regs(fine_regs.begin(), fine_regs.begin() + 3 + static_cast<long>(work.size()));
  final_regs.push_back({"P1", 2 * q});
  final_regs.push_back({"P2", 2 * q});
  return Verifier(std::move(u), RegisterLayout(std::move(final_regs)), {"P1", "P2"}, 1);
}

Verifier reduce_3kr_to_2kr(const Verifier& v, int k, int r) {
  if (k < 1 || r < 0 || r > 2) throw ShapeError("reduce_3kr_to_2kr: need k >= 1 and r in {0, 1, 2}");
  if (v.proof_count() != static_cast<std::size_t>(3 * k + r)) {
    throw ShapeError("reduce_3kr_to_2kr: verifier takes " + std::to_string(v.proof_count()) +
                     " proofs, expected 3k + r = " + std::to_string(3 * k + r));
  }
  const int q = v.proof_qubits();
  const auto work = work_registers_of(v);
  auto reg = [](int group, int j, char kind) {
    return std::string(1, kind) + std::to_string(group) + "." + std::to_string(j);
  };

  std::vector<Register> rest_regs{{"O", 1}};
  rest_regs.insert(rest_regs.end(), work.begin(), work.end());
  rest_regs.push_back({"B", 1});
  const int group_size[3] = {k, k, r};
  for (int g = 1; g <= 3; ++g) {
    for (int j = 1; j <= group_size[g - 1]; ++j) {
      rest_regs.push_back({reg(g, j, 'R'), q});
      rest_regs.push_back({reg(g, j, 'S'), q});
    }
  }
  const RegisterLayout rest(rest_regs);
  std::vector<Register> fine_regs{{"T", 1}};
  fine_regs.insert(fine_regs.end(), rest_regs.begin(), rest_regs.end());
  const RegisterLayout fine(fine_regs);
  const std::size_t dim = fine.dimension();
  check_budget(dim, dim, "reduce_3kr_to_2kr");

  std::vector<std::string> s1;
  std::vector<std::string> s2;
  std::vector<std::string> s3;
  for (int j = 1; j <= k; ++j) {
    s1.push_back(reg(1, j, 'S'));
    s2.push_back(reg(2, j, 'S'));
  }
  for (int j = 1; j <= r; ++j) s3.push_back(reg(3, j, 'S'));
  const ComplexMatrix separability = swap_test_branch(rest, s1, s2);

  // v consumes its proofs in the order (R1.*, R2.*, S1.*, R3.*). Build
  // v (x) I in that application order, then conjugate into storage order.
  std::vector<std::string> roles;
  for (int j = 1; j <= k; ++j) roles.push_back(reg(1, j, 'R'));
  for (int j = 1; j <= k; ++j) roles.push_back(reg(2, j, 'R'));
  for (int j = 1; j <= k; ++j) roles.push_back(reg(1, j, 'S'));
  for (int j = 1; j <= r; ++j) roles.push_back(reg(3, j, 'R'));
  std::vector<std::string> application;
  for (const auto& name : v.layout().names()) {
    const auto it = std::find(v.proof_registers().begin(), v.proof_registers().end(), name);
    application.push_back(it == v.proof_registers().end() ? work_name(name)
                                                          : roles[it - v.proof_registers().begin()]);
  }
  const auto untouched = rest.without(application);
  const auto untouched_names = untouched.names();
  application.insert(application.end(), untouched_names.begin(), untouched_names.end());
  const auto rest_names = rest.names();
  const ComplexMatrix consistency =
      permute_registers(tensor(v.circuit(), gates::identity(untouched.total_qubits())), rest.select(application),
                        rest_names);

  const auto [out_reg, out_qubit] = output_location(v);
  const std::size_t tbit = bit_of(fine, "T");
  const std::size_t bbit = bit_of(fine, "B");
  const std::size_t vbit = bit_of(fine, work_name(out_reg), out_qubit);
  const std::size_t ancilla = s3.empty() ? 0 : mask_of(fine, s3);
  ComplexMatrix u = mark(branch_on_selector(separability, consistency), bit_of(fine, "O"), [&](std::size_t i) {
    if (i & ancilla) return false;
    return (i & tbit) ? (i & vbit) != 0 : (i & bbit) == 0;
  });

  std::vector<Register> final_regs(fine_regs.begin(), fine_regs.begin() + 3 + static_cast<long>(work.size()));
  std::vector<std::string> proofs;
  for (int g = 1; g <= 3; ++g) {
    for (int j = 1; j <= group_size[g - 1]; ++j) {
      const std::string name = "P" + std::to_string(g) + "." + std::to_string(j);
      final_regs.push_back({name, 2 * q});
      proofs.push_back(name);
    }
  }
  return Verifier(std::move(u), RegisterLayout(std::move(final_regs)), std::move(proofs), 1);
}

ProofTuple reduced_honest_proofs(const ProofTuple& original, int k, int r) {
  if (k < 1 || r < 0 || r > 2 || original.size() != static_cast<std::size_t>(3 * k + r)) {
    throw ShapeError("reduced_honest_proofs: expected 3k + r proofs");
  }
  const int q = original.front().layout().total_qubits();
  const RegisterLayout layout({{"proof", 2 * q}});
  auto pair = [&](const PureState& a, const ComplexVector& b) {
    return PureState::normalized(layout, tensor(a.amplitudes(), b));
  };
  ProofTuple out;
  for (int j = 0; j < k; ++j) out.push_back(pair(original[j], original[2 * k + j].amplitudes()));
  for (int j = 0; j < k; ++j) out.push_back(pair(original[k + j], original[2 * k + j].amplitudes()));
  ComplexVector zero = ComplexVector::Zero(Eigen::Index{1} << q);
  zero(0) = 1.0;
  for (int j = 0; j < r; ++j) out.push_back(pair(original[3 * k + j], zero));
  return out;
}

ChainResult reduce_chain(const Verifier& v, const SystemParams& params, int gap_q, int target_p,
                         bool materialize) {
  const int k = static_cast<int>(v.proof_count());
  if (k < 2) throw ShapeError("reduce_chain: verifier must take at least two proofs");
  if (params.k != 0 && params.k != k) throw ShapeError("reduce_chain: params.k does not match the verifier");
  ChainResult result;
  result.amplification = amplify(params, gap_q, target_p);
  StageParams current{k, 1.0 - result.amplification.completeness, 1.0 - result.amplification.soundness_relaxed};
  std::optional<Verifier> verifier;
  if (materialize) verifier = v;
  for (int stage = 0; current.k > 2; ++stage) {
    ReductionReport report{current, reduce_stage_params(current), std::nullopt};
    if (materialize) {
      try {
        verifier = reduce_3kr_to_2kr(*verifier, current.k / 3, current.k % 3);
      } catch (const SizeLimitError& e) {
        throw SizeLimitError("reduce_chain stage " + std::to_string(stage) + ": " + e.what());
      }
      report.constructed = verifier;
    }
    current = report.output;
    result.stages.push_back(std::move(report));
  }
  result.final_verifier = std::move(verifier);
  result.q_final = static_cast<long>(std::ceil(1.0 / current.delta - 1e-9));
  return result;
}

Verifier concat_proofs(const Verifier& v) {
  if (v.proof_count() == 0) throw ShapeError("concat_proofs: verifier takes no proofs");
  std::vector<std::string> order = v.work_registers();
  order.insert(order.end(), v.proof_registers().begin(), v.proof_registers().end());
  ComplexMatrix u = permute_registers(v.circuit(), v.layout(), order);
  std::vector<Register> regs;
  for (const auto& name : v.work_registers()) regs.push_back(v.layout().at(name));
  regs.push_back({"M", v.proof_qubits() * static_cast<int>(v.proof_count())});
  return Verifier(std::move(u), RegisterLayout(std::move(regs)), {"M"}, v.output_qubit());
}

Verifier nqp_circuit(const Verifier& v) {
  if (v.proof_count() != 1) throw ShapeError("nqp_circuit: verifier must take exactly one proof");
  const std::string proof = v.proof_registers().front();
  const int q = v.proof_qubits();
  RegisterLayout layout = v.layout().concat(RegisterLayout({{"nqp.copy", q}}));
  CircuitBuilder builder(layout);
  builder.apply(gates::hadamard_all(q), {proof});
  const QubitMap src(layout, std::vector<std::string>{proof});
  const QubitMap dst(layout, std::vector<std::string>{"nqp.copy"});
  builder.apply_classical([&](std::size_t i) { return i ^ dst.scatter(src.gather(i)); });
  builder.apply(v.circuit(), v.layout().names());
  // Appending the copy register shifts every original bit up by q.
  const int output = layout.total_qubits() - 1 - (v.output_bit() + q);
  return Verifier(std::move(builder).take(), std::move(layout), {}, output);
}

NqpResult nqp_simulation(const Verifier& v) {
  const Verifier circuit = nqp_circuit(v);
  const double p = accept_probability(circuit, {});
  return {p, p <= kZeroAcceptance};
}

}  // namespace qmaforge
