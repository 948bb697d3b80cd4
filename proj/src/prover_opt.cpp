#include "qmaforge/prover_opt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qmaforge/errors.hpp"
#include "qmaforge/parallel.hpp"
#include "qmaforge/random.hpp"

namespace qmaforge {

namespace {

constexpr double kDegeneracyTol = 1e-12;
constexpr double kCertificateSlack = 1e-10;
constexpr std::size_t kBruteForceChunk = 4096;

void check_slot_dims(std::size_t dim, const std::vector<std::size_t>& slot_dims) {
  if (slot_dims.empty()) throw ShapeError("at least one slot is required");
  std::size_t product = 1;
  for (auto d : slot_dims) {
    if (d < 2 || !std::has_single_bit(d)) throw ShapeError("slot dimensions must be powers of two >= 2");
    product *= d;
  }
  if (product != dim) throw ShapeError("slot dimensions do not multiply to the operator dimension");
}

ComplexVector joint_of(const std::vector<ComplexVector>& slots) {
  ComplexVector out = ComplexVector::Ones(1);
  for (const auto& s : slots) out = tensor(out, s);
  return out;
}

double quadratic_form(const ComplexMatrix& m, const ComplexVector& x) {
  return x.dot(m * x).real();
}

ComplexMatrix effective(const ComplexMatrix& m, const std::vector<ComplexVector>& slots, std::size_t hold) {
  std::vector<ComplexVector> left(slots.begin(), slots.begin() + static_cast<long>(hold));
  std::vector<ComplexVector> right(slots.begin() + static_cast<long>(hold) + 1, slots.end());
  const ComplexVector wl = joint_of(left);
  const ComplexVector wr = joint_of(right);
  const Eigen::Index d = slots[hold].size();
  const Eigen::Index r_dim = wr.size();
  ComplexMatrix x = ComplexMatrix::Zero(m.rows(), d);
  for (Eigen::Index l = 0; l < wl.size(); ++l) {
    for (Eigen::Index b = 0; b < d; ++b) {
      for (Eigen::Index r = 0; r < r_dim; ++r) x((l * d + b) * r_dim + r, b) = wl(l) * wr(r);
    }
  }
  ComplexMatrix out = x.adjoint() * m * x;
  return (out + out.adjoint()) / 2.0;
}

// Top eigenvector. Within a degenerate top eigenspace, the solver's basis
// vectors are phase-normalized (first nonzero entry real positive) and the one
// with the lexicographically largest real parts wins.
ComplexVector top_eigenvector(const ComplexMatrix& h, double& value) {
  const auto e = eig_hermitian(h);
  value = e.values(0);
  auto normalized = [&](Eigen::Index col) {
    ComplexVector v = e.vectors.col(col);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double mag = std::abs(v(i));
      if (mag > kDegeneracyTol) {
        v *= std::conj(v(i)) / mag;
        break;
      }
    }
    return v;
  };
  ComplexVector best = normalized(0);
  const double scale = std::max(1.0, std::abs(value));
  for (Eigen::Index c = 1; c < e.values.size() && e.values(c) >= value - kDegeneracyTol * scale; ++c) {
    ComplexVector cand = normalized(c);
    for (Eigen::Index i = 0; i < cand.size(); ++i) {
      const double diff = cand(i).real() - best(i).real();
      if (diff > kDegeneracyTol) {
        best = cand;
        break;
      }
      if (diff < -kDegeneracyTol) break;
    }
  }
  return best;
}

struct RestartOutcome {
  double value = 0.0;
  std::vector<ComplexVector> slots;
  std::vector<double> trace;
};

RestartOutcome run_restart(const ComplexMatrix& m, std::vector<ComplexVector> slots,
                           const ProductSearchConfig& config) {
  RestartOutcome out;
  out.trace.push_back(quadratic_form(m, joint_of(slots)));
  double previous = out.trace.back();
  for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      double value = 0.0;
      slots[i] = top_eigenvector(effective(m, slots, i), value);
      out.trace.push_back(value);
    }
    const double current = out.trace.back();
    if (std::abs(current - previous) < config.convergence_tol) break;
    previous = current;
  }
  out.value = quadratic_form(m, joint_of(slots));
  out.slots = std::move(slots);
  return out;
}

std::vector<ComplexVector> marginal_start(const ComplexMatrix& m, const std::vector<std::size_t>& slot_dims) {
  std::vector<Register> regs;
  for (std::size_t i = 0; i < slot_dims.size(); ++i) {
    regs.push_back({"s" + std::to_string(i), std::countr_zero(slot_dims[i])});
  }
  const RegisterLayout layout(regs);
  const double tr = m.trace().real();
  const ComplexMatrix normalized = tr > 0.0 ? ComplexMatrix(m / tr) : m;
  std::vector<ComplexVector> slots;
  for (std::size_t i = 0; i < slot_dims.size(); ++i) {
    std::vector<std::string> traced;
    for (std::size_t j = 0; j < slot_dims.size(); ++j) {
      if (j != i) traced.push_back(regs[j].name);
    }
    double unused = 0.0;
    slots.push_back(top_eigenvector(partial_trace(normalized, layout, traced), unused));
  }
  return slots;
}

std::vector<ComplexVector> random_start(const std::vector<std::size_t>& slot_dims, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<ComplexVector> slots;
  for (auto d : slot_dims) {
    ComplexVector v = gaussian_vector(rng, static_cast<Eigen::Index>(d));
    slots.push_back(v / v.norm());
  }
  return slots;
}

ProofTuple to_proofs(const std::vector<ComplexVector>& slots) {
  ProofTuple out;
  for (const auto& s : slots) {
    const auto q = std::countr_zero(static_cast<std::size_t>(s.size()));
    out.push_back(PureState::normalized(RegisterLayout({{"slot", q}}), s));
  }
  return out;
}

}  // namespace

ComplexMatrix effective_operator(const AcceptanceOperator& m, const ProofTuple& proofs, std::size_t hold_out) {
  if (hold_out >= proofs.size()) throw IndexError("effective_operator: hold-out slot out of range");
  std::vector<std::size_t> dims;
  std::vector<ComplexVector> slots;
  for (const auto& p : proofs) {
    dims.push_back(p.dimension());
    slots.push_back(p.amplitudes());
  }
  check_slot_dims(m.dimension(), dims);
  return effective(m.matrix(), slots, hold_out);
}

SeesawResult seesaw(const AcceptanceOperator& m, const std::vector<std::size_t>& slot_dims,
                    const ProductSearchConfig& config) {
  check_slot_dims(m.dimension(), slot_dims);
  if (config.restarts < 1) throw ContractError("seesaw: restarts must be at least one");
  if (!(config.convergence_tol > 0.0)) throw ContractError("seesaw: convergence tolerance must be positive");

  const auto outcomes = parallel_map(static_cast<std::size_t>(config.restarts) + 1, [&](std::size_t r) {
    auto start = r == 0 ? marginal_start(m.matrix(), slot_dims) : random_start(slot_dims, config.seed + (r - 1));
    return run_restart(m.matrix(), std::move(start), config);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  SeesawResult out;
  out.value = outcomes[best].value;
  out.proofs = to_proofs(outcomes[best].slots);
  out.trace = outcomes[best].trace;
  for (const auto& o : outcomes) out.all_traces.push_back(o.trace);
  return out;
}

double brute_force_product(const AcceptanceOperator& m, const std::vector<std::size_t>& slot_dims,
                           std::size_t samples, std::uint64_t seed) {
  if (m.dimension() > kBruteForceMaxDim) {
    throw SizeLimitError("brute_force_product: joint dimension exceeds the oracle scale");
  }
  check_slot_dims(m.dimension(), slot_dims);
  const ComplexMatrix& mat = m.matrix();
  double best = mat.diagonal().real().maxCoeff();

  const std::size_t chunks = (samples + kBruteForceChunk - 1) / kBruteForceChunk;
  const auto maxima = parallel_map(chunks, [&](std::size_t c) {
    double local = -1.0;
    const std::size_t end = std::min(samples, (c + 1) * kBruteForceChunk);
    for (std::size_t j = c * kBruteForceChunk; j < end; ++j) {
      CounterRng rng(seed, j);
      ComplexVector x = ComplexVector::Ones(1);
      for (auto d : slot_dims) {
        ComplexVector v = gaussian_vector(rng, static_cast<Eigen::Index>(d));
        x = tensor(x, ComplexVector(v / v.norm()));
      }
      local = std::max(local, quadratic_form(mat, x));
    }
    return local;
  });
  for (double v : maxima) best = std::max(best, v);
  return best;
}

SoundnessCertificate certify_soundness(const Verifier& v, const std::vector<std::size_t>& slot_dims,
                                       double threshold, const ProductSearchConfig& config,
                                       std::size_t oracle_samples) {
  const auto m = acceptance_operator(v);
  SoundnessCertificate cert;
  cert.threshold = threshold;
  cert.restarts = config.restarts;
  cert.seed = config.seed;
  cert.entangled_upper_bound = std::max(0.0, max_eigenvalue(m.matrix()));
  cert.seesaw_value = seesaw(m, slot_dims, config).value;
  cert.product_lower_bound = cert.seesaw_value;
  if (oracle_samples > 0 && m.dimension() <= kBruteForceMaxDim) {
    cert.brute_force_value = brute_force_product(m, slot_dims, oracle_samples, config.seed);
    cert.product_lower_bound = std::max(cert.product_lower_bound, cert.brute_force_value);
  }
  cert.conclusive = cert.entangled_upper_bound <= threshold + kCertificateSlack;
  cert.bound_used = cert.conclusive ? "entangled_upper_bound" : "product_lower_bound";
  return cert;
}

std::vector<std::size_t> proof_slot_dims(const Verifier& v) {
  return std::vector<std::size_t>(v.proof_count(), std::size_t{1} << v.proof_qubits());
}

}  // namespace qmaforge
