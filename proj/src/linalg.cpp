#include "qmaforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qmaforge/errors.hpp"

namespace qmaforge {

RegisterLayout::RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
  std::set<std::string> seen;
  for (const auto& r : registers_) {
    if (r.qubits < 1) throw LayoutError("register '" + r.name + "' must have at least one qubit");
    if (!seen.insert(r.name).second) throw LayoutError("duplicate register name '" + r.name + "'");
    total_qubits_ += r.qubits;
  }
  if (total_qubits_ > 48) throw SizeLimitError("layout exceeds 48 qubits");
}

bool RegisterLayout::contains(const std::string& name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

const Register& RegisterLayout::at(const std::string& name) const {
  for (const auto& r : registers_) {
    if (r.name == name) return r;
  }
  throw LayoutError("unknown register '" + name + "'");
}

int RegisterLayout::qubit_offset(const std::string& name) const {
  int offset = 0;
  for (const auto& r : registers_) {
    if (r.name == name) return offset;
    offset += r.qubits;
  }
  throw LayoutError("unknown register '" + name + "'");
}

std::vector<std::string> RegisterLayout::names() const {
  std::vector<std::string> out;
  out.reserve(registers_.size());
  for (const auto& r : registers_) out.push_back(r.name);
  return out;
}

RegisterLayout RegisterLayout::select(std::span<const std::string> names) const {
  std::vector<Register> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(at(n));
  return RegisterLayout(std::move(out));
}

RegisterLayout RegisterLayout::without(std::span<const std::string> names) const {
  for (const auto& n : names) at(n);
  std::vector<Register> out;
  for (const auto& r : registers_) {
    if (std::find(names.begin(), names.end(), r.name) == names.end()) out.push_back(r);
  }
  return RegisterLayout(std::move(out));
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
  std::vector<Register> out = registers_;
  out.insert(out.end(), other.registers_.begin(), other.registers_.end());
  return RegisterLayout(std::move(out));
}

QubitMap::QubitMap(const RegisterLayout& layout, std::span<const std::string> names) {
  const int n = layout.total_qubits();
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) throw LayoutError("register '" + name + "' selected twice");
    const int offset = layout.qubit_offset(name);
    const int q = layout.at(name).qubits;
    for (int k = 0; k < q; ++k) {
      const int bit = n - 1 - offset - k;
      bits_.push_back(bit);
      mask_ |= std::size_t{1} << bit;
    }
  }
}

std::size_t QubitMap::gather(std::size_t full) const {
  std::size_t sub = 0;
  for (int b : bits_) sub = (sub << 1) | ((full >> b) & 1u);
  return sub;
}

std::size_t QubitMap::scatter(std::size_t sub) const {
  std::size_t full = 0;
  for (auto it = bits_.rbegin(); it != bits_.rend(); ++it) {
    full |= (sub & 1u) << *it;
    sub >>= 1;
  }
  return full;
}

void check_budget(std::size_t rows, std::size_t cols, const char* what) {
  if (rows != 0 && cols > kMaxAmplitudes / rows) {
    throw SizeLimitError(std::string(what) + ": " + std::to_string(rows) + "x" +
                         std::to_string(cols) + " exceeds the dense amplitude budget");
  }
}

void check_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw ContractError(std::string(what) + ": non-finite amplitude");
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix gram = m.adjoint() * m;
  return max_abs(gram - ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_budget(static_cast<std::size_t>(a.rows() * b.rows()),
               static_cast<std::size_t>(a.cols() * b.cols()), "tensor");
  check_finite(a, "tensor");
  check_finite(b, "tensor");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  check_budget(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(b.size()), "tensor");
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const RegisterLayout& layout,
                            std::span<const std::string> traced) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  if (rho.rows() != dim || rho.cols() != dim) {
    throw LayoutError("partial_trace: matrix dimension does not match layout");
  }
  const RegisterLayout kept_layout = layout.without(traced);
  const auto kept_names = kept_layout.names();
  std::vector<std::string> traced_sorted;
  for (const auto& name : layout.names()) {
    if (std::find(traced.begin(), traced.end(), name) != traced.end()) traced_sorted.push_back(name);
  }
  const QubitMap kept(layout, kept_names);
  const QubitMap gone(layout, traced_sorted);

  const auto kd = static_cast<Eigen::Index>(kept.dimension());
  const auto td = gone.dimension();
  std::vector<std::size_t> kept_idx(kd);
  for (Eigen::Index a = 0; a < kd; ++a) kept_idx[a] = kept.scatter(a);

  ComplexMatrix out = ComplexMatrix::Zero(kd, kd);
  for (std::size_t t = 0; t < td; ++t) {
    const std::size_t toff = gone.scatter(t);
    for (Eigen::Index a = 0; a < kd; ++a) {
      for (Eigen::Index b = 0; b < kd; ++b) {
        out(a, b) += rho(kept_idx[a] | toff, kept_idx[b] | toff);
      }
    }
  }
  return out;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw ContractError("eig_hermitian: matrix is not square");
  check_finite(h, "eig_hermitian");
  if (!is_hermitian(h)) throw ContractError("eig_hermitian: matrix is not Hermitian");
  const ComplexMatrix sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw ContractError("eig_hermitian: solver failed");
  EigenDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double max_eigenvalue(const ComplexMatrix& h) {
  const auto e = eig_hermitian(h);
  return e.values.size() == 0 ? 0.0 : e.values(0);
}

double min_eigenvalue(const ComplexMatrix& h) {
  const auto e = eig_hermitian(h);
  return e.values.size() == 0 ? 0.0 : e.values(e.values.size() - 1);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  const auto e = eig_hermitian(rho);
  if (e.values.size() > 0 && e.values.minCoeff() < -kPsdTol) {
    throw NotPsdError("psd_sqrt: minimum eigenvalue " + std::to_string(e.values.minCoeff()));
  }
  const RealVector roots = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

namespace {

std::vector<std::size_t> permutation_table(const RegisterLayout& layout,
                                           std::span<const std::string> new_order) {
  if (new_order.size() != layout.size()) {
    throw LayoutError("permute_registers: new order is not a permutation of the layout");
  }
  for (const auto& name : new_order) layout.at(name);
  const QubitMap map(layout, new_order);  // rejects duplicates
  std::vector<std::size_t> table(layout.dimension());
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = map.gather(i);
  return table;
}

}  // namespace

ComplexMatrix permute_registers(const ComplexMatrix& op, const RegisterLayout& layout,
                                std::span<const std::string> new_order) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  if (op.rows() != dim || op.cols() != dim) {
    throw LayoutError("permute_registers: matrix dimension does not match layout");
  }
  const auto p = permutation_table(layout, new_order);
  ComplexMatrix out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) out(p[i], p[j]) = op(i, j);
  }
  return out;
}

ComplexVector permute_registers(const ComplexVector& v, const RegisterLayout& layout,
                                std::span<const std::string> new_order) {
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  if (v.size() != dim) throw LayoutError("permute_registers: vector length does not match layout");
  const auto p = permutation_table(layout, new_order);
  ComplexVector out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out(p[i]) = v(i);
  return out;
}

ComplexMatrix controlled(const ComplexMatrix& op) {
  if (!is_unitary(op)) throw ContractError("controlled: operator is not unitary");
  const auto d = op.rows();
  check_budget(static_cast<std::size_t>(2 * d), static_cast<std::size_t>(2 * d), "controlled");
  ComplexMatrix out = ComplexMatrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d).setIdentity();
  out.bottomRightCorner(d, d) = op;
  return out;
}

namespace {

struct EmbeddingIndex {
  std::vector<std::size_t> target;  // full-index bits for each target sub-index
  std::vector<std::size_t> rest;    // full-index bits for each rest sub-index
};

EmbeddingIndex embedding_index(const ComplexMatrix& op, const RegisterLayout& layout,
                               std::span<const std::string> targets) {
  const QubitMap tmap(layout, targets);
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != tmap.dimension()) {
    throw LayoutError("embed: operator dimension does not match target registers");
  }
  const auto rest_names = layout.without(targets).names();
  const QubitMap rmap(layout, rest_names);
  EmbeddingIndex idx;
  idx.target.resize(tmap.dimension());
  idx.rest.resize(rmap.dimension());
  for (std::size_t a = 0; a < idx.target.size(); ++a) idx.target[a] = tmap.scatter(a);
  for (std::size_t r = 0; r < idx.rest.size(); ++r) idx.rest[r] = rmap.scatter(r);
  return idx;
}

}  // namespace

ComplexMatrix embed(const ComplexMatrix& op, const RegisterLayout& layout,
                    std::span<const std::string> targets) {
  const auto dim = layout.dimension();
  check_budget(dim, dim, "embed");
  const auto idx = embedding_index(op, layout, targets);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t r : idx.rest) {
    for (std::size_t a = 0; a < idx.target.size(); ++a) {
      for (std::size_t b = 0; b < idx.target.size(); ++b) {
        out(r | idx.target[a], r | idx.target[b]) = op(a, b);
      }
    }
  }
  return out;
}

void apply_left(ComplexMatrix& m, const ComplexMatrix& op, const RegisterLayout& layout,
                std::span<const std::string> targets) {
  if (static_cast<std::size_t>(m.rows()) != layout.dimension()) {
    throw LayoutError("apply_left: matrix rows do not match layout");
  }
  const auto idx = embedding_index(op, layout, targets);
  std::vector<Eigen::Index> rows(idx.target.size());
  for (std::size_t r : idx.rest) {
    for (std::size_t a = 0; a < rows.size(); ++a) rows[a] = static_cast<Eigen::Index>(r | idx.target[a]);
    const ComplexMatrix block = op * m(rows, Eigen::all);
    m(rows, Eigen::all) = block;
  }
}

void apply_left(ComplexVector& v, const ComplexMatrix& op, const RegisterLayout& layout,
                std::span<const std::string> targets) {
  if (static_cast<std::size_t>(v.size()) != layout.dimension()) {
    throw LayoutError("apply_left: vector length does not match layout");
  }
  const auto idx = embedding_index(op, layout, targets);
  std::vector<Eigen::Index> rows(idx.target.size());
  for (std::size_t r : idx.rest) {
    for (std::size_t a = 0; a < rows.size(); ++a) rows[a] = static_cast<Eigen::Index>(r | idx.target[a]);
    const ComplexVector block = op * v(rows);
    v(rows) = block;
  }
}

namespace gates {

ComplexMatrix identity(int qubits) {
  const auto d = Eigen::Index{1} << qubits;
  return ComplexMatrix::Identity(d, d);
}

ComplexMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix h(2, 2);
  h << s, s, s, -s;
  return h;
}

ComplexMatrix hadamard_all(int qubits) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) out = tensor(out, hadamard());
  return out;
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

ComplexMatrix ry(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  ComplexMatrix r(2, 2);
  r << c, -s, s, c;
  return r;
}

ComplexMatrix swap(int qubits) {
  const auto d = std::size_t{1} << qubits;
  check_budget(d * d, d * d, "swap");
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) out(b * d + a, a * d + b) = 1.0;
  }
  return out;
}

}  // namespace gates

}  // namespace qmaforge
