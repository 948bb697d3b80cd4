#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmaforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Largest number of amplitudes a single dense matrix or vector may hold.
inline constexpr std::size_t kMaxAmplitudes = std::size_t{1} << 24;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

struct Register {
  std::string name;
  int qubits = 0;

  bool operator==(const Register&) const = default;
};

// Ordered list of named qubit registers. The first register occupies the most
// significant qubits, so a basis index is the big-endian reading of the
// register contents in layout order.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> registers);

  const std::vector<Register>& registers() const { return registers_; }
  std::size_t size() const { return registers_.size(); }
  bool empty() const { return registers_.empty(); }

  int total_qubits() const { return total_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << total_qubits_; }

  bool contains(const std::string& name) const;
  const Register& at(const std::string& name) const;
  // Number of qubits that precede the register in layout order.
  int qubit_offset(const std::string& name) const;
  std::vector<std::string> names() const;

  // Layout restricted to `names`, in the order given.
  RegisterLayout select(std::span<const std::string> names) const;
  // Registers not in `names`, in layout order.
  RegisterLayout without(std::span<const std::string> names) const;
  RegisterLayout concat(const RegisterLayout& other) const;

  bool operator==(const RegisterLayout&) const = default;

 private:
  std::vector<Register> registers_;
  int total_qubits_ = 0;
};

// Maps a basis index of a layout to the index of a subset of its registers
// (taken in a caller-chosen order) and back. Bit positions are counted from
// the least significant end of the full index.
class QubitMap {
 public:
  QubitMap(const RegisterLayout& layout, std::span<const std::string> names);

  // Index of the selected registers read out of a full basis index.
  std::size_t gather(std::size_t full) const;
  // Full basis index with the selected registers set to `sub` and all other
  // qubits zero.
  std::size_t scatter(std::size_t sub) const;
  std::size_t dimension() const { return std::size_t{1} << bits_.size(); }
  // Mask of the full-index bits owned by the selection.
  std::size_t mask() const { return mask_; }

 private:
  std::vector<int> bits_;  // most significant selected bit first
  std::size_t mask_ = 0;
};

void check_budget(std::size_t rows, std::size_t cols, const char* what);
void check_finite(const ComplexMatrix& m, const char* what);

double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors);

ComplexMatrix partial_trace(const ComplexMatrix& rho, const RegisterLayout& layout,
                            std::span<const std::string> traced);

struct EigenDecomposition {
  RealVector values;      // descending
  ComplexMatrix vectors;  // orthonormal columns matching `values`
};

EigenDecomposition eig_hermitian(const ComplexMatrix& h);
double max_eigenvalue(const ComplexMatrix& h);
double min_eigenvalue(const ComplexMatrix& h);

// Square root of a PSD matrix. Eigenvalues in [-kPsdTol, 0) are clamped to 0.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);

// Operator `op` expressed in the register order `new_order`. The result acts on
// layout.select(new_order).
ComplexMatrix permute_registers(const ComplexMatrix& op, const RegisterLayout& layout,
                                std::span<const std::string> new_order);
ComplexVector permute_registers(const ComplexVector& v, const RegisterLayout& layout,
                                std::span<const std::string> new_order);

// |0><0| (x) I + |1><1| (x) op, control qubit first.
ComplexMatrix controlled(const ComplexMatrix& op);

// Operator acting as `op` on `targets` (read in the order given) and as the
// identity on every other register of `layout`.
ComplexMatrix embed(const ComplexMatrix& op, const RegisterLayout& layout,
                    std::span<const std::string> targets);

// In-place m <- embed(op, layout, targets) * m without forming the embedding.
void apply_left(ComplexMatrix& m, const ComplexMatrix& op, const RegisterLayout& layout,
                std::span<const std::string> targets);
void apply_left(ComplexVector& v, const ComplexMatrix& op, const RegisterLayout& layout,
                std::span<const std::string> targets);

namespace gates {

ComplexMatrix identity(int qubits);
ComplexMatrix hadamard();
// Hadamard on every one of `qubits` qubits.
ComplexMatrix hadamard_all(int qubits);
ComplexMatrix pauli_x();
ComplexMatrix ry(double theta);
// Exchanges two blocks of `qubits` qubits each.
ComplexMatrix swap(int qubits);

}  // namespace gates

}  // namespace qmaforge
