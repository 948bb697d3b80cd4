#include "qmaforge/serialize.hpp"

#include "qmaforge/errors.hpp"

namespace qmaforge {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto rows = field<long>(j, "rows");
  const auto cols = field<long>(j, "cols");
  if (rows < 0 || cols < 0) throw FormatError("matrix dimensions must be nonnegative");
  check_budget(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), "matrix_from_json");
  const Json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols)) {
    throw FormatError("matrix entry count does not equal rows x cols");
  }
  ComplexMatrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c, ++k) {
      const Json& e = entries[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw FormatError("matrix entries must be [re, im] pairs");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  check_finite(m, "matrix_from_json");
  return m;
}

Json to_json(const RegisterLayout& layout) {
  Json regs = Json::array();
  for (const auto& r : layout.registers()) regs.push_back({{"name", r.name}, {"qubits", r.qubits}});
  return {{"registers", std::move(regs)}};
}

RegisterLayout layout_from_json(const Json& j) {
  const Json regs = field<Json>(j, "registers");
  if (!regs.is_array()) throw FormatError("'registers' must be an array");
  std::vector<Register> out;
  for (const auto& r : regs) out.push_back({field<std::string>(r, "name"), field<int>(r, "qubits")});
  return RegisterLayout(std::move(out));
}

Json to_json(const PureState& psi) {
  Json j = to_json(ComplexMatrix(psi.amplitudes()));
  j["layout"] = to_json(psi.layout());
  return j;
}

PureState pure_state_from_json(const Json& j) {
  const ComplexMatrix m = matrix_from_json(j);
  if (m.cols() != 1) throw FormatError("pure state must be a single column");
  return PureState(layout_from_json(field<Json>(j, "layout")), m.col(0));
}

Json to_json(const DensityOperator& rho) {
  Json j = to_json(rho.matrix());
  j["layout"] = to_json(rho.layout());
  return j;
}

DensityOperator density_from_json(const Json& j) {
  return DensityOperator(layout_from_json(field<Json>(j, "layout")), matrix_from_json(j));
}

Json to_json(const Verifier& v) {
  return {{"circuit", to_json(v.circuit())},
          {"layout", to_json(v.layout())},
          {"output_qubit", v.output_qubit()},
          {"proof_registers", v.proof_registers()}};
}

Verifier verifier_from_json(const Json& j) {
  return Verifier(matrix_from_json(field<Json>(j, "circuit")), layout_from_json(field<Json>(j, "layout")),
                  field<std::vector<std::string>>(j, "proof_registers"), field<int>(j, "output_qubit"));
}

Json to_json(const SoundnessCertificate& cert) {
  Json j = {{"product_lower_bound", cert.product_lower_bound},
            {"entangled_upper_bound", cert.entangled_upper_bound},
            {"conclusive", cert.conclusive},
            {"threshold", cert.threshold},
            {"restarts", cert.restarts},
            {"seed", cert.seed},
            {"bound_used", cert.bound_used},
            {"seesaw_value", cert.seesaw_value}};
  if (cert.brute_force_ran()) j["brute_force_value"] = cert.brute_force_value;
  return j;
}

Json to_json(const AmplifiedParams& amp) {
  return {{"n_attempts", amp.n_attempts},
          {"threshold_count", amp.threshold},
          {"completeness", amp.completeness},
          {"soundness", amp.soundness},
          {"soundness_relaxed", amp.soundness_relaxed},
          {"gap_floor", amp.gap_floor}};
}

Json to_json(const StageParams& stage) {
  return {{"k", stage.k}, {"epsilon", stage.epsilon}, {"delta", stage.delta}};
}

Json to_json(const ReductionReport& report) {
  Json j = {{"input", to_json(report.input)}, {"output", to_json(report.output)}};
  if (report.constructed) {
    j["constructed_qubits"] = report.constructed->layout().total_qubits();
    j["constructed_proofs"] = report.constructed->proof_count();
  }
  return j;
}

}  // namespace qmaforge
