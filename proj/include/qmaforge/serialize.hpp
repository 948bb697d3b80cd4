#pragma once

#include <json.hpp>

#include "qmaforge/protocols.hpp"
#include "qmaforge/prover_opt.hpp"
#include "qmaforge/states.hpp"
#include "qmaforge/verifier.hpp"

namespace qmaforge {

using Json = nlohmann::json;

// {"rows": n, "cols": m, "entries": [[re, im], ...]} in row-major order.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// {"registers": [{"name": ..., "qubits": n}, ...]}
Json to_json(const RegisterLayout& layout);
RegisterLayout layout_from_json(const Json& j);

// Matrix format (a column vector for pure states) plus a "layout" field.
Json to_json(const PureState& psi);
PureState pure_state_from_json(const Json& j);
Json to_json(const DensityOperator& rho);
DensityOperator density_from_json(const Json& j);

// {"circuit": matrix, "layout": ..., "output_qubit": n, "proof_registers": [names]}
Json to_json(const Verifier& v);
Verifier verifier_from_json(const Json& j);

Json to_json(const SoundnessCertificate& cert);
Json to_json(const AmplifiedParams& amp);
Json to_json(const StageParams& stage);
// Bound arithmetic only; the constructed verifier is written separately.
Json to_json(const ReductionReport& report);

}  // namespace qmaforge
