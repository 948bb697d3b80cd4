#include <doctest.h>

#include "qmaforge/errors.hpp"
#include "qmaforge/serialize.hpp"
#include "qmaforge/toys.hpp"

using namespace qmaforge;

TEST_CASE("round trips") {
  const Verifier v = random_verifier(1, 2, 1, 4);
  const Json j = to_json(v);
  const Verifier back = verifier_from_json(Json::parse(j.dump()));
  CHECK(back.layout() == v.layout());
  CHECK(back.proof_registers() == v.proof_registers());
  CHECK(back.output_qubit() == v.output_qubit());
  CHECK(max_abs_diff(back.circuit(), v.circuit()) == 0.0);

  const auto psi = haar_random_pure(RegisterLayout({{"A", 2}}), 1);
  CHECK(max_abs_diff(pure_state_from_json(Json::parse(to_json(psi).dump())).amplitudes(), psi.amplitudes()) == 0.0);
  const auto rho = random_density(RegisterLayout({{"A", 1}, {"B", 1}}), 2, 2);
  const auto rho_back = density_from_json(Json::parse(to_json(rho).dump()));
  CHECK(rho_back.layout() == rho.layout());
  CHECK(max_abs_diff(rho_back.matrix(), rho.matrix()) == 0.0);
}

TEST_CASE("certificate fields") {
  SoundnessCertificate cert;
  cert.product_lower_bound = 0.5;
  cert.entangled_upper_bound = 0.7;
  cert.threshold = 0.97;
  cert.conclusive = true;
  cert.restarts = 8;
  cert.seed = 3;
  const Json j = to_json(cert);
  for (const char* key : {"product_lower_bound", "entangled_upper_bound", "conclusive", "threshold", "restarts", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK_FALSE(j.contains("brute_force_value"));
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 1})")), FormatError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 1, "cols": 2, "entries": [[1, 0]]})")), FormatError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "entries": [[1]]})")), FormatError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows": "x", "cols": 1, "entries": [[1, 0]]})")), FormatError);
  CHECK_THROWS_AS(layout_from_json(Json::parse(R"({"registers": 3})")), FormatError);
  CHECK_THROWS_AS(layout_from_json(Json::parse(R"({"registers": [{"name": "A"}]})")), FormatError);
}
