// Copyright 2026 The pisep developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PISEP_IO_HPP
#define PISEP_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "pisep/measurement.hpp"
#include "pisep/pi_coefficients.hpp"
#include "pisep/separability.hpp"
#include "pisep/states.hpp"

// JSON serialization. Structural problems (unreadable files, missing keys,
// wrong shapes) raise io_error; value-level problems (norm, Hermiticity,
// positivity) raise validation_error. Serialized doubles use the shortest
// representation that round-trips, so re-serializing identical data is
// byte-identical.

namespace pisep {

using StateVariant = std::variant<PureState, DensityMatrix>;

// {"n_qubits": N, "kind": "pure" | "density", "data": [[re, im], ...]}
// with `data` the amplitudes, or the matrix flattened row-major.
nlohmann::json state_json(const PureState& psi);
nlohmann::json state_json(const DensityMatrix& rho);
StateVariant state_from_json(const nlohmann::json& j);

// {"n_qubits": N, "coeffs": [{"k":, "l":, "m":, "n":, "e":}, ...]} listing
// the nonzero coefficients plus, always, the normalization e_{000N}.
nlohmann::json coefficients_json(const PICoefficients& coeffs);
PICoefficients coefficients_from_json(const nlohmann::json& j);

// {"n_qubits": N, "A":, "B":, "C":, "k_eff": value | null,
//  "verdicts": {"2": "K_NONSEPARABLE" | "NOT_DETECTED", ...}}
// plus an explanatory "note" when k_eff is null.
nlohmann::json report_json(const CriterionReport& report);

// {"direction": [a, b, c], "family": ..., "n_qubits": N,
//  "shots": count | "exact", "correlators": [...],
//  "histogram": [...] | null, "seed": value | null,
//  "std_errors": [...] | null}
nlohmann::json setting_data_json(const SettingData& data);
SettingData setting_data_from_json(const nlohmann::json& j);

// Coefficient listing (with per-entry "se" when sampled) plus solve
// diagnostics, ordered YZ_PLANE n = 0..N-2 then XZ_PLANE n = 0..N-2.
nlohmann::json reconstruction_json(const ReconstructionResult& result);

nlohmann::json load_json_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);
StateVariant load_state(const std::string& path);

DensityMatrix to_density(const StateVariant& state);
int state_qubits(const StateVariant& state);

}  // namespace pisep

#endif  // PISEP_IO_HPP
