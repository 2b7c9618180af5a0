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

#include "pisep/io.hpp"

#include <fstream>

namespace pisep {

namespace {

using nlohmann::json;

json complex_pairs(const std::complex<double>* data, std::int64_t count) {
  json arr = json::array();
  for (std::int64_t i = 0; i < count; ++i)
    arr.push_back(json::array({data[i].real(), data[i].imag()}));
  return arr;
}

// Structural accessors: every missing/badly typed field is an io_error.
const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw io_error(std::string("missing field \"") + key + "\"");
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer())
    throw io_error(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::complex<double> parse_complex(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw io_error("complex entries must be [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json state_json(const PureState& psi) {
  return {{"n_qubits", psi.n_qubits},
          {"kind", "pure"},
          {"data", complex_pairs(psi.amplitudes.data(), psi.amplitudes.size())}};
}

json state_json(const DensityMatrix& rho) {
  std::int64_t d = dim_of(rho.n_qubits);
  json arr = json::array();
  for (std::int64_t r = 0; r < d; ++r)
    for (std::int64_t c = 0; c < d; ++c)
      arr.push_back(
          json::array({rho.entries(r, c).real(), rho.entries(r, c).imag()}));
  return {{"n_qubits", rho.n_qubits}, {"kind", "density"}, {"data", arr}};
}

StateVariant state_from_json(const json& j) {
  int n = int_field(j, "n_qubits");
  const json& kind = field(j, "kind");
  const json& data = field(j, "data");
  if (!data.is_array()) throw io_error("field \"data\" must be an array");
  check_dense_qubits(n, "state file");
  std::int64_t d = dim_of(n);
  if (kind == "pure") {
    if (static_cast<std::int64_t>(data.size()) != d)
      throw io_error("pure state data must have 2^n_qubits entries, got " +
                     std::to_string(data.size()));
    PureState psi;
    psi.n_qubits = n;
    psi.amplitudes.resize(d);
    for (std::int64_t i = 0; i < d; ++i) psi.amplitudes(i) = parse_complex(data[i]);
    validate_pure(psi, "state file");
    return psi;
  }
  if (kind == "density") {
    if (static_cast<std::int64_t>(data.size()) != d * d)
      throw io_error("density data must have 4^n_qubits entries, got " +
                     std::to_string(data.size()));
    DensityMatrix rho;
    rho.n_qubits = n;
    rho.entries.resize(d, d);
    for (std::int64_t r = 0; r < d; ++r)
      for (std::int64_t c = 0; c < d; ++c)
        rho.entries(r, c) = parse_complex(data[r * d + c]);
    validate_density(rho, /*check_psd=*/true, "state file");
    return rho;
  }
  throw io_error("field \"kind\" must be \"pure\" or \"density\"");
}

json coefficients_json(const PICoefficients& coeffs) {
  json arr = json::array();
  std::size_t idx = 0;
  for (const Composition& c : all_compositions(coeffs.n_qubits)) {
    double e = coeffs.table[idx++];
    bool normalization = c.k == 0 && c.l == 0 && c.m == 0;
    if (e == 0.0 && !normalization) continue;
    arr.push_back(
        {{"k", c.k}, {"l", c.l}, {"m", c.m}, {"n", c.n}, {"e", e}});
  }
  return {{"n_qubits", coeffs.n_qubits}, {"coeffs", arr}};
}

PICoefficients coefficients_from_json(const json& j) {
  int n = int_field(j, "n_qubits");
  if (n < 1) throw validation_error("coefficient file: n_qubits must be >= 1");
  const json& entries = field(j, "coeffs");
  if (!entries.is_array()) throw io_error("field \"coeffs\" must be an array");
  PICoefficients out = PICoefficients::zero(n);
  for (const json& entry : entries) {
    int k = int_field(entry, "k"), l = int_field(entry, "l"),
        m = int_field(entry, "m"), nn = int_field(entry, "n");
    const json& e = field(entry, "e");
    if (!e.is_number()) throw io_error("field \"e\" must be a number");
    if (k + l + m + nn != n)
      throw validation_error(
          "coefficient file: entry type does not sum to n_qubits");
    out.at(k, l, m) = e.get<double>();
  }
  return out;
}

json report_json(const CriterionReport& report) {
  json verdicts = json::object();
  for (int k = 2; k <= report.n_qubits; ++k)
    verdicts[std::to_string(k)] =
        report.detected_at(k) ? "K_NONSEPARABLE" : "NOT_DETECTED";
  json out = {{"n_qubits", report.n_qubits}, {"A", report.A},
              {"B", report.B},               {"C", report.C},
              {"k_eff", nullptr},            {"verdicts", verdicts}};
  if (report.k_eff)
    out["k_eff"] = *report.k_eff;
  else
    out["note"] =
        "k_eff undefined: no single-excitation population (C = 0 within "
        "tolerance)";
  return out;
}

json setting_data_json(const SettingData& data) {
  json out = {
      {"direction", {data.setting.direction(0), data.setting.direction(1),
                     data.setting.direction(2)}},
      {"family", family_name(data.setting.family)},
      {"n_qubits", data.n_qubits},
      {"shots", nullptr},
      {"correlators", json::array()},
      {"histogram", nullptr},
      {"seed", nullptr},
      {"std_errors", nullptr}};
  for (std::int64_t i = 0; i < data.correlators.size(); ++i)
    out["correlators"].push_back(data.correlators(i));
  if (data.shots)
    out["shots"] = *data.shots;
  else
    out["shots"] = "exact";
  if (!data.histogram.empty()) out["histogram"] = data.histogram;
  if (data.seed) out["seed"] = *data.seed;
  if (data.std_errors.size() > 0) {
    json se = json::array();
    for (std::int64_t i = 0; i < data.std_errors.size(); ++i)
      se.push_back(data.std_errors(i));
    out["std_errors"] = se;
  }
  return out;
}

SettingData setting_data_from_json(const json& j) {
  SettingData out;
  const json& dir = field(j, "direction");
  if (!dir.is_array() || dir.size() != 3)
    throw io_error("field \"direction\" must have 3 entries");
  out.setting.direction =
      Eigen::Vector3d(dir[0].get<double>(), dir[1].get<double>(),
                      dir[2].get<double>());
  const json& fam = field(j, "family");
  if (fam == "Z_AXIS")
    out.setting.family = SettingFamily::kZAxis;
  else if (fam == "YZ_PLANE")
    out.setting.family = SettingFamily::kYZPlane;
  else if (fam == "XZ_PLANE")
    out.setting.family = SettingFamily::kXZPlane;
  else
    throw io_error("unknown setting family");
  out.n_qubits = int_field(j, "n_qubits");
  const json& corr = field(j, "correlators");
  if (!corr.is_array()) throw io_error("field \"correlators\" must be an array");
  out.correlators.resize(corr.size());
  for (std::size_t i = 0; i < corr.size(); ++i)
    out.correlators(i) = corr[i].get<double>();
  const json& shots = field(j, "shots");
  if (shots.is_number_integer())
    out.shots = shots.get<std::int64_t>();
  else if (shots != "exact")
    throw io_error("field \"shots\" must be an integer or \"exact\"");
  if (j.contains("histogram") && !j["histogram"].is_null())
    out.histogram = j["histogram"].get<std::vector<std::int64_t>>();
  if (j.contains("seed") && !j["seed"].is_null())
    out.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("std_errors") && !j["std_errors"].is_null()) {
    const json& se = j["std_errors"];
    out.std_errors.resize(se.size());
    for (std::size_t i = 0; i < se.size(); ++i)
      out.std_errors(i) = se[i].get<double>();
  }
  return out;
}

json reconstruction_json(const ReconstructionResult& result) {
  int n = result.n_qubits;
  json coeffs = json::array();
  coeffs.push_back({{"k", 0},
                    {"l", 0},
                    {"m", 0},
                    {"n", n},
                    {"e", 1.0 / (factorial(n) * pow2d(n))}});
  auto push = [&](int k, int l, int m, double e, double se, bool sampled) {
    if (e == 0.0 && !sampled) return;
    json entry = {{"k", k}, {"l", l}, {"m", m}, {"n", n - k - l - m}, {"e", e}};
    if (sampled) entry["se"] = se;
    coeffs.push_back(entry);
  };
  for (int m = 1; m <= n; ++m)
    push(0, 0, m, result.e00(m - 1),
         result.sampled ? result.se00(m - 1) : 0.0, result.sampled);
  for (int m = 0; m <= n - 2; ++m)
    push(2, 0, m, result.e20(m), result.sampled ? result.se20(m) : 0.0,
         result.sampled);
  for (int m = 0; m <= n - 2; ++m)
    push(0, 2, m, result.e02(m), result.sampled ? result.se02(m) : 0.0,
         result.sampled);

  json cond = json::array(), resid = json::array();
  for (int i = 0; i < result.cond_yz.size(); ++i) cond.push_back(result.cond_yz(i));
  for (int i = 0; i < result.cond_xz.size(); ++i) cond.push_back(result.cond_xz(i));
  for (int i = 0; i < result.resid_yz.size(); ++i) resid.push_back(result.resid_yz(i));
  for (int i = 0; i < result.resid_xz.size(); ++i) resid.push_back(result.resid_xz(i));
  return {{"n_qubits", n},
          {"coeffs", coeffs},
          {"condition_numbers", cond},
          {"residuals", resid}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open \"" + path + "\" for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw io_error("cannot parse \"" + path + "\": " + e.what());
  }
  return j;
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open \"" + path + "\" for writing");
  out << text;
  if (!out) throw io_error("write to \"" + path + "\" failed");
}

StateVariant load_state(const std::string& path) {
  return state_from_json(load_json_file(path));
}

DensityMatrix to_density(const StateVariant& state) {
  if (std::holds_alternative<PureState>(state))
    return density_from(std::get<PureState>(state));
  return std::get<DensityMatrix>(state);
}

int state_qubits(const StateVariant& state) {
  return std::holds_alternative<PureState>(state)
             ? std::get<PureState>(state).n_qubits
             : std::get<DensityMatrix>(state).n_qubits;
}

}  // namespace pisep
