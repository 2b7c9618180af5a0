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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pisep/io.hpp"
#include "pisep/pisep.hpp"

namespace {

using nlohmann::json;
using namespace pisep;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    save_text_file(out_path, text);
}

void emit_json(const std::string& out_path, const json& j) {
  emit(out_path, j.dump(2) + "\n");
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw validation_error(std::string(what) + ": \"" + s +
                           "\" is not a nonnegative integer");
  }
}

SettingPreset parse_preset(const std::string& s) {
  if (s == "default") return SettingPreset::kDefault;
  if (s == "supplement") return SettingPreset::kSupplement;
  throw validation_error("preset must be \"default\" or \"supplement\"");
}

// ---------------------------------------------------------------- gen

void cmd_gen(const std::string& kind, int n, std::uint64_t seed,
             const std::string& out) {
  StateVariant state = PureState{};
  if (kind == "ghz") {
    state = make_ghz(n);
  } else if (kind == "w") {
    state = make_w(n);
  } else if (kind == "product") {
    state = make_product(n);
  } else if (kind == "random-pure") {
    Rng rng(seed);
    state = random_pure(n, rng);
  } else if (kind == "random-mixed") {
    Rng rng(seed);
    state = random_mixed(n, rng);
  } else {
    throw validation_error("gen: unknown kind \"" + kind + "\"");
  }
  if (std::holds_alternative<PureState>(state))
    emit_json(out, state_json(std::get<PureState>(state)));
  else
    emit_json(out, state_json(std::get<DensityMatrix>(state)));
}

// ------------------------------------------------------------- project

void cmd_project(const std::string& in, const std::string& out) {
  DensityMatrix rho = to_density(load_state(in));
  std::cerr << "pi distance: " << fmt17(pi_distance(rho)) << "\n";
  emit_json(out, state_json(pi_project(rho)));
}

// -------------------------------------------------------------- coeffs

void cmd_coeffs(const std::string& in, const std::string& out) {
  DensityMatrix rho = to_density(load_state(in));
  emit_json(out, coefficients_json(coeffs_from_dense(rho)));
}

// ------------------------------------------------------------- certify

std::vector<SettingData> exact_pipeline_data(const DensityMatrix& rho,
                                             SettingPreset preset) {
  std::vector<SettingData> data;
  for (const MeasurementSetting& s : design_settings(rho.n_qubits, preset))
    data.push_back(exact_setting_data(rho, s));
  return data;
}

void cmd_certify(const std::string& in, const std::string& via,
                 const std::vector<std::string>& basis_search,
                 const std::string& preset_name, const std::string& out) {
  DensityMatrix rho = to_density(load_state(in));

  if (!basis_search.empty()) {
    std::uint64_t restarts = parse_u64(basis_search[0], "certify: restarts");
    std::uint64_t seed = parse_u64(basis_search[1], "certify: seed");
    if (restarts > 1000000)
      throw validation_error("certify: restarts out of range");
    BasisSearchResult res =
        maximize_over_bases(rho, static_cast<int>(restarts), seed);
    json j = {{"identity", report_json(evaluate_criterion(pi_project(rho)))},
              {"best", report_json(res.best_report)},
              {"best_restart", res.best_restart}};
    emit_json(out, j);
    return;
  }

  CriterionReport report;
  if (via == "dense") {
    report = evaluate_criterion(rho);
  } else if (via == "coeffs") {
    report = evaluate_criterion(coeffs_from_dense(rho));
  } else if (via == "reconstruct") {
    ReconstructionResult recon = reconstruct_coefficients(
        exact_pipeline_data(rho, parse_preset(preset_name)), rho.n_qubits);
    report = evaluate_criterion(reconstruction_to_coefficients(recon));
  } else {
    throw validation_error("certify: --via must be dense, coeffs, or reconstruct");
  }
  emit_json(out, report_json(report));
}

// ---------------------------------------------------------- scan-noise

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string part =
        s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      int n = std::stoi(part, &used);
      if (used != part.size() || n < 2) throw std::invalid_argument(part);
      out.push_back(n);
    } catch (const std::exception&) {
      throw validation_error("scan-noise: bad qubit count \"" + part +
                             "\" in N-list");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw validation_error("scan-noise: empty N-list");
  return out;
}

std::vector<double> parse_p_grid(const std::string& s) {
  double start, end, step;
  char trailing;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &start, &end, &step, &trailing) != 3)
    throw validation_error("scan-noise: p-grid must be start:end:step, got \"" +
                           s + "\"");
  if (!(step > 0)) throw validation_error("scan-noise: step must be positive");
  if (!(start <= end))
    throw validation_error("scan-noise: grid start must not exceed end");
  if (start < 0 || end > 1)
    throw validation_error("scan-noise: p values must lie in [0, 1]");
  long long count = static_cast<long long>(std::floor((end - start) / step));
  while (start + static_cast<double>(count + 1) * step <= end + 1e-12) ++count;
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (long long i = 0; i <= count; ++i)
    grid.push_back(std::min(start + static_cast<double>(i) * step, end));
  return grid;
}

std::string scan_row(int n, double p, bool dense_check) {
  CriterionScalars s = noisy_w_abc(n, p);
  CriterionReport rep = make_criterion_report(n, s);
  double keff = w_noise_keff(n, p);
  if (dense_check && n <= kDenseMaxQubits) {
    CriterionReport d = evaluate_criterion(noisy_w_density(n, p));
    if (std::abs(d.A - s.A) > 1e-10 || std::abs(d.B - s.B) > 1e-10 ||
        std::abs(d.C - s.C) > 1e-10 || !d.k_eff ||
        std::abs(*d.k_eff - keff) > 1e-10)
      throw numerical_error(
          "scan-noise: dense evaluation disagrees with closed form at N=" +
          std::to_string(n) + ", p=" + fmt17(p));
  }
  std::string line = std::to_string(n) + "," + fmt17(p) + "," + fmt17(s.A) +
                     "," + fmt17(s.B) + "," + fmt17(s.C) + ",";
  if (rep.k_eff) line += fmt17(keff);
  line += ",";
  line += rep.detected_at(2) ? "true" : "false";
  return line;
}

void cmd_scan_noise(const std::string& n_list, const std::string& p_grid,
                    const std::string& out, bool closed_form_only) {
  std::vector<int> ns = parse_n_list(n_list);
  std::vector<double> ps = parse_p_grid(p_grid);

  struct Task {
    int n;
    double p;
  };
  std::vector<Task> tasks;
  tasks.reserve(ns.size() * ps.size());
  for (int n : ns)
    for (double p : ps) tasks.push_back({n, p});

  std::vector<std::string> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        rows[i] = scan_row(tasks[i].n, tasks[i].p, !closed_form_only);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::size_t n_workers =
      std::min<std::size_t>({tasks.size(), 8,
                             std::max(1u, std::thread::hardware_concurrency())});
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < n_workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  std::string csv = "N,p,A,B,C,k_eff,detected_k2\n";
  for (const std::string& row : rows) csv += row + "\n";
  emit(out, csv);
}

// --------------------------------------------------------- reconstruct

void cmd_reconstruct(const std::string& in, std::int64_t shots,
                     std::uint64_t seed, const std::string& preset_name,
                     const std::string& out) {
  DensityMatrix rho = to_density(load_state(in));
  int n = rho.n_qubits;
  SettingPreset preset = parse_preset(preset_name);
  std::vector<MeasurementSetting> settings = design_settings(n, preset);
  if (preset == SettingPreset::kSupplement) {
    for (std::size_t i = 0; i < settings.size(); ++i) {
      const Eigen::Vector3d& d = settings[i].direction;
      std::cerr << "observable " << (i + 1) << "/" << settings.size() << ": "
                << family_name(settings[i].family) << " direction ("
                << fmt17(d(0)) << ", " << fmt17(d(1)) << ", " << fmt17(d(2))
                << ")\n";
    }
  }

  bool sampled = shots > 0;
  std::vector<SettingData> data;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    if (sampled)
      data.push_back(sample_setting_data(
          rho, settings[i], shots,
          seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(i)));
    else
      data.push_back(exact_setting_data(rho, settings[i]));
  }
  ReconstructionResult result = reconstruct_coefficients(data, n);

  PICoefficients truth = coeffs_from_dense(rho);
  double max_err = 0;
  bool within_bound = true;
  auto account = [&](double est, double se, double exact) {
    double e = std::abs(est - exact);
    max_err = std::max(max_err, e);
    if (sampled && e > 5 * se + 5e-14) within_bound = false;
  };
  for (int m = 1; m <= n; ++m)
    account(result.e00(m - 1), sampled ? result.se00(m - 1) : 0.0,
            truth.at(0, 0, m));
  for (int m = 0; m <= n - 2; ++m) {
    account(result.e20(m), sampled ? result.se20(m) : 0.0, truth.at(2, 0, m));
    account(result.e02(m), sampled ? result.se02(m) : 0.0, truth.at(0, 2, m));
  }

  json j = reconstruction_json(result);
  j["max_coefficient_error"] = max_err;
  if (sampled) j["within_5_sigma"] = within_bound;
  json metadata = {{"preset", preset_name}};
  if (sampled) {
    metadata["rng"] = kRngName;
    metadata["seed"] = seed;
    metadata["shots"] = shots;
  } else {
    metadata["shots"] = "exact";
  }
  j["metadata"] = metadata;
  std::cerr << "max coefficient error vs state: " << fmt17(max_err) << "\n";
  emit_json(out, j);
}

// --------------------------------------------------------- concurrence

void cmd_concurrence(const std::string& in, int k, const std::string& out) {
  StateVariant state = load_state(in);
  if (!std::holds_alternative<PureState>(state))
    throw validation_error(
        "concurrence: only pure states are supported, got a density matrix");
  KmeResult result = kme_concurrence_pure(std::get<PureState>(state), k);
  json blocks = json::array();
  for (const std::vector<int>& b : result.argmin.blocks) blocks.push_back(b);
  emit_json(out, json{{"k", k}, {"value", result.value}, {"argmin", blocks}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutationally invariant parts of N-qubit states: projection, "
               "separability certification, measurement simulation, and "
               "reconstruction"};
  app.require_subcommand(1);

  std::string gen_kind, gen_out;
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand("gen", "Generate a state file");
  gen->add_option("kind", gen_kind, "ghz | w | product | random-pure | random-mixed")
      ->required()
      ->check(CLI::IsMember({"ghz", "w", "product", "random-pure", "random-mixed"}));
  gen->add_option("N", gen_n, "Number of qubits")->required();
  gen->add_option("--seed", gen_seed, "Seed for random kinds (default 0)");
  gen->add_option("-o,--out", gen_out, "Output file (default: standard output)");
  gen->callback([&] { cmd_gen(gen_kind, gen_n, gen_seed, gen_out); });

  std::string project_in, project_out;
  CLI::App* project =
      app.add_subcommand("project", "Write the PI part of a state");
  project->add_option("state", project_in, "Input state JSON file")->required();
  project->add_option("-o,--out", project_out, "Output file");
  project->callback([&] { cmd_project(project_in, project_out); });

  std::string coeffs_in, coeffs_out;
  CLI::App* coeffs = app.add_subcommand(
      "coeffs", "Write the symmetrized Pauli coefficients of the PI part");
  coeffs->add_option("state", coeffs_in, "Input state JSON file")->required();
  coeffs->add_option("-o,--out", coeffs_out, "Output file");
  coeffs->callback([&] { cmd_coeffs(coeffs_in, coeffs_out); });

  std::string certify_in, certify_via = "dense", certify_preset = "default",
              certify_out;
  std::vector<std::string> certify_bs;
  CLI::App* certify =
      app.add_subcommand("certify", "Evaluate the k-separability criterion");
  certify->add_option("state", certify_in, "Input state JSON file")->required();
  certify->add_option("--via", certify_via,
                      "Evaluation path: dense | coeffs | reconstruct")
      ->check(CLI::IsMember({"dense", "coeffs", "reconstruct"}));
  certify->add_option("--basis-search", certify_bs,
                      "RESTARTS SEED: search local product bases for the "
                      "strongest violation of the PI part")
      ->expected(2);
  certify->add_option("--preset", certify_preset,
                      "Setting preset for --via reconstruct");
  certify->add_option("-o,--out", certify_out, "Output file");
  certify->callback([&] {
    cmd_certify(certify_in, certify_via, certify_bs, certify_preset,
                certify_out);
  });

  std::string scan_ns, scan_ps, scan_out;
  bool scan_closed = false;
  CLI::App* scan = app.add_subcommand(
      "scan-noise", "Criterion scalars for W states under white noise");
  scan->add_option("N-list", scan_ns, "Comma-separated qubit counts, e.g. 3,8,11,16")
      ->required();
  scan->add_option("p-grid", scan_ps, "Noise grid start:end:step, inclusive")
      ->required();
  scan->add_option("out", scan_out, "Output CSV file (\"-\" for standard output)")
      ->required();
  scan->add_flag("--closed-form-only", scan_closed,
                 "Skip the dense cross-check for N within the dense cap");
  scan->callback([&] { cmd_scan_noise(scan_ns, scan_ps, scan_out, scan_closed); });

  std::string rec_in, rec_preset = "default", rec_out;
  std::int64_t rec_shots = 0;
  std::uint64_t rec_seed = 0;
  CLI::App* rec = app.add_subcommand(
      "reconstruct", "Recover criterion coefficients from the 2N+1 settings");
  rec->add_option("state", rec_in, "Input state JSON file")->required();
  rec->add_option("--shots", rec_shots,
                  "Shots per setting (omit for exact expectations)");
  rec->add_option("--seed", rec_seed, "Sampling seed (default 0)");
  rec->add_option("--preset", rec_preset, "Setting preset: default | supplement");
  rec->add_option("-o,--out", rec_out, "Output file");
  rec->callback(
      [&] { cmd_reconstruct(rec_in, rec_shots, rec_seed, rec_preset, rec_out); });

  std::string conc_in, conc_out;
  int conc_k = 0;
  CLI::App* conc =
      app.add_subcommand("concurrence", "k-ME concurrence of a pure state");
  conc->add_option("state", conc_in, "Input state JSON file")->required();
  conc->add_option("k", conc_k, "Partition size k")->required();
  conc->add_option("-o,--out", conc_out, "Output file");
  conc->callback([&] { cmd_concurrence(conc_in, conc_k, conc_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
