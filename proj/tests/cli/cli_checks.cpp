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

// End-to-end checks of the `pisep` command-line tool, run against the built
// binary (path passed as the single argument). Each check spawns the tool,
// captures the exit code and both streams, and inspects the machine output.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pisep/io.hpp"

using nlohmann::json;

namespace {

std::string g_cli;
std::string g_dir;
int g_checks = 0;
int g_failures = 0;

#define CLI_CHECK(cond)                                                       \
  do {                                                                        \
    ++g_checks;                                                               \
    if (!(cond)) {                                                            \
      std::fprintf(stderr, "cli_checks:%d: failed: %s\n", __LINE__, #cond);   \
      ++g_failures;                                                           \
    }                                                                         \
  } while (0)

#define CLI_CHECK_NEAR(a, b, tol) CLI_CHECK(std::abs((a) - (b)) <= (tol))

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string path_in_dir(const std::string& name) { return g_dir + "/" + name; }

int run(const std::string& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::string out_path = path_in_dir("cmd_stdout.txt");
  std::string err_path = path_in_dir("cmd_stderr.txt");
  std::string cmd = "\"" + g_cli + "\" " + args + " > \"" + out_path +
                    "\" 2> \"" + err_path + "\"";
  int status = std::system(cmd.c_str());
  if (out_text) *out_text = read_file(out_path);
  if (err_text) *err_text = read_file(err_path);
  if (!WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  CLI_CHECK(!j.is_discarded());
  return j;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

void check_gen() {
  std::string a, b;
  CLI_CHECK(run("gen random-pure 4 --seed 7", &a) == 0);
  CLI_CHECK(run("gen random-pure 4 --seed 7", &b) == 0);
  CLI_CHECK(!a.empty());
  CLI_CHECK(a == b);
  std::string c;
  CLI_CHECK(run("gen random-pure 4 --seed 8", &c) == 0);
  CLI_CHECK(a != c);

  CLI_CHECK(run("gen ghz 13") == 2);
  CLI_CHECK(run("gen ghz 0") == 2);
  CLI_CHECK(run("gen nonsense 3") == 2);

  CLI_CHECK(run("gen w 3 -o \"" + path_in_dir("w3.json") + "\"") == 0);
  CLI_CHECK(run("gen ghz 3 -o \"" + path_in_dir("ghz3.json") + "\"") == 0);
  CLI_CHECK(run("gen random-mixed 3 --seed 11 -o \"" +
                path_in_dir("mixed3.json") + "\"") == 0);
}

void check_project_and_coeffs() {
  std::string err;
  CLI_CHECK(run("project \"" + path_in_dir("w3.json") + "\" -o \"" +
                    path_in_dir("w3_pi.json") + "\"",
                nullptr, &err) == 0);
  CLI_CHECK(err.find("pi distance:") != std::string::npos);

  CLI_CHECK(run("project \"" + path_in_dir("mixed3.json") + "\" -o \"" +
                path_in_dir("mixed3_pi.json") + "\"") == 0);

  std::string out;
  CLI_CHECK(run("coeffs \"" + path_in_dir("w3.json") + "\"", &out) == 0);
  json j = parse(out);
  CLI_CHECK(j["n_qubits"] == 3);
  CLI_CHECK(j["coeffs"].is_array());
}

void check_certify() {
  std::string out;
  CLI_CHECK(run("certify \"" + path_in_dir("w3.json") + "\"", &out) == 0);
  json w = parse(out);
  CLI_CHECK_NEAR(w["A"].get<double>(), 1.0, 1e-12);
  CLI_CHECK_NEAR(w["B"].get<double>(), 0.0, 1e-12);
  CLI_CHECK_NEAR(w["C"].get<double>(), 1.0, 1e-12);
  CLI_CHECK_NEAR(w["k_eff"].get<double>(), 1.0, 1e-12);
  CLI_CHECK(w["verdicts"]["2"] == "K_NONSEPARABLE");
  CLI_CHECK(w["verdicts"]["3"] == "K_NONSEPARABLE");

  CLI_CHECK(run("certify \"" + path_in_dir("ghz3.json") + "\"", &out) == 0);
  json g = parse(out);
  CLI_CHECK(g["k_eff"].is_null());
  CLI_CHECK(g.contains("note"));
  CLI_CHECK(g["verdicts"]["2"] == "NOT_DETECTED");

  // Machine output goes to the file; stdout stays clean.
  CLI_CHECK(run("certify \"" + path_in_dir("w3.json") + "\" -o \"" +
                    path_in_dir("w3_report.json") + "\"",
                &out) == 0);
  CLI_CHECK(out.empty());
  json from_file = parse(read_file(path_in_dir("w3_report.json")));
  CLI_CHECK_NEAR(from_file["k_eff"].get<double>(), 1.0, 1e-12);
}

void check_certify_paths_agree() {
  std::string pi_state = path_in_dir("mixed3_pi.json");
  json reports[3];
  const char* vias[3] = {"dense", "coeffs", "reconstruct"};
  for (int i = 0; i < 3; ++i) {
    std::string out;
    CLI_CHECK(run("certify \"" + pi_state + "\" --via " + vias[i], &out) == 0);
    reports[i] = parse(out);
  }
  for (int i = 1; i < 3; ++i) {
    for (const char* key : {"A", "B", "C", "k_eff"})
      CLI_CHECK_NEAR(reports[i][key].get<double>(),
                     reports[0][key].get<double>(), 1e-9);
    CLI_CHECK(reports[i]["verdicts"] == reports[0]["verdicts"]);
  }
}

void check_basis_search() {
  pisep::PureState bell;
  bell.n_qubits = 2;
  bell.amplitudes = pisep::ComplexVector<double>::Zero(4);
  bell.amplitudes(1) = std::complex<double>(1 / std::sqrt(2.0), 0);
  bell.amplitudes(2) = std::complex<double>(0, 1 / std::sqrt(2.0));
  std::string bell_path = path_in_dir("bell.json");
  pisep::save_text_file(bell_path, pisep::state_json(bell).dump(2) + "\n");

  std::string out;
  CLI_CHECK(run("certify \"" + bell_path + "\" --basis-search 50 1", &out) ==
            0);
  json j = parse(out);
  // The computational-basis PI part of this state is separable-looking, but
  // some rotated frame exposes the entanglement.
  CLI_CHECK(j["identity"]["verdicts"]["2"] == "NOT_DETECTED");
  CLI_CHECK_NEAR(j["identity"]["k_eff"].get<double>(), 2.0, 1e-9);
  CLI_CHECK(j["best"]["verdicts"]["2"] == "K_NONSEPARABLE");
  CLI_CHECK(j["best"]["k_eff"].get<double>() <= 1.0 + 1e-6);
  CLI_CHECK(j["best_restart"].get<int>() >= 0);

  // Byte-identical reruns with the same seed.
  std::string again;
  CLI_CHECK(run("certify \"" + bell_path + "\" --basis-search 50 1", &again) ==
            0);
  CLI_CHECK(out == again);
}

void check_concurrence() {
  std::string out;
  CLI_CHECK(run("concurrence \"" + path_in_dir("ghz3.json") + "\" 2", &out) ==
            0);
  json g = parse(out);
  CLI_CHECK_NEAR(g["value"].get<double>(), 1.0, 1e-12);
  CLI_CHECK(g["k"] == 2);

  CLI_CHECK(run("concurrence \"" + path_in_dir("w3.json") + "\" 2", &out) ==
            0);
  json w = parse(out);
  CLI_CHECK_NEAR(w["value"].get<double>(), 2.0 * std::sqrt(2.0) / 3.0, 1e-12);
  CLI_CHECK(w["argmin"].is_array());
  CLI_CHECK(w["argmin"].size() == 2);

  // Mixed states are not supported.
  CLI_CHECK(run("concurrence \"" + path_in_dir("mixed3.json") + "\" 2") == 2);
  CLI_CHECK(run("concurrence \"" + path_in_dir("w3.json") + "\" 4") == 2);
}

void check_reconstruct() {
  std::string out, err;
  CLI_CHECK(run("reconstruct \"" + path_in_dir("mixed3_pi.json") + "\"", &out,
                &err) == 0);
  json exact = parse(out);
  CLI_CHECK(exact["max_coefficient_error"].get<double>() < 1e-10);
  CLI_CHECK(exact["metadata"]["shots"] == "exact");
  CLI_CHECK(!exact.contains("within_5_sigma"));
  CLI_CHECK(exact["condition_numbers"].size() == 4);
  CLI_CHECK(exact["residuals"].size() == 4);
  CLI_CHECK(err.find("max coefficient error vs state:") != std::string::npos);
  for (const json& entry : exact["coeffs"]) CLI_CHECK(!entry.contains("se"));

  CLI_CHECK(run("reconstruct \"" + path_in_dir("w3.json") +
                    "\" --shots 1000000 --seed 3",
                &out) == 0);
  json sampled = parse(out);
  CLI_CHECK(sampled["within_5_sigma"] == true);
  CLI_CHECK(sampled["metadata"]["seed"] == 3);
  CLI_CHECK(sampled["metadata"]["shots"] == 1000000);
  bool any_se = false;
  for (const json& entry : sampled["coeffs"])
    if (entry.contains("se")) any_se = true;
  CLI_CHECK(any_se);

  // Identical seeds reproduce the estimates byte for byte.
  std::string again;
  CLI_CHECK(run("reconstruct \"" + path_in_dir("w3.json") +
                    "\" --shots 1000000 --seed 3",
                &again) == 0);
  CLI_CHECK(out == again);

  CLI_CHECK(run("reconstruct \"" + path_in_dir("w3.json") +
                    "\" --preset supplement",
                &out, &err) == 0);
  json supp = parse(out);
  CLI_CHECK(supp["max_coefficient_error"].get<double>() < 1e-10);
  CLI_CHECK(err.find("observable 1/7:") != std::string::npos);
  CLI_CHECK(err.find("observable 7/7:") != std::string::npos);

  // The alternate preset only exists for three qubits.
  CLI_CHECK(run("gen w 4 -o \"" + path_in_dir("w4.json") + "\"") == 0);
  CLI_CHECK(run("reconstruct \"" + path_in_dir("w4.json") +
                "\" --preset supplement") == 2);
}

void check_scan_noise() {
  std::string out;
  CLI_CHECK(run("scan-noise 3 0:1:0.25 -", &out) == 0);
  std::vector<std::string> lines = split_lines(out);
  CLI_CHECK(lines.size() == 6);
  CLI_CHECK(lines[0] == "N,p,A,B,C,k_eff,detected_k2");

  std::vector<std::string> row0 = split_csv(lines[1]);
  CLI_CHECK(row0.size() == 7);
  CLI_CHECK(row0[0] == "3");
  CLI_CHECK(std::stod(row0[1]) == 0.0);
  CLI_CHECK_NEAR(std::stod(row0[5]), 1.0, 1e-15);
  CLI_CHECK(row0[6] == "true");

  std::vector<std::string> row_half = split_csv(lines[3]);
  CLI_CHECK(std::stod(row_half[1]) == 0.5);
  CLI_CHECK_NEAR(std::stod(row_half[5]), 23.0 / 11.0, 1e-15);
  CLI_CHECK(row_half[6] == "false");  // past the biseparability threshold 8/17

  std::vector<std::string> row_one = split_csv(lines[5]);
  CLI_CHECK(std::stod(row_one[1]) == 1.0);
  CLI_CHECK_NEAR(std::stod(row_one[5]), 5.0, 1e-15);  // 2N - 1 at full noise

  // Multiple qubit counts: rows grouped by N in the order given.
  CLI_CHECK(run("scan-noise 3,4 0:1:0.5 -", &out) == 0);
  lines = split_lines(out);
  CLI_CHECK(lines.size() == 7);
  CLI_CHECK(split_csv(lines[1])[0] == "3");
  CLI_CHECK(split_csv(lines[4])[0] == "4");

  // Reruns are byte-identical, and a CSV file matches stdout.
  std::string again;
  CLI_CHECK(run("scan-noise 3,4 0:1:0.5 -", &again) == 0);
  CLI_CHECK(out == again);
  std::string csv_path = path_in_dir("scan.csv");
  CLI_CHECK(run("scan-noise 3,4 0:1:0.5 \"" + csv_path + "\"") == 0);
  CLI_CHECK(read_file(csv_path) == out);

  CLI_CHECK(run("scan-noise 3 1:0:0.25 -") == 2);
  CLI_CHECK(run("scan-noise 3 0:1:0 -") == 2);
  CLI_CHECK(run("scan-noise 3 0:2:0.5 -") == 2);
  CLI_CHECK(run("scan-noise 1 0:1:0.5 -") == 2);
  CLI_CHECK(run("scan-noise 3 garbage -") == 2);
}

void check_exit_codes() {
  CLI_CHECK(run("certify \"" + path_in_dir("does_not_exist.json") + "\"") ==
            4);
  std::string broken = path_in_dir("broken.json");
  pisep::save_text_file(broken, "{\"n_qubits\": 2");
  CLI_CHECK(run("certify \"" + broken + "\"") == 4);

  std::string unnormalized = path_in_dir("unnormalized.json");
  json state = pisep::state_json(pisep::make_w(2));
  state["data"][1][0] = 0.9;
  pisep::save_text_file(unnormalized, state.dump(2) + "\n");
  CLI_CHECK(run("certify \"" + unnormalized + "\"") == 2);

  CLI_CHECK(run("certify \"" + path_in_dir("w3.json") + "\" --via psd") == 2);
  CLI_CHECK(run("") != 0);  // no subcommand
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: cli_checks <path-to-pisep-binary>\n");
    return 2;
  }
  g_cli = argv[1];
  g_dir = (std::filesystem::temp_directory_path() /
           ("pisep_cli_checks_" + std::to_string(::getpid())))
              .string();
  std::filesystem::create_directories(g_dir);

  check_gen();
  check_project_and_coeffs();
  check_certify();
  check_certify_paths_agree();
  check_basis_search();
  check_concurrence();
  check_reconstruct();
  check_scan_noise();
  check_exit_codes();

  std::filesystem::remove_all(g_dir);
  std::fprintf(stderr, "cli_checks: %d checks, %d failures\n", g_checks,
               g_failures);
  return g_failures == 0 ? 0 : 1;
}
