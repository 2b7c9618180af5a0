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

#include <numeric>

#include "test_helpers.hpp"

using namespace pisep;
using pisep_tests::random_pi_density;

namespace {

std::vector<SettingData> exact_data(const DensityMatrix& rho,
                                    SettingPreset preset) {
  std::vector<SettingData> out;
  for (const MeasurementSetting& s : design_settings(rho.n_qubits, preset))
    out.push_back(exact_setting_data(rho, s));
  return out;
}

double max_criterion_coefficient_error(const ReconstructionResult& r,
                                       const PICoefficients& truth) {
  double worst = 0;
  for (int m = 1; m <= r.n_qubits; ++m)
    worst = std::max(worst, std::abs(r.e00(m - 1) - truth.at(0, 0, m)));
  for (int m = 0; m <= r.n_qubits - 2; ++m) {
    worst = std::max(worst, std::abs(r.e20(m) - truth.at(2, 0, m)));
    worst = std::max(worst, std::abs(r.e02(m) - truth.at(0, 2, m)));
  }
  return worst;
}

}  // namespace

TEST_SUITE("measurement") {

TEST_CASE("designed settings") {
  for (int n : {2, 3, 5, 8, 16}) {
    std::vector<MeasurementSetting> settings = design_settings(n);
    REQUIRE(static_cast<int>(settings.size()) == 2 * n + 1);
    CHECK(settings[0].family == SettingFamily::kZAxis);
    CHECK((settings[0].direction - Eigen::Vector3d(0, 0, 1)).norm() == 0.0);
    int n_yz = 0, n_xz = 0;
    for (const MeasurementSetting& s : settings) {
      CHECK_NEAR(s.direction.norm(), 1.0, 1e-14);
      if (s.family == SettingFamily::kYZPlane) {
        ++n_yz;
        CHECK(s.direction(0) == 0.0);
        CHECK(s.direction(1) > 0.0);
      } else if (s.family == SettingFamily::kXZPlane) {
        ++n_xz;
        CHECK(s.direction(1) == 0.0);
        CHECK(s.direction(0) > 0.0);
      }
    }
    CHECK(n_yz == n);
    CHECK(n_xz == n);
  }
  CHECK(parameter_count(3) == 15);
  CHECK(parameter_count(8) == 80);
  CHECK_THROWS_AS(design_settings(1), validation_error);
}

TEST_CASE("designed angles keep every solve well conditioned") {
  // Largest per-family solve: n = 0 uses all N settings and N unknowns.
  // Its condition number grows roughly 3.6x per qubit but stays near 1e8
  // even at N = 16, far inside the 1e10 guard of the reconstruction.
  for (int n = 2; n <= 16; ++n) {
    std::vector<MeasurementSetting> settings = design_settings(n);
    Eigen::MatrixXd m(n, n);
    int row = 0;
    for (const MeasurementSetting& s : settings) {
      if (s.family != SettingFamily::kYZPlane) continue;
      double w = s.direction(1), c = s.direction(2);
      for (int l = 1; l <= n; ++l)
        m(row, l - 1) = std::pow(w, l) * std::pow(c, n - l);
      ++row;
    }
    REQUIRE(row == n);
    for (int i = 0; i < n; ++i) m.row(i).normalize();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    CHECK(cond < 1e8);
  }
}

TEST_CASE("supplement preset") {
  std::vector<MeasurementSetting> s = design_settings(3, SettingPreset::kSupplement);
  REQUIRE(s.size() == 7);
  double r = 1 / std::sqrt(2.0);
  CHECK((s[0].direction - Eigen::Vector3d(0, 0, 1)).norm() == 0.0);
  CHECK((s[1].direction - Eigen::Vector3d(1, 0, 0)).norm() == 0.0);
  CHECK((s[2].direction - Eigen::Vector3d(0, 1, 0)).norm() == 0.0);
  CHECK((s[3].direction - Eigen::Vector3d(0, r, r)).norm() < 1e-15);
  CHECK((s[4].direction - Eigen::Vector3d(0, r, -r)).norm() < 1e-15);
  CHECK((s[5].direction - Eigen::Vector3d(r, 0, r)).norm() < 1e-15);
  CHECK((s[6].direction - Eigen::Vector3d(r, 0, -r)).norm() < 1e-15);
  CHECK_THROWS_AS(design_settings(4, SettingPreset::kSupplement),
                  validation_error);
}

TEST_CASE("krawtchouk values") {
  CHECK(krawtchouk(2, 2, 1) == -1.0);
  CHECK(krawtchouk(2, 2, 0) == 1.0);
  CHECK(krawtchouk(2, 2, 2) == 1.0);
  for (int n = 1; n <= 6; ++n)
    for (int u = 0; u <= n; ++u) {
      CHECK(krawtchouk(n, 0, u) == 1.0);
      CHECK(krawtchouk(n, 1, u) == 2.0 * u - n);
    }
  // Symmetry K_j(u; N) = (-1)^j K_j(N-u; N).
  for (int j = 0; j <= 5; ++j)
    for (int u = 0; u <= 5; ++u)
      CHECK_NEAR(krawtchouk(5, j, u),
                 ((j % 2) ? -1 : 1) * krawtchouk(5, j, 5 - u), 1e-12);
}

TEST_CASE("exact correlators of the all-zeros state") {
  DensityMatrix zero;
  zero.n_qubits = 3;
  zero.entries = ComplexMatrix<double>::Zero(8, 8);
  zero.entries(0, 0) = 1.0;
  SettingData data =
      exact_setting_data(zero, {Eigen::Vector3d(0, 0, 1), SettingFamily::kZAxis});
  REQUIRE(data.correlators.size() == 3);
  for (int n = 0; n < 3; ++n) CHECK_NEAR(data.correlators(n), 6.0, 1e-12);
  CHECK_FALSE(data.shots.has_value());
  CHECK(data.std_errors.size() == 0);
}

TEST_CASE("dense and coefficient paths produce the same correlators") {
  Rng rng(97);
  for (int n = 2; n <= 5; ++n) {
    DensityMatrix rho = random_mixed(n, rng);
    PICoefficients coeffs = coeffs_from_dense(rho);
    for (const MeasurementSetting& s : design_settings(n)) {
      SettingData dense = exact_setting_data(rho, s);
      SettingData reduced = exact_setting_data(coeffs, s);
      for (int j = 0; j < n; ++j)
        CHECK_NEAR(dense.correlators(j), reduced.correlators(j), 1e-12);
    }
  }
}

TEST_CASE("sampling is reproducible and statistically sound") {
  DensityMatrix rho = mix_white_noise(density_from(make_w(3)), 0.3);
  MeasurementSetting setting = design_settings(3)[2];
  SettingData a = sample_setting_data(rho, setting, 200000, 11);
  SettingData b = sample_setting_data(rho, setting, 200000, 11);
  CHECK(a.histogram == b.histogram);
  CHECK(std::accumulate(a.histogram.begin(), a.histogram.end(),
                        std::int64_t{0}) == 200000);
  REQUIRE(a.shots.has_value());
  CHECK(*a.shots == 200000);
  REQUIRE(a.seed.has_value());
  CHECK(*a.seed == 11);

  SettingData exact = exact_setting_data(rho, setting);
  for (int n = 0; n < 3; ++n) {
    CHECK(a.std_errors(n) > 0.0);
    CHECK_NEAR(a.correlators(n), exact.correlators(n), 6 * a.std_errors(n));
  }

  SettingData c = sample_setting_data(rho, setting, 200000, 12);
  CHECK(a.histogram != c.histogram);
  CHECK_THROWS_AS(sample_setting_data(rho, setting, 0, 1), validation_error);
}

TEST_CASE("deterministic outcomes have zero standard error") {
  // Measuring the W state along z always finds exactly one excited qubit.
  DensityMatrix w = density_from(make_w(3));
  SettingData data = sample_setting_data(
      w, {Eigen::Vector3d(0, 0, 1), SettingFamily::kZAxis}, 1000, 5);
  REQUIRE(data.histogram.size() == 4);
  CHECK(data.histogram[2] == 1000);  // u = 2 positive outcomes every shot
  SettingData exact = exact_setting_data(w, data.setting);
  for (int n = 0; n < 3; ++n) {
    CHECK(data.std_errors(n) == 0.0);
    CHECK_NEAR(data.correlators(n), exact.correlators(n), 1e-12);
  }
}

TEST_CASE("the outcome histogram is a sufficient statistic") {
  // Computing E[K_j(u)] under the exact outcome distribution reproduces the
  // exact correlators, which validates the estimator without sampling noise.
  Rng rng(103);
  DensityMatrix rho = random_mixed(2, rng);
  MeasurementSetting setting = design_settings(2)[3];
  auto basis = detail::axis_eigenbasis<double>(setting.direction);
  LocalBasisChange rotate;
  for (int q = 0; q < 2; ++q) {
    rotate.unitaries.push_back(basis.adjoint());
  }
  DensityMatrix rotated = apply_local_basis(rho, rotate);
  // Outcome index probabilities sit on the rotated diagonal; aggregate by u.
  std::vector<double> pu(3, 0.0);
  for (int idx = 0; idx < 4; ++idx)
    pu[2 - std::popcount(static_cast<std::uint32_t>(idx))] +=
        rotated.entries(idx, idx).real();
  CHECK_NEAR(pu[0] + pu[1] + pu[2], 1.0, 1e-12);

  SettingData exact = exact_setting_data(rho, setting);
  for (int n = 0; n < 2; ++n) {
    int j = 2 - n;
    double mean = 0;
    for (int u = 0; u <= 2; ++u) mean += pu[u] * krawtchouk(2, j, u);
    CHECK_NEAR(factorial(j) * factorial(n) * mean, exact.correlators(n), 1e-12);
  }
}

TEST_CASE("exact reconstruction recovers all criterion coefficients") {
  Rng rng(107);
  for (int n = 3; n <= 6; ++n) {
    DensityMatrix rho = random_mixed(n, rng);
    PICoefficients truth = coeffs_from_dense(rho);
    ReconstructionResult r = reconstruct_coefficients(exact_data(rho, {}), n);
    CHECK(max_criterion_coefficient_error(r, truth) < 1e-10);
    CHECK_FALSE(r.sampled);
    REQUIRE(r.cond_yz.size() == n - 1);
    REQUIRE(r.resid_xz.size() == n - 1);
    CHECK(r.cond_yz.maxCoeff() < 1e6);
    CHECK(r.resid_yz.maxCoeff() < 1e-10);

    CriterionReport direct = evaluate_criterion(pi_project(rho));
    CriterionReport recon =
        evaluate_criterion(reconstruction_to_coefficients(r));
    CHECK_NEAR(direct.A, recon.A, 1e-9);
    CHECK_NEAR(direct.B, recon.B, 1e-9);
    CHECK_NEAR(direct.C, recon.C, 1e-9);
  }
}

TEST_CASE("reconstruction of the maximally mixed state is exactly sparse") {
  DensityMatrix id = mix_white_noise(density_from(make_ghz(4)), 1.0);
  ReconstructionResult r = reconstruct_coefficients(exact_data(id, {}), 4);
  for (int m = 1; m <= 4; ++m) CHECK_NEAR(r.e00(m - 1), 0.0, 1e-12);
  for (int m = 0; m <= 2; ++m) {
    CHECK_NEAR(r.e20(m), 0.0, 1e-12);
    CHECK_NEAR(r.e02(m), 0.0, 1e-12);
  }
}

TEST_CASE("supplement preset closed forms for the plane coefficients") {
  Rng rng(109);
  DensityMatrix rho = random_pi_density(3, rng);
  PICoefficients truth = coeffs_from_dense(rho);
  std::vector<SettingData> data = exact_data(rho, SettingPreset::kSupplement);

  // Full-weight symmetrized correlators of the two tilted settings in a
  // plane, minus the pure-z contribution, isolate one coefficient each.
  double corr_z = data[0].correlators(0);
  double e_0210 =
      std::sqrt(2.0) * (data[3].correlators(0) - data[4].correlators(0)) / 288 -
      corr_z / 288;
  double e_2010 =
      std::sqrt(2.0) * (data[5].correlators(0) - data[6].correlators(0)) / 288 -
      corr_z / 288;
  CHECK_NEAR(e_0210, truth.at(0, 2, 1), 1e-12);
  CHECK_NEAR(e_2010, truth.at(2, 0, 1), 1e-12);

  // The full solver on the supplement settings agrees too.
  ReconstructionResult r = reconstruct_coefficients(data, 3);
  CHECK(max_criterion_coefficient_error(r, truth) < 1e-10);
}

TEST_CASE("sampled reconstruction stays within propagated errors") {
  DensityMatrix rho = noisy_w_density(3, 0.5);
  PICoefficients truth = coeffs_from_dense(rho);
  std::vector<MeasurementSetting> settings = design_settings(3);
  std::vector<SettingData> data;
  for (std::size_t i = 0; i < settings.size(); ++i)
    data.push_back(sample_setting_data(rho, settings[i], 1000000,
                                       1000 + static_cast<std::uint64_t>(i)));
  ReconstructionResult r = reconstruct_coefficients(data, 3);
  REQUIRE(r.sampled);
  auto within = [](double est, double se, double exact) {
    return std::abs(est - exact) <= 5 * se + 5e-14;
  };
  for (int m = 1; m <= 3; ++m)
    CHECK(within(r.e00(m - 1), r.se00(m - 1), truth.at(0, 0, m)));
  for (int m = 0; m <= 1; ++m) {
    CHECK(within(r.e20(m), r.se20(m), truth.at(2, 0, m)));
    CHECK(within(r.e02(m), r.se02(m), truth.at(0, 2, m)));
  }
  CHECK(max_criterion_coefficient_error(r, truth) < 1e-2);
}

TEST_CASE("reconstruction input validation") {
  DensityMatrix rho = density_from(make_w(3));
  std::vector<SettingData> data = exact_data(rho, {});

  std::vector<SettingData> no_z(data.begin() + 1, data.end());
  CHECK_THROWS_AS(reconstruct_coefficients(no_z, 3), validation_error);

  std::vector<SettingData> dup = data;
  dup[2] = dup[1];  // two identical YZ angles
  CHECK_THROWS_AS(reconstruct_coefficients(dup, 3), validation_error);

  std::vector<SettingData> short_family(data.begin(), data.begin() + 3);
  CHECK_THROWS_AS(reconstruct_coefficients(short_family, 3), validation_error);

  CHECK_THROWS_AS(reconstruct_coefficients(data, 4), validation_error);

  std::vector<SettingData> two_z = data;
  two_z[1] = two_z[0];
  CHECK_THROWS_AS(reconstruct_coefficients(two_z, 3), validation_error);
}

}  // TEST_SUITE
