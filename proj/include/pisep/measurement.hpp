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

#ifndef PISEP_MEASUREMENT_HPP
#define PISEP_MEASUREMENT_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "pisep/local_basis.hpp"
#include "pisep/pi_coefficients.hpp"
#include "pisep/rng.hpp"
#include "pisep/states.hpp"
#include "pisep/types.hpp"

// Local measurement scheme for the separability-relevant coefficients of the
// PI part, using 2N+1 settings: in each setting every qubit is measured along
// the same axis A = a sx + b sy + c sz. One setting along z plus N in the
// y-z plane and N in the x-z plane determine the N^2 + 2N symmetrized
// expectations accessible this way; the criterion needs only 3N-2 of the
// underlying coefficients.
//
// A setting's data is summarized by the counts of u = number of +1 outcomes
// per shot. The symmetrized correlator of subset size j is estimated from u
// alone via the Krawtchouk-type sum
//
//   K_j(u) = sum_s (-1)^s C(N-u, s) C(u, j-s)
//          = sum over size-j subsets of the product of outcomes,
//
// so the histogram over u is a sufficient statistic for everything this
// module reconstructs.

namespace pisep {

enum class SettingFamily { kZAxis, kYZPlane, kXZPlane };

inline const char* family_name(SettingFamily f) {
  switch (f) {
    case SettingFamily::kZAxis: return "Z_AXIS";
    case SettingFamily::kYZPlane: return "YZ_PLANE";
    case SettingFamily::kXZPlane: return "XZ_PLANE";
  }
  return "?";
}

struct MeasurementSetting {
  Eigen::Vector3d direction;  // unit vector (a, b, c)
  SettingFamily family = SettingFamily::kZAxis;
};

enum class SettingPreset { kDefault, kSupplement };

// The measurement design: one z setting, then N y-z plane directions
// (0, sin t_i, cos t_i) and N x-z plane directions (sin t_i, 0, cos t_i)
// at t_i = (2i+1) pi / (4N), i = 0..N-1. The angles are distinct modulo pi,
// which keeps every per-n design matrix nonsingular.
//
// kSupplement is the published 7-observable design for N = 3:
// sz, sx, sy, (sy +- sz)/sqrt(2), (sx +- sz)/sqrt(2).
inline std::vector<MeasurementSetting> design_settings(
    int n_qubits, SettingPreset preset = SettingPreset::kDefault) {
  if (n_qubits < 2)
    throw validation_error("design_settings: needs at least 2 qubits");
  const double pi = 3.14159265358979323846;
  std::vector<MeasurementSetting> out;
  if (preset == SettingPreset::kSupplement) {
    if (n_qubits != 3)
      throw validation_error(
          "design_settings: the supplement preset is defined for 3 qubits only");
    double s = 1.0 / std::sqrt(2.0);
    out.push_back({{0, 0, 1}, SettingFamily::kZAxis});
    out.push_back({{1, 0, 0}, SettingFamily::kXZPlane});
    out.push_back({{0, 1, 0}, SettingFamily::kYZPlane});
    out.push_back({{0, s, s}, SettingFamily::kYZPlane});
    out.push_back({{0, s, -s}, SettingFamily::kYZPlane});
    out.push_back({{s, 0, s}, SettingFamily::kXZPlane});
    out.push_back({{s, 0, -s}, SettingFamily::kXZPlane});
    return out;
  }
  out.push_back({{0, 0, 1}, SettingFamily::kZAxis});
  for (int i = 0; i < n_qubits; ++i) {
    double t = (2 * i + 1) * pi / (4 * n_qubits);
    out.push_back({{0, std::sin(t), std::cos(t)}, SettingFamily::kYZPlane});
  }
  for (int i = 0; i < n_qubits; ++i) {
    double t = (2 * i + 1) * pi / (4 * n_qubits);
    out.push_back({{std::sin(t), 0, std::cos(t)}, SettingFamily::kXZPlane});
  }
  return out;
}

// Number of real parameters the full design determines: N from the z setting
// plus, for each n = 0..N-1, N-n unknowns from each of the two plane
// families; total N^2 + 2N.
inline int parameter_count(int n_qubits) {
  if (n_qubits < 2)
    throw validation_error("parameter_count: needs at least 2 qubits");
  return n_qubits * (n_qubits + 2);
}

struct SettingData {
  MeasurementSetting setting;
  int n_qubits = 0;
  Eigen::VectorXd correlators;  // symmetrized correlator, indexed n = 0..N-1
  std::optional<std::int64_t> shots;        // nullopt means exact values
  std::vector<std::int64_t> histogram;      // counts of u = 0..N; empty if exact
  std::optional<std::uint64_t> seed;
  Eigen::VectorXd std_errors;  // per-n standard error; size 0 if exact
};

inline void check_unit_direction(const Eigen::Vector3d& d, const char* where) {
  if (std::abs(d.norm() - 1.0) > 1e-9)
    throw validation_error(std::string(where) +
                           ": measurement direction must be a unit vector");
}

// K_j(u) as defined above; integer-valued.
inline double krawtchouk(int n_qubits, int j, int u) {
  double acc = 0;
  for (int s = 0; s <= j; ++s) {
    double term = binomial(n_qubits - u, s) * binomial(u, j - s);
    acc += (s & 1) ? -term : term;
  }
  return acc;
}

namespace detail {

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> axis_observable(
    const Eigen::Vector3d& d) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 2, 2> a;
  a(0, 0) = C(d(2), 0);
  a(0, 1) = C(d(0), -d(1));
  a(1, 0) = C(d(0), d(1));
  a(1, 1) = C(-d(2), 0);
  return a;
}

// Tr(rho A_S) where A_S applies the observable on the qubits of `mask` and
// the identity elsewhere. The identity factors force equal bits outside the
// subset, so the trace runs over 2^N columns times 2^|S| row choices, with
// the per-position observable entries accumulated along a DFS.
template <typename Scalar>
std::complex<Scalar> subset_trace(
    const DensityMatrixT<Scalar>& rho, std::uint64_t mask,
    const Eigen::Matrix<std::complex<Scalar>, 2, 2>& a) {
  std::vector<int> pos;
  for (int q = 0; q < rho.n_qubits; ++q)
    if ((mask >> q) & 1) pos.push_back(q);
  int j = static_cast<int>(pos.size());
  std::int64_t d = dim_of(rho.n_qubits);
  std::complex<Scalar> total(0, 0);
  for (std::int64_t t = 0; t < d; ++t) {
    std::int64_t base = t & ~static_cast<std::int64_t>(mask);
    auto rec = [&](auto&& self, int r, std::int64_t s,
                   std::complex<Scalar> prod) -> void {
      if (r == j) {
        total += rho.entries(t, s) * prod;
        return;
      }
      int tbit = static_cast<int>((t >> pos[r]) & 1);
      self(self, r + 1, s, prod * a(0, tbit));
      self(self, r + 1, s | (std::int64_t{1} << pos[r]), prod * a(1, tbit));
    };
    rec(rec, 0, base, std::complex<Scalar>(1, 0));
  }
  return total;
}

// Eigenbasis of the axis observable: columns are the +1 and -1 eigenvectors.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> axis_eigenbasis(
    const Eigen::Vector3d& d) {
  using C = std::complex<Scalar>;
  double a = d(0), b = d(1), c = d(2);
  Eigen::Matrix<C, 2, 2> v;
  if (1 + c > 1e-12) {
    double norm = std::sqrt(2 * (1 + c));
    v(0, 0) = C((1 + c) / norm, 0);
    v(1, 0) = C(a / norm, b / norm);
    v(0, 1) = C(-a / norm, b / norm);
    v(1, 1) = C((1 + c) / norm, 0);
  } else {
    // c ~ -1: the generic formulas above degenerate; use the 1-c branch.
    double norm = std::sqrt(2 * (1 - c));
    v(0, 0) = C(a / norm, -b / norm);
    v(1, 0) = C((1 - c) / norm, 0);
    v(0, 1) = C(-(1 - c) / norm, 0);
    v(1, 1) = C(a / norm, b / norm);
  }
  return v;
}

}  // namespace detail

// Exact (infinite-shot) data for one setting, computed directly from the
// dense matrix: correlator[n] = (N-n)! n! sum_{|S|=N-n} Tr(rho A_S). The
// symmetrized observable is permutation invariant, so this equals the value
// on pi_project(rho) with no projection performed.
template <typename Scalar>
SettingData exact_setting_data(const DensityMatrixT<Scalar>& rho,
                               const MeasurementSetting& setting) {
  check_unit_direction(setting.direction, "exact_setting_data");
  int N = rho.n_qubits;
  auto a2 = detail::axis_observable<Scalar>(setting.direction);
  std::vector<std::complex<Scalar>> sums(N + 1, std::complex<Scalar>(0, 0));
  std::int64_t d = dim_of(N);
  for (std::int64_t mask = 1; mask < d; ++mask)
    sums[std::popcount(static_cast<std::uint64_t>(mask))] +=
        detail::subset_trace(rho, static_cast<std::uint64_t>(mask), a2);

  SettingData out;
  out.setting = setting;
  out.n_qubits = N;
  out.correlators.resize(N);
  for (int n = 0; n < N; ++n) {
    std::complex<Scalar> s = sums[N - n];
    if (std::abs(s.imag()) > 1e-9)
      throw numerical_error(
          "exact_setting_data: non-real correlator (imaginary part " +
          std::to_string(static_cast<double>(s.imag())) + ")");
    out.correlators(n) = factorial(N - n) * factorial(n) * s.real();
  }
  return out;
}

// Exact data evaluated from a coefficient table instead of a dense matrix.
template <typename Scalar>
SettingData exact_setting_data(const PICoefficientsT<Scalar>& coeffs,
                               const MeasurementSetting& setting) {
  check_unit_direction(setting.direction, "exact_setting_data");
  int N = coeffs.n_qubits;
  SettingData out;
  out.setting = setting;
  out.n_qubits = N;
  out.correlators.resize(N);
  Eigen::Matrix<Scalar, 3, 1> dir = setting.direction.cast<Scalar>();
  for (int n = 0; n < N; ++n)
    out.correlators(n) = symmetrized_expectation(coeffs, dir, n);
  return out;
}

// Finite-shot simulation: rotates the state into the per-qubit eigenbasis of
// the axis observable, samples z-basis outcomes, and keeps only the count u
// of +1 outcomes per shot. Correlators and their standard errors come from
// the u histogram via K_j.
template <typename Scalar>
SettingData sample_setting_data(const DensityMatrixT<Scalar>& rho,
                                const MeasurementSetting& setting,
                                std::int64_t shots, std::uint64_t seed) {
  check_unit_direction(setting.direction, "sample_setting_data");
  if (shots < 1)
    throw validation_error("sample_setting_data: shots must be >= 1");
  int N = rho.n_qubits;
  std::int64_t d = dim_of(N);

  auto v = detail::axis_eigenbasis<Scalar>(setting.direction);
  LocalBasisChangeT<Scalar> basis;
  basis.unitaries.assign(N, v.adjoint());
  DensityMatrixT<Scalar> rotated = apply_local_basis(rho, basis);

  std::vector<double> cdf(d);
  double acc = 0;
  for (std::int64_t i = 0; i < d; ++i) {
    double p = rotated.entries(i, i).real();
    acc += p > 0 ? p : 0;
    cdf[i] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-9)
    throw numerical_error(
        "sample_setting_data: outcome probabilities do not sum to 1");

  // Outcome bit 0 means eigenvalue +1, so u = N - popcount(index).
  std::vector<std::int64_t> hist(N + 1, 0);
  Rng rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    std::int64_t idx = static_cast<std::int64_t>(rng.categorical(cdf));
    ++hist[N - std::popcount(static_cast<std::uint64_t>(idx))];
  }

  SettingData out;
  out.setting = setting;
  out.n_qubits = N;
  out.shots = shots;
  out.seed = seed;
  out.histogram = hist;
  out.correlators.resize(N);
  out.std_errors.resize(N);
  double s_total = static_cast<double>(shots);
  for (int n = 0; n < N; ++n) {
    int j = N - n;
    double mean = 0, mean2 = 0;
    for (int u = 0; u <= N; ++u) {
      if (hist[u] == 0) continue;
      double kv = krawtchouk(N, j, u);
      double w = static_cast<double>(hist[u]) / s_total;
      mean += w * kv;
      mean2 += w * kv * kv;
    }
    double mult = factorial(j) * factorial(n);
    double var = std::max(0.0, mean2 - mean * mean);
    out.correlators(n) = mult * mean;
    out.std_errors(n) = mult * std::sqrt(var / s_total);
  }
  return out;
}

// Everything the linear inversion recovers, plus solve diagnostics. The
// criterion consumes e00 / e20 / e02; the complete per-n solution vectors
// are retained because the design determines more than the criterion needs
// (parameter_count(N) values in total).
struct ReconstructionResult {
  int n_qubits = 0;
  Eigen::VectorXd e00;  // e_{0,0,m,N-m}, entry m-1 for m = 1..N
  Eigen::VectorXd e20;  // e_{2,0,m,N-2-m}, entry m for m = 0..N-2
  Eigen::VectorXd e02;  // e_{0,2,m,N-2-m}, entry m for m = 0..N-2
  bool sampled = false;
  Eigen::VectorXd se00, se20, se02;        // standard errors; size 0 if exact
  Eigen::VectorXd cond_yz, cond_xz;        // per n = 0..N-2
  Eigen::VectorXd resid_yz, resid_xz;      // per n = 0..N-2
  std::vector<Eigen::VectorXd> full_yz, full_xz;  // all unknowns per n
};

// Sparse coefficient table carrying exactly the reconstructed entries (plus
// the fixed normalization e_{000N}); sufficient for the criterion.
inline PICoefficients reconstruction_to_coefficients(
    const ReconstructionResult& r) {
  PICoefficients c = PICoefficients::zero(r.n_qubits);
  c.at(0, 0, 0) = 1.0 / (factorial(r.n_qubits) * pow2d(r.n_qubits));
  for (int m = 1; m <= r.n_qubits; ++m) c.at(0, 0, m) = r.e00(m - 1);
  for (int m = 0; m <= r.n_qubits - 2; ++m) {
    c.at(2, 0, m) = r.e20(m);
    c.at(0, 2, m) = r.e02(m);
  }
  return c;
}

// Linear inversion of the measured correlators.
//
// Z setting: correlator[n] determines e_{0,0,N-n,n} directly.
// Plane family at direction (0, b, c) (or (a, 0, c)), identity count n,
// subset size j = N - n:
//
//   corr[n] = kappa sum_{l=0}^{j} e_l b^l c^(j-l),  kappa = j! 2^N N! n!,
//
// where e_l is e_{0,l,j-l,n} (YZ) or e_{l,0,j-l,n} (XZ). The l = 0 term is
// known from the z setting and moves to the right-hand side; the remaining
// l = 1..j unknowns are solved by least squares over the family's settings
// for each n = 0..N-2. Standard errors propagate through the solve,
// including the rank-one covariance from the shared z-derived subtraction.
inline ReconstructionResult reconstruct_coefficients(
    const std::vector<SettingData>& data, int n_qubits) {
  int N = n_qubits;
  if (N < 2)
    throw validation_error("reconstruct_coefficients: needs at least 2 qubits");

  const SettingData* z = nullptr;
  std::vector<const SettingData*> yz, xz;
  for (const SettingData& sd : data) {
    if (sd.n_qubits != N)
      throw validation_error(
          "reconstruct_coefficients: setting data for wrong qubit count");
    if (sd.correlators.size() != N)
      throw validation_error(
          "reconstruct_coefficients: correlator vector has wrong length");
    check_unit_direction(sd.setting.direction, "reconstruct_coefficients");
    switch (sd.setting.family) {
      case SettingFamily::kZAxis:
        if (z)
          throw validation_error(
              "reconstruct_coefficients: expected exactly one Z_AXIS setting");
        if ((sd.setting.direction - Eigen::Vector3d(0, 0, 1)).norm() > 1e-9)
          throw validation_error(
              "reconstruct_coefficients: Z_AXIS direction must be (0, 0, 1)");
        z = &sd;
        break;
      case SettingFamily::kYZPlane:
        if (std::abs(sd.setting.direction(0)) > 1e-9)
          throw validation_error(
              "reconstruct_coefficients: YZ_PLANE setting has nonzero x component");
        yz.push_back(&sd);
        break;
      case SettingFamily::kXZPlane:
        if (std::abs(sd.setting.direction(1)) > 1e-9)
          throw validation_error(
              "reconstruct_coefficients: XZ_PLANE setting has nonzero y component");
        xz.push_back(&sd);
        break;
    }
  }
  if (!z)
    throw validation_error("reconstruct_coefficients: missing Z_AXIS setting");
  for (auto [family, group] :
       {std::pair{"YZ_PLANE", &yz}, std::pair{"XZ_PLANE", &xz}}) {
    if (static_cast<int>(group->size()) < N)
      throw validation_error(std::string("reconstruct_coefficients: need at "
                                         "least N settings in family ") +
                             family);
    for (std::size_t i = 0; i < group->size(); ++i)
      for (std::size_t jx = i + 1; jx < group->size(); ++jx) {
        const Eigen::Vector3d& di = (*group)[i]->setting.direction;
        const Eigen::Vector3d& dj = (*group)[jx]->setting.direction;
        double wi = family[0] == 'Y' ? di(1) : di(0);
        double wj = family[0] == 'Y' ? dj(1) : dj(0);
        if (std::abs(wi * dj(2) - wj * di(2)) < 1e-9)
          throw validation_error(std::string("reconstruct_coefficients: two ") +
                                 family +
                                 " settings have the same angle modulo pi");
      }
  }

  ReconstructionResult out;
  out.n_qubits = N;
  out.sampled = false;
  for (const SettingData& sd : data)
    if (sd.shots) out.sampled = true;

  auto setting_var = [](const SettingData* sd, int n) {
    if (sd->std_errors.size() == 0) return 0.0;
    double se = sd->std_errors(n);
    return se * se;
  };

  // z back-substitution: e_{00m,N-m} = corrZ[N-m] / (m! 2^N N! (N-m)!).
  std::vector<double> e00(N + 1), var_e00(N + 1, 0.0);
  e00[0] = 1.0 / (factorial(N) * pow2d(N));
  for (int m = 1; m <= N; ++m) {
    double divisor = factorial(m) * pow2d(N) * factorial(N) * factorial(N - m);
    e00[m] = z->correlators(N - m) / divisor;
    var_e00[m] = setting_var(z, N - m) / (divisor * divisor);
  }
  out.e00.resize(N);
  for (int m = 1; m <= N; ++m) out.e00(m - 1) = e00[m];

  out.e20.resize(N - 1);
  out.e02.resize(N - 1);
  out.cond_yz.resize(N - 1);
  out.cond_xz.resize(N - 1);
  out.resid_yz.resize(N - 1);
  out.resid_xz.resize(N - 1);
  if (out.sampled) {
    out.se00.resize(N);
    for (int m = 1; m <= N; ++m) out.se00(m - 1) = std::sqrt(var_e00[m]);
    out.se20.resize(N - 1);
    out.se02.resize(N - 1);
  }

  for (int fam = 0; fam < 2; ++fam) {
    const std::vector<const SettingData*>& group = fam == 0 ? yz : xz;
    int rows = static_cast<int>(group.size());
    for (int n = 0; n <= N - 2; ++n) {
      int j = N - n;
      double kappa = factorial(j) * pow2d(N) * factorial(N) * factorial(n);
      Eigen::MatrixXd m(rows, j);
      Eigen::VectorXd y(rows), sub(rows), var_corr(rows);
      for (int i = 0; i < rows; ++i) {
        const Eigen::Vector3d& dir = group[i]->setting.direction;
        double w = fam == 0 ? dir(1) : dir(0);
        double c = dir(2);
        for (int l = 1; l <= j; ++l)
          m(i, l - 1) = kappa * std::pow(w, l) * std::pow(c, j - l);
        sub(i) = kappa * std::pow(c, j);
        y(i) = group[i]->correlators(n) - sub(i) * e00[j];
        var_corr(i) = setting_var(group[i], n);
      }

      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXd& sv = svd.singularValues();
      double cond = sv(sv.size() - 1) > 0
                        ? sv(0) / sv(sv.size() - 1)
                        : std::numeric_limits<double>::infinity();
      if (!(cond < 1e10))
        throw numerical_error(
            std::string("reconstruct_coefficients: design matrix for family ") +
            (fam == 0 ? "YZ_PLANE" : "XZ_PLANE") + " at n = " +
            std::to_string(n) + " is ill-conditioned (cond = " +
            std::to_string(cond) + ")");
      Eigen::VectorXd x = svd.solve(y);
      double resid = (m * x - y).norm();

      (fam == 0 ? out.cond_yz : out.cond_xz)(n) = cond;
      (fam == 0 ? out.resid_yz : out.resid_xz)(n) = resid;
      (fam == 0 ? out.e02 : out.e20)(j - 2) = x(1);  // l = 2 unknown, m = j-2
      (fam == 0 ? out.full_yz : out.full_xz).push_back(x);

      if (out.sampled) {
        // cov(y) = diag(var_corr) + var(e00[j]) sub sub^T (the z-derived
        // subtraction is common to every row).
        Eigen::MatrixXd cov_y = var_corr.asDiagonal();
        cov_y += var_e00[j] * sub * sub.transpose();
        Eigen::MatrixXd pinv = svd.matrixV() *
                               sv.cwiseInverse().asDiagonal() *
                               svd.matrixU().transpose();
        Eigen::MatrixXd cov_x = pinv * cov_y * pinv.transpose();
        (fam == 0 ? out.se02 : out.se20)(j - 2) =
            std::sqrt(std::max(0.0, cov_x(1, 1)));
      }
    }
  }
  return out;
}

}  // namespace pisep

#endif  // PISEP_MEASUREMENT_HPP
