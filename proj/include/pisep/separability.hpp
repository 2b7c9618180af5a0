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

#ifndef PISEP_SEPARABILITY_HPP
#define PISEP_SEPARABILITY_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pisep/local_basis.hpp"
#include "pisep/pi_coefficients.hpp"
#include "pisep/pi_projection.hpp"
#include "pisep/rng.hpp"
#include "pisep/states.hpp"
#include "pisep/types.hpp"

// k-separability test built from three scalars of the density matrix
// (indices are 0-based computational basis indices):
//
//   A = sum_{i<j} |rho(2^i, 2^j)|
//   B = sum_{i<j} sqrt(rho(0,0) rho(2^i + 2^j, 2^i + 2^j))
//   C = sum_i rho(2^i, 2^i)
//
// Every k-separable state obeys A <= B + C (N - k)/2; the state is certified
// k-nonseparable when A exceeds that bound (by more than kDetectionTol).
// Solving the boundary for k gives the degree of separability
//
//   k_eff = N - 2 (A - B) / C,
//
// undefined when C vanishes: states with no single-excitation population
// (GHZ states, for example) are invisible to this test.

namespace pisep {

enum class Verdict { kNonseparable, kNotDetected };

struct CriterionScalars {
  double A, B, C;
};

template <typename Scalar = double>
struct CriterionReportT {
  int n_qubits = 0;
  Scalar A = 0, B = 0, C = 0;
  std::optional<Scalar> k_eff;
  std::vector<Verdict> verdicts;  // verdicts[k-2] is the level-k verdict

  bool detected_at(int k) const {
    if (k < 2 || k > n_qubits)
      throw validation_error("CriterionReport: level k out of [2, N]");
    return verdicts[k - 2] == Verdict::kNonseparable;
  }
};
using CriterionReport = CriterionReportT<double>;

namespace detail {

inline double criterion_diag(double value, const char* which) {
  if (value < kEigenvalueFloor)
    throw validation_error(std::string("compute_abc: diagonal entry ") + which +
                           " is negative beyond tolerance (" +
                           std::to_string(value) + ")");
  return value < 0 ? 0.0 : value;
}

}  // namespace detail

template <typename Scalar>
CriterionScalars compute_abc(const DensityMatrixT<Scalar>& rho) {
  int N = rho.n_qubits;
  if (N < 2) throw validation_error("compute_abc: needs at least 2 qubits");
  double a = 0, b = 0, c = 0;
  double d00 = detail::criterion_diag(rho.entries(0, 0).real(), "(0,0)");
  for (int i = 0; i < N; ++i) {
    std::int64_t ei = std::int64_t{1} << i;
    c += detail::criterion_diag(rho.entries(ei, ei).real(), "(2^i,2^i)");
    for (int j = i + 1; j < N; ++j) {
      std::int64_t ej = std::int64_t{1} << j;
      a += std::abs(rho.entries(ei, ej));
      double dij = detail::criterion_diag(
          rho.entries(ei + ej, ei + ej).real(), "(2^i+2^j,2^i+2^j)");
      b += std::sqrt(d00 * dij);
    }
  }
  return {a, b, c};
}

inline CriterionReport make_criterion_report(int n_qubits,
                                             const CriterionScalars& s) {
  CriterionReport r;
  r.n_qubits = n_qubits;
  r.A = s.A;
  r.B = s.B;
  r.C = s.C;
  if (s.C > kDetectionTol) r.k_eff = n_qubits - 2.0 * (s.A - s.B) / s.C;
  r.verdicts.reserve(n_qubits - 1);
  for (int k = 2; k <= n_qubits; ++k) {
    bool violated = s.A > s.B + s.C * (n_qubits - k) / 2.0 + kDetectionTol;
    r.verdicts.push_back(violated ? Verdict::kNonseparable
                                  : Verdict::kNotDetected);
  }
  return r;
}

// Criterion applied to the matrix as given (dense path).
template <typename Scalar>
CriterionReport evaluate_criterion(const DensityMatrixT<Scalar>& rho) {
  return make_criterion_report(rho.n_qubits, compute_abc(rho));
}

// Criterion applied to a coefficient table (coefficient path). For a PI
// matrix the single-excitation entries are all equal, so
//   A = |offdiag| N(N-1)/2,  B = sqrt(d0 d2) N(N-1)/2,  C = N d1.
// Small negative diagonals are clamped to zero here rather than rejected:
// shot-noise reconstructions legitimately scatter around zero.
template <typename Scalar>
CriterionReport evaluate_criterion(const PICoefficientsT<Scalar>& coeffs) {
  int N = coeffs.n_qubits;
  if (N < 2)
    throw validation_error("evaluate_criterion: needs at least 2 qubits");
  CriterionElements el = criterion_elements_from_coeffs(coeffs);
  double pairs = N * (N - 1) / 2.0;
  double d0 = std::max(el.d0, 0.0);
  double d2 = std::max(el.d2, 0.0);
  CriterionScalars s{std::abs(el.offdiag) * pairs, std::sqrt(d0 * d2) * pairs,
                     N * el.d1};
  return make_criterion_report(N, s);
}

// ---------------------------------------------------------------------------
// W state mixed with white noise: rho_N(p) = (1-p) |W_N><W_N| + p I / 2^N.

template <typename Scalar = double>
DensityMatrixT<Scalar> noisy_w_density(int n_qubits, Scalar p) {
  return mix_white_noise(density_from(make_w<Scalar>(n_qubits)), p);
}

// Criterion scalars of rho_N(p) in closed form, valid for any N (no dense
// matrix involved):
//   A = (N-1)(1-p)/2,  B = N(N-1)/2 p/2^N,  C = (1-p) + N p/2^N.
inline CriterionScalars noisy_w_abc(int n_qubits, double p) {
  if (n_qubits < 2)
    throw validation_error("noisy_w_abc: needs at least 2 qubits");
  if (p < 0 || p > 1)
    throw validation_error("noisy_w_abc: p must lie in [0, 1]");
  double N = n_qubits;
  double q = p / pow2d(n_qubits);
  return {(N - 1) * (1 - p) / 2, N * (N - 1) / 2 * q, (1 - p) + N * q};
}

// Degree of separability of the noisy W family:
//   k_eff(p, N) = [2^N - (2^N + N - 2N^2) p] / [2^N + (N - 2^N) p].
// The denominator is positive on p in [0, 1], so this is always defined.
inline double w_noise_keff(int n_qubits, double p) {
  if (n_qubits < 2)
    throw validation_error("w_noise_keff: needs at least 2 qubits");
  if (p < 0 || p > 1)
    throw validation_error("w_noise_keff: p must lie in [0, 1]");
  double N = n_qubits;
  double t = pow2d(n_qubits);
  return (t - (t + N - 2 * N * N) * p) / (t + (N - t) * p);
}

// Smallest p at which k-nonseparability of rho_N(p) is no longer detected,
// i.e. the root of k_eff(p, N) = k:
//   p* = 2^N (k - 1) / [k (2^N - N) - (2^N + N - 2N^2)].
// k_eff is monotone in p and k <= N <= 2N-1 keeps the root inside [0, 1].
// The algebraic root is cross-checked against bisection before returning.
inline double w_noise_detection_threshold(int n_qubits, int k) {
  if (n_qubits < 2)
    throw validation_error("w_noise_detection_threshold: needs at least 2 qubits");
  if (k < 2 || k > n_qubits)
    throw validation_error(
        "w_noise_detection_threshold: level k must lie in [2, N]");
  double N = n_qubits;
  double t = pow2d(n_qubits);
  double p = t * (k - 1) / (k * (t - N) - (t + N - 2 * N * N));

  double lo = 0, hi = 1;  // k_eff(lo) = 1 < k <= k_eff(hi) = 2N-1
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = (lo + hi) / 2;
    (w_noise_keff(n_qubits, mid) < k ? lo : hi) = mid;
  }
  if (std::abs(p - (lo + hi) / 2) > 1e-12)
    throw numerical_error(
        "w_noise_detection_threshold: algebraic root disagrees with bisection");
  return p;
}

// ---------------------------------------------------------------------------
// Search over local product bases for the strongest violation.

template <typename Scalar = double>
struct BasisSearchResultT {
  CriterionReport best_report;
  LocalBasisChangeT<Scalar> best_basis;
  int best_restart = 0;  // 0 is the identity candidate
};
using BasisSearchResult = BasisSearchResultT<double>;

namespace detail {

// Objective for the basis search: k_eff of the PI part taken in the rotated
// frame (criterion entries read off the rotated matrix). Undefined k_eff is
// ranked worst.
template <typename Scalar>
double basis_objective(const DensityMatrixT<Scalar>& rho,
                       const std::vector<Scalar>& angles,
                       CriterionReport* out_report = nullptr) {
  int N = rho.n_qubits;
  LocalBasisChangeT<Scalar> basis;
  basis.unitaries.reserve(N);
  for (int q = 0; q < N; ++q)
    basis.unitaries.push_back(
        euler_unitary(angles[3 * q], angles[3 * q + 1], angles[3 * q + 2]));
  CriterionReport rep =
      evaluate_criterion(pi_project(apply_local_basis(rho, basis)));
  if (out_report) *out_report = rep;
  return rep.k_eff ? *rep.k_eff : std::numeric_limits<double>::infinity();
}

}  // namespace detail

// Minimizes k_eff of the basis-dependent PI part over per-qubit Euler angles:
// one identity candidate plus `restarts` random starts, each refined by
// coordinate-wise golden-section line searches (200 searches per candidate).
// Deterministic for a fixed seed; the identity candidate guarantees the
// result is never worse than the computational-basis report.
template <typename Scalar>
BasisSearchResultT<Scalar> maximize_over_bases(const DensityMatrixT<Scalar>& rho,
                                               int restarts,
                                               std::uint64_t seed) {
  if (restarts < 0)
    throw validation_error("maximize_over_bases: restarts must be >= 0");
  int N = rho.n_qubits;
  const int n_coords = 3 * N;
  const double golden = 0.618033988749894848;
  const double two_pi = 2 * 3.14159265358979323846;

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<Scalar> best_angles(n_coords, 0);
  int best_restart = 0;

  for (int r = 0; r <= restarts; ++r) {
    std::vector<Scalar> x(n_coords, 0);
    if (r > 0) {
      Rng rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(r));
      for (int i = 0; i < n_coords; ++i) x[i] = two_pi * rng.uniform();
    }
    double fx = detail::basis_objective(rho, x);

    // 200 line searches, cycling through the coordinates.
    for (int search = 0; search < 200; ++search) {
      int coord = search % n_coords;
      double lo = x[coord] - two_pi / 4, hi = x[coord] + two_pi / 4;
      double m1 = hi - golden * (hi - lo), m2 = lo + golden * (hi - lo);
      auto eval = [&](double v) {
        std::vector<Scalar> y = x;
        y[coord] = v;
        return detail::basis_objective(rho, y);
      };
      double f1 = eval(m1), f2 = eval(m2);
      for (int it = 0; it < 40; ++it) {
        if (f1 <= f2) {
          hi = m2;
          m2 = m1;
          f2 = f1;
          m1 = hi - golden * (hi - lo);
          f1 = eval(m1);
        } else {
          lo = m1;
          m1 = m2;
          f1 = f2;
          m2 = lo + golden * (hi - lo);
          f2 = eval(m2);
        }
      }
      double xn = f1 <= f2 ? m1 : m2;
      double fn = std::min(f1, f2);
      if (fn < fx) {
        x[coord] = xn;
        fx = fn;
      }
    }

    if (fx < best_obj) {
      best_obj = fx;
      best_angles = x;
      best_restart = r;
    }
  }

  BasisSearchResultT<Scalar> result;
  LocalBasisChangeT<Scalar> basis;
  for (int q = 0; q < N; ++q)
    basis.unitaries.push_back(euler_unitary(
        best_angles[3 * q], best_angles[3 * q + 1], best_angles[3 * q + 2]));
  result.best_basis = std::move(basis);
  detail::basis_objective(rho, best_angles, &result.best_report);
  result.best_restart = best_restart;
  return result;
}

}  // namespace pisep

#endif  // PISEP_SEPARABILITY_HPP
