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

#ifndef PISEP_TYPES_HPP
#define PISEP_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace pisep {

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Dense matrices are held in full; 2^12 x 2^12 complex doubles (~256 MB) is
// the largest size we are willing to materialize.
inline constexpr int kDenseMaxQubits = 12;

// Tolerances used by validation and by the separability criterion. These are
// part of the observable contract (error behaviour and verdicts), so they are
// named constants rather than scattered literals.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kPiThreshold = 1e-9;
inline constexpr double kDetectionTol = 1e-12;

// Bad input (wrong sizes, unnormalized states, out-of-range parameters).
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation produced a result that fails an internal consistency check
// (non-real expectation of a Hermitian observable, ill-conditioned solve, ...).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system or serialization failure.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::int64_t dim_of(int n_qubits) {
  return std::int64_t{1} << n_qubits;
}

// 2^n as a double, exact for any n we can represent densely or as a
// coefficient table.
inline double pow2d(int n) { return std::ldexp(1.0, n); }

// n! as a double. Exact (from a 64-bit integer table) through n = 20; larger
// arguments fall back to logarithmic accumulation via lgamma, which is
// adequate because every quantity needing factorials beyond 20 is itself a
// ratio where the rounding largely cancels.
inline double factorial(int n) {
  if (n < 0) throw validation_error("factorial: negative argument");
  static constexpr std::uint64_t exact[21] = {
      1ull,
      1ull,
      2ull,
      6ull,
      24ull,
      120ull,
      720ull,
      5040ull,
      40320ull,
      362880ull,
      3628800ull,
      39916800ull,
      479001600ull,
      6227020800ull,
      87178291200ull,
      1307674368000ull,
      20922789888000ull,
      355687428096000ull,
      6402373705728000ull,
      121645100408832000ull,
      2432902008176640000ull};
  if (n <= 20) return static_cast<double>(exact[n]);
  return std::exp(std::lgamma(static_cast<double>(n) + 1.0));
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  // Multiplicative form keeps intermediate values small and exact for the
  // ranges used here (n <= 30 or so).
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / (i + 1);
  return std::round(r);
}

}  // namespace pisep

#endif  // PISEP_TYPES_HPP
