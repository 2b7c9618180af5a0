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

#ifndef PISEP_PI_COEFFICIENTS_HPP
#define PISEP_PI_COEFFICIENTS_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "pisep/pauli.hpp"
#include "pisep/states.hpp"
#include "pisep/types.hpp"

// Symmetrized Pauli expansion of a PI density matrix:
//
//   rho_PI = sum_{k+l+m+n=N} e_klmn  S(x^k y^l z^m 1^n)
//
// where S(.) sums the tensor product sx^k x sy^l x sz^m x 1^n over all N!
// position permutations (with the k! l! m! n! repeats of each distinct
// arrangement counted individually). A PI matrix is fully described by the
// C(N+3, 3) real coefficients e_klmn; normalization fixes
// e_{000N} = 1 / (N! 2^N).
//
// Orthogonality of Pauli strings gives the extraction rule
//
//   e_klmn = <Tr(rho P)>_P / (k! l! m! n! 2^N)
//
// with the average running over the N!/(k! l! m! n!) distinct strings P of
// type (k, l, m, n); equivalently Tr(rho Q) summed over those strings and
// divided by N! 2^N.

namespace pisep {

struct Composition {
  int k, l, m, n;  // #X, #Y, #Z, #I; k + l + m + n = N
};

inline std::int64_t n_compositions(int n_qubits) {
  // C(N+3, 3)
  return static_cast<std::int64_t>(n_qubits + 1) * (n_qubits + 2) *
         (n_qubits + 3) / 6;
}

// All (k, l, m, n) with k + l + m + n = N, ordered lexicographically by
// (k, l, m). This order defines the table layout of PICoefficientsT.
inline std::vector<Composition> all_compositions(int n_qubits) {
  std::vector<Composition> out;
  out.reserve(n_compositions(n_qubits));
  for (int k = 0; k <= n_qubits; ++k)
    for (int l = 0; l + k <= n_qubits; ++l)
      for (int m = 0; m + l + k <= n_qubits; ++m)
        out.push_back({k, l, m, n_qubits - k - l - m});
  return out;
}

template <typename Scalar = double>
struct PICoefficientsT {
  int n_qubits = 0;
  std::vector<Scalar> table;  // indexed per all_compositions order

  static PICoefficientsT zero(int n_qubits) {
    return {n_qubits,
            std::vector<Scalar>(n_compositions(n_qubits), Scalar(0))};
  }

  int index(int k, int l, int m) const {
    int N = n_qubits;
    if (k < 0 || l < 0 || m < 0 || k + l + m > N)
      throw validation_error("PICoefficients: index (" + std::to_string(k) +
                             ", " + std::to_string(l) + ", " +
                             std::to_string(m) + ") out of range for N = " +
                             std::to_string(N));
    int idx = 0;
    for (int kk = 0; kk < k; ++kk)
      idx += (N - kk + 1) * (N - kk + 2) / 2;
    for (int ll = 0; ll < l; ++ll) idx += N - k - ll + 1;
    return idx + m;
  }

  Scalar& at(int k, int l, int m) { return table[index(k, l, m)]; }
  const Scalar& at(int k, int l, int m) const { return table[index(k, l, m)]; }
};
using PICoefficients = PICoefficientsT<double>;

namespace detail {

// Visits every distinct Pauli string of type (k, l, m, n) as bit masks.
// Letters are ordered I < X < Y < Z so that next_permutation from the sorted
// arrangement enumerates each multiset permutation exactly once.
template <typename Fn>
void for_each_string_of_type(const Composition& c, Fn&& fn) {
  int N = c.k + c.l + c.m + c.n;
  std::vector<std::uint8_t> letters;
  letters.reserve(N);
  letters.insert(letters.end(), c.n, 0);  // I
  letters.insert(letters.end(), c.k, 1);  // X
  letters.insert(letters.end(), c.l, 2);  // Y
  letters.insert(letters.end(), c.m, 3);  // Z
  do {
    std::uint64_t xm = 0, ym = 0, zm = 0;
    for (int i = 0; i < N; ++i) {
      std::uint64_t bit = std::uint64_t{1} << i;
      switch (letters[i]) {
        case 1: xm |= bit; break;
        case 2: ym |= bit; break;
        case 3: zm |= bit; break;
        default: break;
      }
    }
    fn(xm, ym, zm);
  } while (std::next_permutation(letters.begin(), letters.end()));
}

}  // namespace detail

// Expansion coefficients of the PI part of rho. The input need not be PI:
// averaging Tr(rho P) over each permutation type is itself the projection,
// so the result describes pi_project(rho).
template <typename Scalar>
PICoefficientsT<Scalar> coeffs_from_dense(const DensityMatrixT<Scalar>& rho) {
  int N = rho.n_qubits;
  PICoefficientsT<Scalar> out = PICoefficientsT<Scalar>::zero(N);
  Scalar denom = factorial(N) * pow2d(N);
  std::size_t idx = 0;
  for (const Composition& c : all_compositions(N)) {
    std::complex<Scalar> acc(0, 0);
    detail::for_each_string_of_type(
        c, [&](std::uint64_t xm, std::uint64_t ym, std::uint64_t zm) {
          acc += pauli_trace_raw(rho, xm, ym, zm);
        });
    out.table[idx++] = acc.real() / denom;
  }
  return out;
}

// Rebuilds the dense matrix sum_types e k! l! m! n! (sum of distinct strings
// of the type). Hermiticity and unit trace are verified on the result; any
// failure means the coefficient table did not describe a state.
template <typename Scalar>
DensityMatrixT<Scalar> dense_from_coeffs(const PICoefficientsT<Scalar>& coeffs) {
  int N = coeffs.n_qubits;
  check_dense_qubits(N, "dense_from_coeffs");
  if (static_cast<std::int64_t>(coeffs.table.size()) != n_compositions(N))
    throw validation_error("dense_from_coeffs: coefficient table has wrong size");
  std::int64_t d = dim_of(N);
  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(d, d);
  static const std::complex<Scalar> iphase[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::size_t idx = 0;
  for (const Composition& c : all_compositions(N)) {
    Scalar e = coeffs.table[idx++];
    if (e == Scalar(0)) continue;
    Scalar w = e * factorial(c.k) * factorial(c.l) * factorial(c.m) *
               factorial(c.n);
    std::complex<Scalar> base = w * iphase[c.l & 3];
    detail::for_each_string_of_type(
        c, [&](std::uint64_t xm, std::uint64_t ym, std::uint64_t zm) {
          std::uint64_t f = xm | ym;
          std::uint64_t sign_mask = ym | zm;
          for (std::int64_t t = 0; t < d; ++t) {
            std::complex<Scalar> v =
                (std::popcount(static_cast<std::uint64_t>(t) & sign_mask) & 1)
                    ? -base
                    : base;
            out(static_cast<std::int64_t>(t ^ f), t) += v;
          }
        });
  }
  DensityMatrixT<Scalar> rho{N, std::move(out)};
  double herm = (rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-9)
    throw validation_error(
        "dense_from_coeffs: coefficients produce a non-Hermitian matrix");
  if (std::abs(rho.entries.trace() - std::complex<Scalar>(1, 0)) > 1e-9)
    throw validation_error(
        "dense_from_coeffs: coefficients are not normalized (trace != 1); "
        "expected e(0,0,0," + std::to_string(N) + ") = 1/(N! 2^N)");
  return rho;
}

// The three matrix-element families entering the separability criterion,
// expressed through the coefficient table:
//   offdiag = rho(2^i, 2^j),  i != j   (all equal by symmetry)
//   d0      = rho(0, 0)
//   d1      = rho(2^i, 2^i)
//   d2      = rho(2^i + 2^j, 2^i + 2^j)
struct CriterionElements {
  double offdiag, d0, d1, d2;
};

template <typename Scalar>
CriterionElements criterion_elements_from_coeffs(
    const PICoefficientsT<Scalar>& c) {
  int N = c.n_qubits;
  if (N < 2)
    throw validation_error(
        "criterion_elements_from_coeffs: needs at least 2 qubits");
  double offdiag = 0, d0 = 0, d1 = 0, d2 = 0;
  for (int m = 0; m <= N - 2; ++m)
    offdiag += c.at(2, 0, m) + c.at(0, 2, m);
  offdiag *= 2 * factorial(N - 2);
  for (int m = 0; m <= N; ++m) {
    double e = c.at(0, 0, m);
    double w = N - 2 * m;
    d0 += e;
    d1 += w * e;
    d2 += (w * w - N) * e;
  }
  d0 *= factorial(N);
  d1 *= factorial(N - 1);
  d2 *= factorial(N - 2);
  return {offdiag, d0, d1, d2};
}

// The coefficients the 2N+1-setting scheme actually needs: all e_{00m,N-m}
// with m >= 1 plus the two k=2 / l=2 families, 3N-2 entries total.
inline std::vector<Composition> criterion_coefficient_indices(int n_qubits) {
  std::vector<Composition> out;
  for (int m = 1; m <= n_qubits; ++m) out.push_back({0, 0, m, n_qubits - m});
  for (int m = 0; m <= n_qubits - 2; ++m)
    out.push_back({2, 0, m, n_qubits - 2 - m});
  for (int m = 0; m <= n_qubits - 2; ++m)
    out.push_back({0, 2, m, n_qubits - 2 - m});
  return out;
}

// Expectation of the fully symmetrized observable S(A^(N-n) x 1^n) for the
// unit direction A = a sx + b sy + c sz:
//
//   sum_{k+l+m = N-n} e_klmn (N-n)! a^k b^l c^m 2^N N! n!
//
// This is the quantity a single measurement setting estimates.
template <typename Scalar>
Scalar symmetrized_expectation(const PICoefficientsT<Scalar>& coeffs,
                               const Eigen::Matrix<Scalar, 3, 1>& direction,
                               int n_identity) {
  int N = coeffs.n_qubits;
  if (n_identity < 0 || n_identity > N)
    throw validation_error("symmetrized_expectation: identity count " +
                           std::to_string(n_identity) + " out of [0, " +
                           std::to_string(N) + "]");
  if (std::abs(direction.norm() - Scalar(1)) > 1e-9)
    throw validation_error(
        "symmetrized_expectation: direction must be a unit vector");
  Scalar a = direction(0), b = direction(1), cz = direction(2);
  int j = N - n_identity;
  Scalar scale =
      factorial(j) * pow2d(N) * factorial(N) * factorial(n_identity);
  Scalar acc = 0;
  for (int k = 0; k <= j; ++k)
    for (int l = 0; l + k <= j; ++l) {
      int m = j - k - l;
      Scalar e = coeffs.at(k, l, m);
      if (e == Scalar(0)) continue;
      acc += e * std::pow(a, Scalar(k)) * std::pow(b, Scalar(l)) *
             std::pow(cz, Scalar(m));
    }
  return scale * acc;
}

}  // namespace pisep

#endif  // PISEP_PI_COEFFICIENTS_HPP
