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

#ifndef PISEP_PI_PROJECTION_HPP
#define PISEP_PI_PROJECTION_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "pisep/local_basis.hpp"
#include "pisep/states.hpp"
#include "pisep/types.hpp"

// Projection onto the permutationally invariant (PI) part:
//
//   rho_PI = (1/N!) sum_pi  Pi rho Pi^dag
//
// over all N! qubit permutations Pi. Simultaneously permuting rows and
// columns sends entry (s, t) to another entry whose per-position bit pairs
// (s_i, t_i) are a rearrangement of the original ones. Two entries therefore
// lie in the same group orbit exactly when they share the multiset of bit
// pairs, i.e. the four counts
//
//   n11 = |{i : s_i = 1, t_i = 1}|   n10 = |{i : s_i = 1, t_i = 0}|
//   n01 = |{i : s_i = 0, t_i = 1}|   n00 = N - n11 - n10 - n01
//
// and group averaging replaces every entry by the mean of its orbit. That
// reduces the projection to two O(4^N) passes keyed by (n01, n10, n11),
// with no permutation ever enumerated.

namespace pisep {

namespace detail {

inline int orbit_key(std::uint64_t s, std::uint64_t t, std::uint64_t mask,
                     int stride) {
  int n11 = std::popcount(s & t);
  int n10 = std::popcount(s & ~t & mask);
  int n01 = std::popcount(~s & t & mask);
  return n01 + stride * (n10 + stride * n11);
}

}  // namespace detail

template <typename Scalar>
DensityMatrixT<Scalar> pi_project(const DensityMatrixT<Scalar>& rho) {
  int n = rho.n_qubits;
  check_dense_qubits(n, "pi_project");
  std::int64_t d = dim_of(n);
  if (rho.entries.rows() != d || rho.entries.cols() != d)
    throw validation_error("pi_project: entries shape does not match n_qubits");
  std::uint64_t mask = static_cast<std::uint64_t>(d - 1);
  int stride = n + 1;
  std::vector<std::complex<Scalar>> sums(stride * stride * stride,
                                         std::complex<Scalar>(0, 0));
  std::vector<std::int64_t> counts(sums.size(), 0);

  for (std::int64_t s = 0; s < d; ++s)
    for (std::int64_t t = 0; t < d; ++t) {
      int key = detail::orbit_key(s, t, mask, stride);
      sums[key] += rho.entries(s, t);
      ++counts[key];
    }

  ComplexMatrix<Scalar> out(d, d);
  for (std::int64_t s = 0; s < d; ++s)
    for (std::int64_t t = 0; t < d; ++t) {
      int key = detail::orbit_key(s, t, mask, stride);
      out(s, t) = sums[key] / Scalar(counts[key]);
    }
  return {n, std::move(out)};
}

// Reference implementation: averages Pi rho Pi^dag over all N! permutations
// explicitly. Exponentially slower than pi_project and capped accordingly;
// exists to pin the fast path down in tests.
template <typename Scalar>
DensityMatrixT<Scalar> pi_project_naive(const DensityMatrixT<Scalar>& rho) {
  int n = rho.n_qubits;
  if (n > 6)
    throw validation_error(
        "pi_project_naive: factorial-cost reference capped at 6 qubits, got " +
        std::to_string(n));
  std::int64_t d = dim_of(n);
  ComplexMatrix<Scalar> acc = ComplexMatrix<Scalar>::Zero(d, d);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t count = 0;
  do {
    std::vector<std::int64_t> map(d);
    for (std::int64_t b = 0; b < d; ++b) map[b] = permute_bits(b, perm);
    for (std::int64_t s = 0; s < d; ++s)
      for (std::int64_t t = 0; t < d; ++t)
        acc(map[s], map[t]) += rho.entries(s, t);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  acc /= Scalar(count);
  return {n, std::move(acc)};
}

// Frobenius distance to the PI part; 0 exactly when rho is already PI.
template <typename Scalar>
Scalar pi_distance(const DensityMatrixT<Scalar>& rho) {
  return (rho.entries - pi_project(rho).entries).norm();
}

template <typename Scalar>
bool is_pi(const DensityMatrixT<Scalar>& rho) {
  return pi_distance(rho) < Scalar(kPiThreshold);
}

// PI part taken in the product basis defined by B, expressed back in the
// computational basis: B^dag P[B rho B^dag] B. The result is generally not
// PI in the computational basis; it is PI in the rotated one.
template <typename Scalar>
DensityMatrixT<Scalar> pi_project_in_basis(const DensityMatrixT<Scalar>& rho,
                                           const LocalBasisChangeT<Scalar>& basis) {
  DensityMatrixT<Scalar> rotated = apply_local_basis(rho, basis);
  DensityMatrixT<Scalar> projected = pi_project(rotated);
  return apply_local_basis(projected, basis.adjoint());
}

}  // namespace pisep

#endif  // PISEP_PI_PROJECTION_HPP
