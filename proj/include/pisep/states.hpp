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

#ifndef PISEP_STATES_HPP
#define PISEP_STATES_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pisep/rng.hpp"
#include "pisep/types.hpp"

// N-qubit pure states and density matrices in the computational basis.
//
// Index convention used throughout: qubit i is bit i of the basis index, with
// qubit 0 the least significant bit. In ket notation |b_{N-1} ... b_1 b_0>
// the rightmost character is qubit 0, so |001> for N = 3 is basis index 1.

namespace pisep {

template <typename Scalar = double>
struct PureStateT {
  int n_qubits = 0;
  ComplexVector<Scalar> amplitudes;
};
using PureState = PureStateT<double>;

template <typename Scalar = double>
struct DensityMatrixT {
  int n_qubits = 0;
  ComplexMatrix<Scalar> entries;
};
using DensityMatrix = DensityMatrixT<double>;

inline void check_dense_qubits(int n_qubits, const char* where) {
  if (n_qubits < 1 || n_qubits > kDenseMaxQubits)
    throw validation_error(std::string(where) + ": n_qubits must be in [1, " +
                           std::to_string(kDenseMaxQubits) + "], got " +
                           std::to_string(n_qubits));
}

// Checks dimension and norm. PSD-style checks do not apply to vectors.
template <typename Scalar>
void validate_pure(const PureStateT<Scalar>& psi, const char* where = "state") {
  check_dense_qubits(psi.n_qubits, where);
  if (psi.amplitudes.size() != dim_of(psi.n_qubits))
    throw validation_error(std::string(where) + ": amplitude vector has " +
                           std::to_string(psi.amplitudes.size()) +
                           " entries, expected 2^" +
                           std::to_string(psi.n_qubits));
  Scalar n2 = psi.amplitudes.squaredNorm();
  if (std::abs(n2 - Scalar(1)) > 1e-12)
    throw validation_error(std::string(where) +
                           ": state vector is not normalized (|<psi|psi>| - 1 = " +
                           std::to_string(static_cast<double>(n2 - 1)) + ")");
}

// Checks dimension, Hermiticity and unit trace; the eigenvalue scan is the
// expensive part and only requested when data enters from outside (file
// loads), never for matrices produced internally.
template <typename Scalar>
void validate_density(const DensityMatrixT<Scalar>& rho, bool check_psd,
                      const char* where = "state") {
  check_dense_qubits(rho.n_qubits, where);
  std::int64_t d = dim_of(rho.n_qubits);
  if (rho.entries.rows() != d || rho.entries.cols() != d)
    throw validation_error(std::string(where) + ": matrix is " +
                           std::to_string(rho.entries.rows()) + "x" +
                           std::to_string(rho.entries.cols()) +
                           ", expected 2^" + std::to_string(rho.n_qubits) +
                           " square");
  double herm = (rho.entries - rho.entries.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    throw validation_error(std::string(where) +
                           ": matrix is not Hermitian (max deviation " +
                           std::to_string(herm) + ")");
  std::complex<Scalar> tr = rho.entries.trace();
  if (std::abs(tr - std::complex<Scalar>(1, 0)) > kTraceTol)
    throw validation_error(std::string(where) + ": trace is not 1");
  if (check_psd) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(
        rho.entries, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
      throw validation_error(
          std::string(where) + ": matrix has a negative eigenvalue (" +
          std::to_string(static_cast<double>(es.eigenvalues().minCoeff())) +
          ")");
  }
}

template <typename Scalar>
DensityMatrixT<Scalar> density_from(const PureStateT<Scalar>& psi) {
  return {psi.n_qubits,
          (psi.amplitudes * psi.amplitudes.adjoint()).eval()};
}

// |GHZ_N> = (|0...0> + |1...1>)/sqrt(2). For N = 1 this degenerates to |+>.
template <typename Scalar = double>
PureStateT<Scalar> make_ghz(int n_qubits) {
  check_dense_qubits(n_qubits, "make_ghz");
  std::int64_t d = dim_of(n_qubits);
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(d);
  Scalar a = Scalar(1) / std::sqrt(Scalar(2));
  v(0) = a;
  v(d - 1) = a;
  return {n_qubits, std::move(v)};
}

// |W_N> = (|0...01> + |0...10> + ... + |10...0>)/sqrt(N).
template <typename Scalar = double>
PureStateT<Scalar> make_w(int n_qubits) {
  check_dense_qubits(n_qubits, "make_w");
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(dim_of(n_qubits));
  Scalar a = Scalar(1) / std::sqrt(Scalar(n_qubits));
  for (int i = 0; i < n_qubits; ++i) v(std::int64_t{1} << i) = a;
  return {n_qubits, std::move(v)};
}

// The fully separable reference state |0>^(x)N.
template <typename Scalar = double>
PureStateT<Scalar> make_product(int n_qubits) {
  check_dense_qubits(n_qubits, "make_product");
  ComplexVector<Scalar> v = ComplexVector<Scalar>::Zero(dim_of(n_qubits));
  v(0) = Scalar(1);
  return {n_qubits, std::move(v)};
}

// Haar-distributed pure state: i.i.d. complex Gaussian amplitudes, normalized.
template <typename Scalar = double>
PureStateT<Scalar> random_pure(int n_qubits, Rng& rng) {
  check_dense_qubits(n_qubits, "random_pure");
  std::int64_t d = dim_of(n_qubits);
  ComplexVector<Scalar> v(d);
  for (std::int64_t i = 0; i < d; ++i) v(i) = rng.cnormal();
  v /= v.norm();
  return {n_qubits, std::move(v)};
}

// Full-rank random density matrix: G G^dag / Tr(G G^dag) with Gaussian G
// (a Hilbert-Schmidt-distributed mixed state).
template <typename Scalar = double>
DensityMatrixT<Scalar> random_mixed(int n_qubits, Rng& rng) {
  check_dense_qubits(n_qubits, "random_mixed");
  std::int64_t d = dim_of(n_qubits);
  ComplexMatrix<Scalar> g(d, d);
  for (std::int64_t r = 0; r < d; ++r)
    for (std::int64_t c = 0; c < d; ++c) g(r, c) = rng.cnormal();
  ComplexMatrix<Scalar> rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {n_qubits, std::move(rho)};
}

// (1 - p) rho + p I / 2^N.
template <typename Scalar>
DensityMatrixT<Scalar> mix_white_noise(const DensityMatrixT<Scalar>& rho,
                                       Scalar p) {
  if (p < Scalar(0) || p > Scalar(1))
    throw validation_error("mix_white_noise: p must lie in [0, 1]");
  std::int64_t d = dim_of(rho.n_qubits);
  ComplexMatrix<Scalar> out = (Scalar(1) - p) * rho.entries;
  Scalar diag = p / Scalar(d);
  for (std::int64_t i = 0; i < d; ++i) out(i, i) += diag;
  return {rho.n_qubits, std::move(out)};
}

// Tr(rho^2); for a Hermitian matrix this is the squared Frobenius norm.
template <typename Scalar>
Scalar purity(const DensityMatrixT<Scalar>& rho) {
  return rho.entries.squaredNorm();
}

// Reduced state on `keep` (sorted set of qubit indices); the remaining qubits
// are traced out. The kept qubits are relabeled 0..|keep|-1 preserving order,
// so keep[j] of the input becomes qubit j of the output.
template <typename Scalar>
DensityMatrixT<Scalar> partial_trace(const DensityMatrixT<Scalar>& rho,
                                     const std::vector<int>& keep) {
  int n = rho.n_qubits;
  if (keep.empty())
    throw validation_error("partial_trace: keep set must be nonempty");
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw validation_error("partial_trace: duplicate qubit index in keep set");
  if (k.front() < 0 || k.back() >= n)
    throw validation_error("partial_trace: qubit index out of range");

  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(k.begin(), k.end(), q)) rest.push_back(q);

  int nk = static_cast<int>(k.size());
  std::int64_t dk = dim_of(nk);
  std::int64_t dr = std::int64_t{1} << rest.size();

  // scatter(bits, positions): place bit j of `bits` at positions[j].
  auto scatter = [](std::int64_t bits, const std::vector<int>& pos) {
    std::int64_t out = 0;
    for (std::size_t j = 0; j < pos.size(); ++j)
      out |= ((bits >> j) & 1) << pos[j];
    return out;
  };

  std::vector<std::int64_t> keep_idx(dk), rest_idx(dr);
  for (std::int64_t x = 0; x < dk; ++x) keep_idx[x] = scatter(x, k);
  for (std::int64_t z = 0; z < dr; ++z) rest_idx[z] = scatter(z, rest);

  ComplexMatrix<Scalar> out = ComplexMatrix<Scalar>::Zero(dk, dk);
  for (std::int64_t x = 0; x < dk; ++x)
    for (std::int64_t y = 0; y < dk; ++y) {
      std::complex<Scalar> acc(0, 0);
      for (std::int64_t z = 0; z < dr; ++z)
        acc += rho.entries(keep_idx[x] | rest_idx[z], keep_idx[y] | rest_idx[z]);
      out(x, y) = acc;
    }
  return {nk, std::move(out)};
}

// a occupies qubits [0, a.n_qubits), b the qubits above; as Kronecker blocks
// this is kron(b, a) because higher qubits are more significant bits.
template <typename Scalar>
DensityMatrixT<Scalar> tensor_product(const DensityMatrixT<Scalar>& a,
                                      const DensityMatrixT<Scalar>& b) {
  int n = a.n_qubits + b.n_qubits;
  check_dense_qubits(n, "tensor_product");
  std::int64_t da = dim_of(a.n_qubits), db = dim_of(b.n_qubits);
  ComplexMatrix<Scalar> out(da * db, da * db);
  for (std::int64_t rb = 0; rb < db; ++rb)
    for (std::int64_t cb = 0; cb < db; ++cb)
      out.block(rb * da, cb * da, da, da) = b.entries(rb, cb) * a.entries;
  return {n, std::move(out)};
}

template <typename Scalar>
PureStateT<Scalar> tensor_product(const PureStateT<Scalar>& a,
                                  const PureStateT<Scalar>& b) {
  int n = a.n_qubits + b.n_qubits;
  check_dense_qubits(n, "tensor_product");
  std::int64_t da = dim_of(a.n_qubits), db = dim_of(b.n_qubits);
  ComplexVector<Scalar> out(da * db);
  for (std::int64_t ib = 0; ib < db; ++ib)
    out.segment(ib * da, da) = b.amplitudes(ib) * a.amplitudes;
  return {n, std::move(out)};
}

// Applies the qubit relabeling i -> perm[i]: bit i of every basis index moves
// to bit position perm[i].
inline std::int64_t permute_bits(std::int64_t index,
                                 const std::vector<int>& perm) {
  std::int64_t out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    out |= ((index >> i) & 1) << perm[i];
  return out;
}

inline void check_permutation(const std::vector<int>& perm, int n_qubits,
                              const char* where) {
  if (static_cast<int>(perm.size()) != n_qubits)
    throw validation_error(std::string(where) + ": permutation has wrong size");
  std::vector<bool> seen(n_qubits, false);
  for (int p : perm) {
    if (p < 0 || p >= n_qubits || seen[p])
      throw validation_error(std::string(where) +
                             ": not a permutation of 0..N-1");
    seen[p] = true;
  }
}

template <typename Scalar>
PureStateT<Scalar> permute_qubits(const PureStateT<Scalar>& psi,
                                  const std::vector<int>& perm) {
  check_permutation(perm, psi.n_qubits, "permute_qubits");
  ComplexVector<Scalar> out(psi.amplitudes.size());
  for (std::int64_t b = 0; b < psi.amplitudes.size(); ++b)
    out(permute_bits(b, perm)) = psi.amplitudes(b);
  return {psi.n_qubits, std::move(out)};
}

template <typename Scalar>
DensityMatrixT<Scalar> permute_qubits(const DensityMatrixT<Scalar>& rho,
                                      const std::vector<int>& perm) {
  check_permutation(perm, rho.n_qubits, "permute_qubits");
  std::int64_t d = dim_of(rho.n_qubits);
  std::vector<std::int64_t> map(d);
  for (std::int64_t b = 0; b < d; ++b) map[b] = permute_bits(b, perm);
  ComplexMatrix<Scalar> out(d, d);
  for (std::int64_t r = 0; r < d; ++r)
    for (std::int64_t c = 0; c < d; ++c) out(map[r], map[c]) = rho.entries(r, c);
  return {rho.n_qubits, std::move(out)};
}

}  // namespace pisep

#endif  // PISEP_STATES_HPP
