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

#ifndef PISEP_LOCAL_BASIS_HPP
#define PISEP_LOCAL_BASIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pisep/states.hpp"
#include "pisep/types.hpp"

namespace pisep {

// One 2x2 unitary per qubit; applying the change maps rho to
// (U_{N-1} x ... x U_0) rho (U_{N-1} x ... x U_0)^dag.
template <typename Scalar = double>
struct LocalBasisChangeT {
  using Matrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
  std::vector<Matrix2> unitaries;  // unitaries[i] acts on qubit i

  static LocalBasisChangeT identity(int n_qubits) {
    LocalBasisChangeT b;
    b.unitaries.assign(n_qubits, Matrix2::Identity());
    return b;
  }

  LocalBasisChangeT adjoint() const {
    LocalBasisChangeT b;
    b.unitaries.reserve(unitaries.size());
    for (const auto& u : unitaries) b.unitaries.push_back(u.adjoint());
    return b;
  }
};
using LocalBasisChange = LocalBasisChangeT<double>;

template <typename Scalar>
void validate_local_basis(const LocalBasisChangeT<Scalar>& basis, int n_qubits,
                          const char* where = "local basis") {
  if (static_cast<int>(basis.unitaries.size()) != n_qubits)
    throw validation_error(std::string(where) + ": expected " +
                           std::to_string(n_qubits) + " unitaries, got " +
                           std::to_string(basis.unitaries.size()));
  using Matrix2 = typename LocalBasisChangeT<Scalar>::Matrix2;
  for (std::size_t i = 0; i < basis.unitaries.size(); ++i) {
    const auto& u = basis.unitaries[i];
    double dev = (u.adjoint() * u - Matrix2::Identity()).cwiseAbs().maxCoeff();
    if (dev > kUnitaryTol)
      throw validation_error(std::string(where) + ": factor for qubit " +
                             std::to_string(i) + " is not unitary (deviation " +
                             std::to_string(dev) + ")");
  }
}

// U(alpha, beta, gamma) = Rz(alpha) Ry(beta) Rz(gamma); any single-qubit
// unitary up to global phase.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 2, 2> euler_unitary(Scalar alpha,
                                                        Scalar beta,
                                                        Scalar gamma) {
  using C = std::complex<Scalar>;
  Scalar cb = std::cos(beta / 2), sb = std::sin(beta / 2);
  C ea = std::polar(Scalar(1), -alpha / 2);
  C eg = std::polar(Scalar(1), -gamma / 2);
  Eigen::Matrix<C, 2, 2> u;
  u(0, 0) = ea * eg * cb;
  u(0, 1) = -ea * std::conj(eg) * sb;
  u(1, 0) = std::conj(ea) * eg * sb;
  u(1, 1) = std::conj(ea) * std::conj(eg) * cb;
  return u;
}

namespace detail {

// In-place left multiplication by U on qubit q: rows (r, r | 1<<q) mix.
template <typename Scalar>
void left_mul_qubit(ComplexMatrix<Scalar>& m, int q,
                    const Eigen::Matrix<std::complex<Scalar>, 2, 2>& u) {
  std::int64_t d = m.rows();
  std::int64_t bit = std::int64_t{1} << q;
  for (std::int64_t r = 0; r < d; ++r) {
    if (r & bit) continue;
    for (std::int64_t c = 0; c < d; ++c) {
      std::complex<Scalar> a = m(r, c), b = m(r | bit, c);
      m(r, c) = u(0, 0) * a + u(0, 1) * b;
      m(r | bit, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

// In-place right multiplication by U^dag on qubit q.
template <typename Scalar>
void right_mul_adjoint_qubit(ComplexMatrix<Scalar>& m, int q,
                             const Eigen::Matrix<std::complex<Scalar>, 2, 2>& u) {
  std::int64_t d = m.rows();
  std::int64_t bit = std::int64_t{1} << q;
  for (std::int64_t c = 0; c < d; ++c) {
    if (c & bit) continue;
    for (std::int64_t r = 0; r < d; ++r) {
      std::complex<Scalar> a = m(r, c), b = m(r, c | bit);
      m(r, c) = a * std::conj(u(0, 0)) + b * std::conj(u(0, 1));
      m(r, c | bit) = a * std::conj(u(1, 0)) + b * std::conj(u(1, 1));
    }
  }
}

}  // namespace detail

template <typename Scalar>
DensityMatrixT<Scalar> apply_local_basis(const DensityMatrixT<Scalar>& rho,
                                         const LocalBasisChangeT<Scalar>& basis) {
  validate_local_basis(basis, rho.n_qubits, "apply_local_basis");
  ComplexMatrix<Scalar> m = rho.entries;
  for (int q = 0; q < rho.n_qubits; ++q) {
    detail::left_mul_qubit(m, q, basis.unitaries[q]);
    detail::right_mul_adjoint_qubit(m, q, basis.unitaries[q]);
  }
  return {rho.n_qubits, std::move(m)};
}

template <typename Scalar>
PureStateT<Scalar> apply_local_basis(const PureStateT<Scalar>& psi,
                                     const LocalBasisChangeT<Scalar>& basis) {
  validate_local_basis(basis, psi.n_qubits, "apply_local_basis");
  ComplexVector<Scalar> v = psi.amplitudes;
  for (int q = 0; q < psi.n_qubits; ++q) {
    const auto& u = basis.unitaries[q];
    std::int64_t bit = std::int64_t{1} << q;
    for (std::int64_t i = 0; i < v.size(); ++i) {
      if (i & bit) continue;
      std::complex<Scalar> a = v(i), b = v(i | bit);
      v(i) = u(0, 0) * a + u(0, 1) * b;
      v(i | bit) = u(1, 0) * a + u(1, 1) * b;
    }
  }
  return {psi.n_qubits, std::move(v)};
}

}  // namespace pisep

#endif  // PISEP_LOCAL_BASIS_HPP
