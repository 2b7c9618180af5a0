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

#ifndef PISEP_PAULI_HPP
#define PISEP_PAULI_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pisep/states.hpp"
#include "pisep/types.hpp"

namespace pisep {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// A tensor product of single-qubit Paulis; letters[i] acts on qubit i.
struct PauliString {
  std::vector<PauliLetter> letters;

  int n_qubits() const { return static_cast<int>(letters.size()); }

  // Text form reads like a ket label: the leftmost character is the highest
  // qubit, e.g. from_string("ZXI") puts Z on qubit 2, X on qubit 1, I on 0.
  static PauliString from_string(std::string_view s) {
    PauliString p;
    p.letters.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      char c = s[s.size() - 1 - i];
      switch (c) {
        case 'I': p.letters[i] = PauliLetter::I; break;
        case 'X': p.letters[i] = PauliLetter::X; break;
        case 'Y': p.letters[i] = PauliLetter::Y; break;
        case 'Z': p.letters[i] = PauliLetter::Z; break;
        default:
          throw validation_error(
              std::string("PauliString::from_string: invalid letter '") + c +
              "'");
      }
    }
    return p;
  }

  std::string str() const {
    std::string s(letters.size(), 'I');
    static constexpr char names[4] = {'I', 'X', 'Y', 'Z'};
    for (std::size_t i = 0; i < letters.size(); ++i)
      s[letters.size() - 1 - i] = names[static_cast<int>(letters[i])];
    return s;
  }

  // (#X, #Y, #Z, #I).
  std::array<int, 4> type_counts() const {
    std::array<int, 4> c{0, 0, 0, 0};
    for (PauliLetter l : letters) {
      switch (l) {
        case PauliLetter::X: ++c[0]; break;
        case PauliLetter::Y: ++c[1]; break;
        case PauliLetter::Z: ++c[2]; break;
        case PauliLetter::I: ++c[3]; break;
      }
    }
    return c;
  }

  std::uint64_t mask_of(PauliLetter which) const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < letters.size(); ++i)
      if (letters[i] == which) m |= std::uint64_t{1} << i;
    return m;
  }
};

// Tr(rho P) computed without forming P: the string acts on each basis column
// as a bit flip plus phase. With f = xmask | ymask,
//   P |t> = i^{#Y} (-1)^{popcount(t & (ymask | zmask))} |t XOR f>,
// so the trace touches one matrix entry per column, O(2^N) total.
template <typename Scalar>
std::complex<Scalar> pauli_trace_raw(const DensityMatrixT<Scalar>& rho,
                                     std::uint64_t xm, std::uint64_t ym,
                                     std::uint64_t zm) {
  std::int64_t d = dim_of(rho.n_qubits);
  std::uint64_t f = xm | ym;
  std::uint64_t sign_mask = ym | zm;
  int ny = std::popcount(ym);
  static const std::complex<Scalar> iphase[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::complex<Scalar> base = iphase[ny & 3];
  std::complex<Scalar> acc(0, 0);
  for (std::int64_t t = 0; t < d; ++t) {
    std::complex<Scalar> v =
        rho.entries(t, static_cast<std::int64_t>(t ^ f));
    acc += (std::popcount(static_cast<std::uint64_t>(t) & sign_mask) & 1)
               ? -v
               : v;
  }
  return base * acc;
}

// Expectation value Tr(rho P). P and rho Hermitian force a real result; an
// imaginary residue above 1e-9 means the input matrix was inconsistent.
template <typename Scalar>
Scalar pauli_expectation(const DensityMatrixT<Scalar>& rho,
                         const PauliString& p) {
  if (p.n_qubits() != rho.n_qubits)
    throw validation_error("pauli_expectation: string length " +
                           std::to_string(p.n_qubits()) +
                           " does not match state on " +
                           std::to_string(rho.n_qubits) + " qubits");
  std::complex<Scalar> z =
      pauli_trace_raw(rho, p.mask_of(PauliLetter::X), p.mask_of(PauliLetter::Y),
                      p.mask_of(PauliLetter::Z));
  if (std::abs(z.imag()) > 1e-9)
    throw numerical_error(
        "pauli_expectation: non-real expectation (imaginary part " +
        std::to_string(static_cast<double>(z.imag())) + ")");
  return z.real();
}

}  // namespace pisep

#endif  // PISEP_PAULI_HPP
