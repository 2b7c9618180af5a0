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

#ifndef PISEP_RNG_HPP
#define PISEP_RNG_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "pisep/types.hpp"

namespace pisep {

// Seeded random source. The raw generator is std::mt19937_64, whose output
// sequence the standard pins down exactly; the distributions on top of it are
// implemented here (instead of <random>'s, whose sequences are
// implementation-defined) so that a seed identifies one byte-exact stream on
// every platform.
inline constexpr const char* kRngName = "mt19937_64/box-muller";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. The sine branch is discarded; this wastes
  // one uniform but keeps the stream position independent of call history.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Complex standard normal (real and imaginary parts N(0, 1)).
  std::complex<double> cnormal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo would bias; rejection keeps exact uniformity.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  // Index sampled from the distribution whose cumulative sums are `cdf`
  // (nondecreasing, last element treated as the total mass).
  std::size_t categorical(const std::vector<double>& cdf) {
    if (cdf.empty()) throw validation_error("Rng::categorical: empty cdf");
    double x = uniform() * cdf.back();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] <= x)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  // Fisher-Yates; deterministic given the seed, unlike std::shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pisep

#endif  // PISEP_RNG_HPP
