// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "stcris/types.hpp"

namespace stcris {

// Deterministic Gaussian generator. mt19937_64 gives identical integer
// streams everywhere; the Box-Muller transform below is written out
// explicitly because std::normal_distribution is allowed to differ between
// standard library implementations, which would break byte-for-byte
// reproducibility of simulator output.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0, 1]; never returns 0 so log() below is safe.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex Gaussian with total variance `var`
  // (var/2 per real dimension).
  cdouble complex_gaussian(double var) {
    double s = std::sqrt(var / 2.0);
    double re = gaussian();
    double im = gaussian();
    return {s * re, s * im};
  }

  std::uint64_t next_u64() { return gen_(); }

  // Derive an independent stream seed from a base seed and a stream index.
  // splitmix64 finalizer; decorrelates even adjacent indices.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace stcris
