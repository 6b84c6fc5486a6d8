// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stcris/codes.hpp"
#include "stcris/types.hpp"

namespace stcris {

// Contribution of bit m (1-based) to harmonic n of the switching waveform.
// The full coefficient is the sum of these over m = 1..L.
cdouble bit_vector(const TimeCode& code, std::size_t m, long n);

// Harmonic coefficient of the periodic reflection waveform at order n,
// evaluated in closed form. Exactly zero when n is a nonzero multiple of L.
cdouble harmonic_coefficient(const TimeCode& code, long n);

// Independent numerical route to the same coefficient: integrate the
// piecewise-constant waveform against the harmonic tone over a refined time
// grid. Used to cross-check harmonic_coefficient; do not fold the two
// together. `resolution` is the number of uniform subintervals across one
// period (0 picks a default of at least 16 per bit).
cdouble oracle_coefficient(const TimeCode& code, long n,
                           std::size_t resolution = 0);

// Frequency offset of harmonic n from the carrier, in Hz.
double harmonic_frequency(long n, std::size_t length, double bit_duration);

struct HarmonicPoint {
  long order = 0;
  cdouble coefficient;
  double frequency_hz = 0.0;
};

// Coefficients for n = -n_max .. n_max, in order.
std::vector<HarmonicPoint> spectrum(const TimeCode& code, long n_max);

// Harmonic-n coefficient of every code of a given length, indexed by
// lexicographic code index. Texts are rematerialized on demand rather than
// stored; a full binary L=16 map is 65536 complex values either way.
struct ConstellationMap {
  std::size_t length = 0;
  long order = 0;
  Alphabet alphabet = Alphabet::binary;
  double bit_duration = 1.0;
  std::vector<cdouble> coefficients;

  std::string code_text(std::uint64_t index) const;
};

ConstellationMap constellation_map(std::size_t length, long n,
                                   Alphabet alphabet = Alphabet::binary,
                                   double bit_duration = 1.0,
                                   std::uint64_t cap = std::uint64_t{1} << 24);

namespace detail {

// Weight of state k (0-based, so bit m = k + 1) in the coefficient sum.
// Shared by bit_vector, harmonic_coefficient and the batched map so all
// three routes agree to the last bit.
cdouble harmonic_weight(std::size_t length, long n, std::size_t k);

}  // namespace detail

}  // namespace stcris
