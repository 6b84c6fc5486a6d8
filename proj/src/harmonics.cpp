// SPDX-License-Identifier: Apache-2.0
#include "stcris/harmonics.hpp"

#include <algorithm>
#include <cmath>

#include "stcris/kernels.hpp"

namespace stcris {

namespace detail {

cdouble harmonic_weight(std::size_t length, long n, std::size_t k) {
  const double L = static_cast<double>(length);
  if (n != 0 && n % static_cast<long>(length) == 0) {
    // sinc(pi * n / L) vanishes; make it an exact zero instead of the few
    // ulp that sin() would leave behind.
    return {0.0, 0.0};
  }
  const double mag = sinc(kPi * static_cast<double>(n) / L) / L;
  const double ph = -static_cast<double>(n) *
                    (2.0 * static_cast<double>(k) + 1.0) * kPi / L;
  return {mag * std::cos(ph), mag * std::sin(ph)};
}

}  // namespace detail

cdouble bit_vector(const TimeCode& code, std::size_t m, long n) {
  const cdouble& a = code.state_at(m);  // validates 1 <= m <= L
  if (a == cdouble{0.0, 0.0}) return {0.0, 0.0};
  const cdouble w = detail::harmonic_weight(code.length(), n, m - 1);
  return (a == cdouble{-1.0, 0.0}) ? -w : w;
}

cdouble harmonic_coefficient(const TimeCode& code, long n) {
  const std::size_t L = code.length();
  if (L == 0) throw ConfigError("empty code");
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < L; ++k) {
    const cdouble& a = code.states[k];
    if (a == cdouble{0.0, 0.0}) continue;
    const cdouble w = detail::harmonic_weight(L, n, k);
    if (a == cdouble{-1.0, 0.0}) {
      re -= w.real();
      im -= w.imag();
    } else {
      re += w.real();
      im += w.imag();
    }
  }
  return {re, im};
}

cdouble oracle_coefficient(const TimeCode& code, long n, std::size_t resolution) {
  const std::size_t L = code.length();
  if (L == 0) throw ConfigError("empty code");
  if (resolution == 0) resolution = 16 * L;
  const double T = code.period();
  // Merge bit boundaries with the uniform grid so every piece has a single
  // constant reflection state, then integrate the tone over each piece in
  // closed form. The subdivision is redundant mathematically; it makes this
  // route accumulate rounding differently from the weight formula, which is
  // the point of an oracle.
  std::vector<double> grid;
  grid.reserve(resolution + L + 2);
  for (std::size_t i = 0; i <= resolution; ++i) {
    grid.push_back(T * static_cast<double>(i) / static_cast<double>(resolution));
  }
  for (std::size_t m = 1; m < L; ++m) {
    grid.push_back(code.bit_duration * static_cast<double>(m));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const double w0 = 2.0 * kPi * static_cast<double>(n) / T;
  cdouble acc{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t1 = grid[i];
    const double t2 = grid[i + 1];
    // State active on (t1, t2): take the midpoint's bit.
    const double mid = 0.5 * (t1 + t2);
    std::size_t bit = static_cast<std::size_t>(mid / code.bit_duration);
    if (bit >= L) bit = L - 1;
    const cdouble a = code.states[bit];
    if (a == cdouble{0.0, 0.0}) continue;
    if (n == 0) {
      acc += a * ((t2 - t1) / T);
    } else {
      const cdouble e2 = std::polar(1.0, -w0 * t2);
      const cdouble e1 = std::polar(1.0, -w0 * t1);
      acc += a * (e2 - e1) / cdouble{0.0, -2.0 * kPi * static_cast<double>(n)};
    }
  }
  return acc;
}

double harmonic_frequency(long n, std::size_t length, double bit_duration) {
  return static_cast<double>(n) /
         (static_cast<double>(length) * bit_duration);
}

std::vector<HarmonicPoint> spectrum(const TimeCode& code, long n_max) {
  if (n_max < 0) throw ConfigError("harmonic range must be nonnegative");
  std::vector<HarmonicPoint> out;
  out.reserve(static_cast<std::size_t>(2 * n_max + 1));
  for (long n = -n_max; n <= n_max; ++n) {
    HarmonicPoint p;
    p.order = n;
    p.coefficient = harmonic_coefficient(code, n);
    p.frequency_hz = harmonic_frequency(n, code.length(), code.bit_duration);
    out.push_back(p);
  }
  return out;
}

std::string ConstellationMap::code_text(std::uint64_t index) const {
  return code_from_index(length, alphabet, index, bit_duration).format();
}

ConstellationMap constellation_map(std::size_t length, long n, Alphabet alphabet,
                                   double bit_duration, std::uint64_t cap) {
  if (length == 0 || length > 32) {
    throw ConfigError("constellation map supports code lengths 1..32");
  }
  CodeEnumerator en(length, alphabet, bit_duration, cap);
  const std::uint64_t count = en.size();

  ConstellationMap map;
  map.length = length;
  map.order = n;
  map.alphabet = alphabet;
  map.bit_duration = bit_duration;
  map.coefficients.resize(count);

  std::vector<double> wre(length), wim(length);
  for (std::size_t k = 0; k < length; ++k) {
    const cdouble w = detail::harmonic_weight(length, n, k);
    wre[k] = w.real();
    wim[k] = w.imag();
  }

  // Walk indices with a base-B odometer over text positions; position p of
  // the text is state k = p, so masks update incrementally with the carry.
  const unsigned base = (alphabet == Alphabet::binary) ? 2 : 3;
  std::vector<unsigned> digits(length, 0);  // digits[p], leftmost p = 0
  std::uint32_t on = 0;
  std::uint32_t neg = 0;

  constexpr std::size_t kChunk = 8192;
  std::vector<std::uint32_t> on_bits(kChunk), neg_bits(kChunk);
  std::vector<double> out_re(kChunk), out_im(kChunk);

  const auto& lane = kernels::active();
  std::uint64_t done = 0;
  while (done < count) {
    const std::size_t this_chunk =
        static_cast<std::size_t>(std::min<std::uint64_t>(kChunk, count - done));
    for (std::size_t i = 0; i < this_chunk; ++i) {
      on_bits[i] = on;
      neg_bits[i] = neg;
      // Increment the odometer (skip after the final code).
      if (done + i + 1 < count) {
        for (std::size_t p = length; p-- > 0;) {
          const std::uint32_t bit = 1u << p;
          digits[p] = (digits[p] + 1) % base;
          if (digits[p] == 0) {
            on &= ~bit;
            neg &= ~bit;
            continue;  // carry into the next position left
          }
          on |= bit;
          if (digits[p] == 2) neg |= bit;
          else neg &= ~bit;
          break;
        }
      }
    }
    lane.coeff_batch(on_bits.data(),
                     alphabet == Alphabet::ternary ? neg_bits.data() : nullptr,
                     this_chunk, wre.data(), wim.data(),
                     static_cast<unsigned>(length), out_re.data(), out_im.data());
    for (std::size_t i = 0; i < this_chunk; ++i) {
      map.coefficients[done + i] = {out_re[i], out_im[i]};
    }
    done += this_chunk;
  }
  return map;
}

}  // namespace stcris
