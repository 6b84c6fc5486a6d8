// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stcris/codes.hpp"
#include "stcris/types.hpp"

namespace stcris {

// M-ary PSK target: M phases spaced 2pi/M starting at phase_offset, all in
// harmonic n of the switching waveform.
struct ModulationScheme {
  std::size_t order = 4;    // M, a power of two >= 2
  long harmonic = 1;        // n
  double phase_offset = 0.0;

  double target_phase(std::size_t symbol) const;
  std::size_t bits_per_symbol() const;
  void validate() const;
};

ModulationScheme scheme_by_name(const std::string& name);  // bpsk/qpsk/8psk/16psk

struct CodebookEntry {
  std::size_t symbol = 0;
  TimeCode code;
  cdouble coefficient;
};

struct CodebookQuality {
  double max_phase_err_rad = 0.0;  // vs the scheme's target grid
  double amp_spread = 0.0;         // max | |c_k|/ring - 1 |
  double leakage = 0.0;            // max over symbols of the ratios below
};

struct Codebook {
  ModulationScheme scheme;
  std::size_t code_length = 0;
  double bit_duration = 1.0;
  double ring_amplitude = 0.0;
  std::vector<CodebookEntry> entries;  // entry k carries symbol k
  CodebookQuality quality;
};

// Build an M-PSK codebook from cyclic shifts of one base code. Succeeds
// when some shift step s* makes the per-shift phase increment 2*pi*n*s*/L
// generate the full 2*pi/M grid; the resulting book has exactly equal
// magnitudes and exactly uniform spacing. The realized grid is anchored at
// the base code's own coefficient phase, which is recorded back into
// scheme.phase_offset (shifts cannot move the anchor).
Codebook design_by_shift(const TimeCode& base, const ModulationScheme& scheme);

// Exhaustive search over every code of the given length. Picks the largest
// ring amplitude A for which every target phase (absolute grid at
// scheme.phase_offset) has a candidate within phase_tol and with magnitude
// within amp_tol of A; per-slot ties broken by smaller phase error, then
// smaller harmonic leakage, then lexicographically smallest code.
Codebook search_codebook(std::size_t code_length, const ModulationScheme& scheme,
                         double amp_tol, double phase_tol,
                         Alphabet alphabet = Alphabet::binary,
                         double bit_duration = 1.0,
                         std::uint64_t cap = std::uint64_t{1} << 24);

// Unwanted spectral content of each entry relative to its own harmonic:
// |c_{2n}|/|c_n| and |c_{n+1}|/|c_n|.
struct LeakageReport {
  struct PerSymbol {
    std::size_t symbol = 0;
    double second_harmonic = 0.0;  // |c_{2n}| / |c_n|
    double adjacent = 0.0;         // |c_{n+1}| / |c_n|
    bool flagged = false;
  };
  std::vector<PerSymbol> symbols;
  double max_ratio = 0.0;
  double threshold = 0.25;
};

LeakageReport leakage_metrics(const Codebook& book, double threshold = 0.25);

// Gray-map a payload bit string ('0'/'1' characters) onto codebook symbols,
// repeating each symbol's code `reps` times. Adjacent constellation phases
// differ in exactly one payload bit.
std::vector<std::size_t> map_bits_to_symbols(const std::string& payload,
                                             std::size_t order);
std::vector<TimeCode> map_bits_to_schedule(const Codebook& book,
                                           const std::string& payload,
                                           std::size_t reps);

// Gray code helpers (symbol slot k carries bit pattern gray(k)).
std::size_t gray_encode(std::size_t k);
std::size_t gray_decode(std::size_t g);

}  // namespace stcris
