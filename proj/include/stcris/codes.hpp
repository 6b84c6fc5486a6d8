// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stcris/types.hpp"

namespace stcris {

// Reflection-state alphabets. binary holds to {0, 1} (element off/on),
// ternary adds the phase-inverted on state {0, +1, -1}.
enum class Alphabet { binary, ternary };

// One periodic switching sequence for a single surface column: L reflection
// states, each held for bit_duration seconds, repeating with period
// L * bit_duration.
struct TimeCode {
  std::vector<cdouble> states;
  double bit_duration = 1.0;
  Alphabet alphabet = Alphabet::binary;

  std::size_t length() const { return states.size(); }
  double period() const { return bit_duration * static_cast<double>(states.size()); }

  // 1-based bit access matching the usual indexing of switching formulas.
  const cdouble& state_at(std::size_t m) const;

  // Render back to text: '0', '1' for binary; '0', '+', '-' for ternary.
  std::string format() const;

  // Bit masks over the code, bit k set when states[k] participates.
  // Only valid for L <= 32.
  std::uint32_t on_mask() const;   // nonzero states
  std::uint32_t neg_mask() const;  // states equal to -1

  bool operator==(const TimeCode& other) const;
};

// Parse "01101000" or "0+-0+..." into a TimeCode. Errors report the 1-based
// position of the offending character.
TimeCode parse_code(const std::string& text, double bit_duration,
                    Alphabet alphabet = Alphabet::binary);

// Cyclic shift: out[i] = in[(i + s) mod L] for any integer s (negative
// shifts reduce modulo L). Rotating by positive s advances the switching
// pattern by s bit slots in time.
TimeCode rotate(const TimeCode& code, long s);

// Lexicographic index of a code within its alphabet (binary: the code text
// read as a base-2 number, leftmost bit most significant; ternary: base-3
// with digit order 0 < + < -).
std::uint64_t code_index(const TimeCode& code);

// Inverse of code_index.
TimeCode code_from_index(std::size_t length, Alphabet alphabet,
                         std::uint64_t index, double bit_duration);

// Number of codes of a given length over an alphabet (alphabet size ^ L).
std::uint64_t code_count(std::size_t length, Alphabet alphabet);

// Iterates every code of a given length in lexicographic order. Refuses
// lengths whose code count exceeds `cap` so a typo cannot lock the process
// into a multi-day enumeration.
class CodeEnumerator {
 public:
  CodeEnumerator(std::size_t length, Alphabet alphabet, double bit_duration = 1.0,
                 std::uint64_t cap = std::uint64_t{1} << 24);

  std::uint64_t size() const { return count_; }
  std::size_t length() const { return length_; }
  Alphabet alphabet() const { return alphabet_; }

  TimeCode at(std::uint64_t index) const;

 private:
  std::size_t length_;
  Alphabet alphabet_;
  double bit_duration_;
  std::uint64_t count_;
};

// Space-time code: one TimeCode per column of the surface, all sharing the
// same length and bit duration.
struct SpaceTimeCode {
  std::vector<TimeCode> columns;

  std::size_t n_columns() const { return columns.size(); }
  std::size_t length() const { return columns.empty() ? 0 : columns[0].length(); }
};

// Build a space-time code where column k carries the base code rotated by
// k * shift. This is the progressive-shift construction that steers the
// selected harmonic off broadside.
SpaceTimeCode shifted_columns(const TimeCode& base, long shift,
                              std::size_t n_columns);

}  // namespace stcris
