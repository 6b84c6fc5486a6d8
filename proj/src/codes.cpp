// SPDX-License-Identifier: Apache-2.0
#include "stcris/codes.hpp"

#include <cmath>
#include <cstdlib>

namespace stcris {

const cdouble& TimeCode::state_at(std::size_t m) const {
  if (m < 1 || m > states.size()) {
    throw std::out_of_range("bit index " + std::to_string(m) +
                            " outside 1.." + std::to_string(states.size()));
  }
  return states[m - 1];
}

std::string TimeCode::format() const {
  std::string out;
  out.reserve(states.size());
  for (const cdouble& s : states) {
    if (s == cdouble{0.0, 0.0}) {
      out += '0';
    } else if (s == cdouble{1.0, 0.0}) {
      out += (alphabet == Alphabet::ternary) ? '+' : '1';
    } else {
      out += '-';
    }
  }
  return out;
}

std::uint32_t TimeCode::on_mask() const {
  if (states.size() > 32) {
    throw std::length_error("bit masks support code length <= 32");
  }
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k] != cdouble{0.0, 0.0}) mask |= (1u << k);
  }
  return mask;
}

std::uint32_t TimeCode::neg_mask() const {
  if (states.size() > 32) {
    throw std::length_error("bit masks support code length <= 32");
  }
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k] == cdouble{-1.0, 0.0}) mask |= (1u << k);
  }
  return mask;
}

bool TimeCode::operator==(const TimeCode& other) const {
  return states == other.states && bit_duration == other.bit_duration;
}

TimeCode parse_code(const std::string& text, double bit_duration,
                    Alphabet alphabet) {
  if (text.empty()) {
    throw ConfigError("empty code string");
  }
  if (!(bit_duration > 0.0) || !std::isfinite(bit_duration)) {
    throw ConfigError("bit duration must be positive and finite");
  }
  TimeCode code;
  code.bit_duration = bit_duration;
  code.alphabet = alphabet;
  code.states.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    switch (c) {
      case '0':
        code.states.emplace_back(0.0, 0.0);
        break;
      case '1':
        if (alphabet == Alphabet::ternary) {
          throw ConfigError("ternary codes use '+' and '-', got '1' at position " +
                            std::to_string(i + 1));
        }
        code.states.emplace_back(1.0, 0.0);
        break;
      case '+':
        if (alphabet == Alphabet::binary) {
          throw ConfigError("binary codes use '0' and '1', got '+' at position " +
                            std::to_string(i + 1));
        }
        code.states.emplace_back(1.0, 0.0);
        break;
      case '-':
        if (alphabet == Alphabet::binary) {
          throw ConfigError("binary codes use '0' and '1', got '-' at position " +
                            std::to_string(i + 1));
        }
        code.states.emplace_back(-1.0, 0.0);
        break;
      default:
        throw ConfigError(std::string("invalid code character '") + c +
                          "' at position " + std::to_string(i + 1));
    }
  }
  return code;
}

TimeCode rotate(const TimeCode& code, long s) {
  const std::size_t L = code.states.size();
  TimeCode out = code;
  if (L == 0) return out;
  long r = s % static_cast<long>(L);
  if (r < 0) r += static_cast<long>(L);
  const std::size_t sh = static_cast<std::size_t>(r);
  for (std::size_t i = 0; i < L; ++i) {
    out.states[i] = code.states[(i + sh) % L];
  }
  return out;
}

std::uint64_t code_index(const TimeCode& code) {
  std::uint64_t idx = 0;
  if (code.alphabet == Alphabet::binary) {
    for (const cdouble& s : code.states) {
      idx = idx * 2 + (s != cdouble{0.0, 0.0} ? 1 : 0);
    }
  } else {
    for (const cdouble& s : code.states) {
      std::uint64_t digit = 0;
      if (s == cdouble{1.0, 0.0}) digit = 1;
      else if (s == cdouble{-1.0, 0.0}) digit = 2;
      idx = idx * 3 + digit;
    }
  }
  return idx;
}

TimeCode code_from_index(std::size_t length, Alphabet alphabet,
                         std::uint64_t index, double bit_duration) {
  TimeCode code;
  code.bit_duration = bit_duration;
  code.alphabet = alphabet;
  code.states.assign(length, cdouble{0.0, 0.0});
  const std::uint64_t base = (alphabet == Alphabet::binary) ? 2 : 3;
  for (std::size_t i = length; i-- > 0;) {
    std::uint64_t digit = index % base;
    index /= base;
    if (digit == 1) code.states[i] = cdouble{1.0, 0.0};
    else if (digit == 2) code.states[i] = cdouble{-1.0, 0.0};
  }
  if (index != 0) {
    throw ConfigError("code index too large for length " + std::to_string(length));
  }
  return code;
}

std::uint64_t code_count(std::size_t length, Alphabet alphabet) {
  const std::uint64_t base = (alphabet == Alphabet::binary) ? 2 : 3;
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (n > UINT64_MAX / base) {
      throw ConfigError("code count overflows for length " + std::to_string(length));
    }
    n *= base;
  }
  return n;
}

CodeEnumerator::CodeEnumerator(std::size_t length, Alphabet alphabet,
                               double bit_duration, std::uint64_t cap)
    : length_(length), alphabet_(alphabet), bit_duration_(bit_duration) {
  if (length == 0) {
    throw ConfigError("code length must be at least 1");
  }
  count_ = code_count(length, alphabet);
  if (count_ > cap) {
    throw ConfigError("enumeration of " + std::to_string(count_) +
                      " codes exceeds cap " + std::to_string(cap) +
                      " (raise the cap explicitly to proceed)");
  }
}

TimeCode CodeEnumerator::at(std::uint64_t index) const {
  if (index >= count_) {
    throw std::out_of_range("code index " + std::to_string(index) +
                            " outside 0.." + std::to_string(count_ - 1));
  }
  return code_from_index(length_, alphabet_, index, bit_duration_);
}

SpaceTimeCode shifted_columns(const TimeCode& base, long shift,
                              std::size_t n_columns) {
  if (n_columns == 0) {
    throw ConfigError("space-time code needs at least one column");
  }
  const long L = static_cast<long>(base.length());
  long sm = shift % L;
  SpaceTimeCode stc;
  stc.columns.reserve(n_columns);
  for (std::size_t k = 0; k < n_columns; ++k) {
    stc.columns.push_back(rotate(base, sm * static_cast<long>(k)));
  }
  return stc;
}

}  // namespace stcris
