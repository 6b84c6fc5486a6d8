#include <stdexcept>
#include <string>

#include "doctest.h"
#include "stcris/codes.hpp"
#include "stcris/types.hpp"

using namespace stcris;

TEST_SUITE("codes") {

TEST_CASE("parse and format round-trip") {
  const TimeCode b = parse_code("01101000", 5e-4);
  CHECK(b.length() == 8);
  CHECK(b.bit_duration == doctest::Approx(5e-4));
  CHECK(b.format() == "01101000");
  CHECK(b.period() == doctest::Approx(4e-3));

  const TimeCode t = parse_code("0+-0+", 1e-3, Alphabet::ternary);
  CHECK(t.format() == "0+-0+");
  CHECK(t.states[1] == cdouble{1.0, 0.0});
  CHECK(t.states[2] == cdouble{-1.0, 0.0});
}

TEST_CASE("parse rejects bad characters with 1-based positions") {
  CHECK_THROWS_WITH_AS(parse_code("2xyz", 1.0),
                       "invalid code character '2' at position 1", ConfigError);
  CHECK_THROWS_WITH_AS(parse_code("0102", 1.0),
                       "invalid code character '2' at position 4", ConfigError);
  // Each alphabet only accepts its own digits: no '+' in binary text and
  // no '1' in ternary text.
  CHECK_THROWS_AS(parse_code("0+10", 1.0, Alphabet::binary), ConfigError);
  CHECK_THROWS_AS(parse_code("0+10", 1.0, Alphabet::ternary), ConfigError);
  CHECK_NOTHROW(parse_code("0+-0", 1.0, Alphabet::ternary));
  CHECK_THROWS_AS(parse_code("", 1.0), ConfigError);
  CHECK_THROWS_AS(parse_code("01", 0.0), ConfigError);
  CHECK_THROWS_AS(parse_code("01", -1.0), ConfigError);
}

TEST_CASE("state_at is 1-based and range-checked") {
  const TimeCode c = parse_code("0110", 1.0);
  CHECK(c.state_at(1) == cdouble{0.0, 0.0});
  CHECK(c.state_at(2) == cdouble{1.0, 0.0});
  CHECK(c.state_at(4) == cdouble{0.0, 0.0});
  CHECK_THROWS_AS(c.state_at(0), std::out_of_range);
  CHECK_THROWS_AS(c.state_at(5), std::out_of_range);
}

TEST_CASE("rotate advances the pattern in time") {
  const TimeCode c = parse_code("00000001", 1.0);
  CHECK(rotate(c, 1).format() == "00000010");
  CHECK(rotate(c, 7).format() == "10000000");
  CHECK(rotate(c, 8).format() == "00000001");
  CHECK(rotate(c, -1).format() == "10000000");
  CHECK(rotate(c, -9).format() == "10000000");
  CHECK(rotate(rotate(c, 3), 5).format() == rotate(c, 8).format());

  const TimeCode t = parse_code("0+-", 1.0, Alphabet::ternary);
  CHECK(rotate(t, 1).format() == "+-0");
}

TEST_CASE("code_index matches the lexicographic reading") {
  CHECK(code_index(parse_code("00000000", 1.0)) == 0);
  CHECK(code_index(parse_code("00000001", 1.0)) == 1);
  CHECK(code_index(parse_code("10000000", 1.0)) == 128);
  CHECK(code_index(parse_code("11111111", 1.0)) == 255);
  // Ternary digit order: 0 < + < -.
  CHECK(code_index(parse_code("00+", 1.0, Alphabet::ternary)) == 1);
  CHECK(code_index(parse_code("00-", 1.0, Alphabet::ternary)) == 2);
  CHECK(code_index(parse_code("+00", 1.0, Alphabet::ternary)) == 9);
}

TEST_CASE("code_from_index inverts code_index exhaustively") {
  for (std::uint64_t i = 0; i < 256; ++i) {
    const TimeCode c = code_from_index(8, Alphabet::binary, i, 1.0);
    CHECK(code_index(c) == i);
  }
  for (std::uint64_t i = 0; i < 243; ++i) {
    const TimeCode c = code_from_index(5, Alphabet::ternary, i, 1.0);
    CHECK(code_index(c) == i);
  }
  CHECK_THROWS_AS(code_from_index(4, Alphabet::binary, 16, 1.0), ConfigError);
}

TEST_CASE("code_count sizes and overflow guard") {
  CHECK(code_count(8, Alphabet::binary) == 256);
  CHECK(code_count(16, Alphabet::binary) == 65536);
  CHECK(code_count(5, Alphabet::ternary) == 243);
  CHECK(code_count(63, Alphabet::binary) == (std::uint64_t{1} << 63));
  CHECK_THROWS_AS(code_count(64, Alphabet::binary), ConfigError);
  CHECK_THROWS_AS(code_count(41, Alphabet::ternary), ConfigError);
}

TEST_CASE("masks expose on and negated bits") {
  const TimeCode c = parse_code("0+-0", 1.0, Alphabet::ternary);
  CHECK(c.on_mask() == 0b0110);
  CHECK(c.neg_mask() == 0b0100);
  const TimeCode b = parse_code("00001111", 1.0);
  CHECK(b.on_mask() == 0b11110000);
  CHECK(b.neg_mask() == 0);
}

TEST_CASE("enumerator walks lexicographic order and enforces the cap") {
  CodeEnumerator en(4, Alphabet::binary);
  CHECK(en.size() == 16);
  CHECK(en.at(0).format() == "0000");
  CHECK(en.at(5).format() == "0101");
  CHECK(en.at(15).format() == "1111");
  CHECK_THROWS_AS(en.at(16), std::out_of_range);
  // 2^30 codes exceed the default 2^24 cap.
  CHECK_THROWS_AS(CodeEnumerator(30, Alphabet::binary), ConfigError);
  CHECK_NOTHROW(CodeEnumerator(30, Alphabet::binary, 1.0, std::uint64_t{1} << 31));
}

TEST_CASE("shifted_columns rotates each column progressively") {
  const TimeCode base = parse_code("00001111", 1.0);
  const SpaceTimeCode stc = shifted_columns(base, 2, 4);
  REQUIRE(stc.n_columns() == 4);
  CHECK(stc.columns[0].format() == "00001111");
  CHECK(stc.columns[1].format() == rotate(base, 2).format());
  CHECK(stc.columns[2].format() == rotate(base, 4).format());
  CHECK(stc.columns[3].format() == rotate(base, 6).format());
  // Shifts reduce modulo L, including negative ones.
  const SpaceTimeCode wrapped = shifted_columns(base, 10, 2);
  CHECK(wrapped.columns[1].format() == rotate(base, 2).format());
}

}  // TEST_SUITE
