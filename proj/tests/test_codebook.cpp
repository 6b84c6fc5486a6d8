#include <bit>
#include <cmath>
#include <complex>
#include <set>
#include <string>

#include "doctest.h"
#include "stcris/codebook.hpp"
#include "stcris/codes.hpp"
#include "stcris/harmonics.hpp"
#include "stcris/types.hpp"

using namespace stcris;

namespace {

// Phase distance on the circle.
double phase_gap(double a, double b) { return std::abs(wrap_angle(a - b)); }

void check_psk_geometry(const Codebook& book, double ring_tol, double phase_tol) {
  const std::size_t m = book.scheme.order;
  REQUIRE(book.entries.size() == m);
  std::set<std::string> texts;
  for (std::size_t k = 0; k < m; ++k) {
    const CodebookEntry& e = book.entries[k];
    CHECK(e.symbol == k);
    texts.insert(e.code.format());
    // Stored coefficient must be the code's own coefficient, not a target.
    CHECK(std::abs(e.coefficient -
                   harmonic_coefficient(e.code, book.scheme.harmonic)) == 0.0);
    CHECK(std::abs(std::abs(e.coefficient) - book.ring_amplitude) <=
          ring_tol * book.ring_amplitude + 1e-12);
    CHECK(phase_gap(std::arg(e.coefficient), book.scheme.target_phase(k)) <=
          phase_tol);
  }
  CHECK(texts.size() == m);  // no code reuse across symbols
}

}  // namespace

TEST_SUITE("codebook") {

TEST_CASE("schemes resolve by name") {
  CHECK(scheme_by_name("bpsk").order == 2);
  CHECK(scheme_by_name("qpsk").order == 4);
  CHECK(scheme_by_name("8psk").order == 8);
  CHECK(scheme_by_name("16psk").order == 16);
  CHECK_THROWS_AS(scheme_by_name("64qam"), ConfigError);

  ModulationScheme s;
  s.order = 3;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.order = 1;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.order = 8;
  CHECK_NOTHROW(s.validate());
  CHECK(s.bits_per_symbol() == 3);
  s.phase_offset = 0.25;
  CHECK(s.target_phase(2) == doctest::Approx(0.25 + kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("gray code round-trips and flips one bit per step") {
  CHECK(gray_encode(0) == 0);
  CHECK(gray_encode(1) == 1);
  CHECK(gray_encode(2) == 3);
  CHECK(gray_encode(3) == 2);
  for (std::size_t k = 0; k < 256; ++k) {
    CHECK(gray_decode(gray_encode(k)) == k);
  }
  for (std::size_t k = 0; k + 1 < 16; ++k) {
    CHECK(std::popcount(gray_encode(k) ^ gray_encode(k + 1)) == 1);
  }
}

TEST_CASE("shift design hits the exact PSK grid") {
  const TimeCode base = parse_code("00001111", 3.74e-3);

  struct Case {
    const char* name;
    long expected_step;  // smallest usable per-symbol shift
  };
  for (const auto& c : {Case{"bpsk", 4}, Case{"qpsk", 2}, Case{"8psk", 1}}) {
    const Codebook book = design_by_shift(base, scheme_by_name(c.name));
    CHECK(book.code_length == 8);
    CHECK(book.bit_duration == doctest::Approx(3.74e-3));
    CHECK(book.ring_amplitude == doctest::Approx(0.31830988618379067).epsilon(1e-14));
    // Realized anchor phase is the base coefficient's own phase.
    CHECK(book.scheme.phase_offset ==
          doctest::Approx(std::arg(harmonic_coefficient(base, 1))).epsilon(1e-15));
    check_psk_geometry(book, 1e-12, 1e-12);
    CHECK(book.quality.max_phase_err_rad <= 1e-12);
    CHECK(book.quality.amp_spread <= 1e-12);
    // Symbol 1 sits one step of the underlying shift away from symbol 0.
    CHECK(book.entries[1].code.format() ==
          rotate(base, c.expected_step).format());
  }

  const Codebook b16 = design_by_shift(
      parse_code("0000000011111111", 3.74e-3), scheme_by_name("16psk"));
  CHECK(b16.ring_amplitude == doctest::Approx(0.31830988618379067).epsilon(1e-14));
  check_psk_geometry(b16, 1e-12, 1e-12);
  CHECK(b16.entries[1].code.format() ==
        rotate(parse_code("0000000011111111", 3.74e-3), 1).format());
}

TEST_CASE("shift design spacing is exact in phase") {
  const Codebook book =
      design_by_shift(parse_code("00001111", 1.0), scheme_by_name("qpsk"));
  for (std::size_t k = 0; k < 4; ++k) {
    const double step = wrap_angle(
        std::arg(book.entries[(k + 1) % 4].coefficient) -
        std::arg(book.entries[k].coefficient));
    CHECK(std::abs(step - kPi / 2.0) < 1e-9);
  }
}

TEST_CASE("shift design works when the step generates the grid indirectly") {
  // L=8, n=3: a shift of s rotates the phase by 2*pi*3s/8; the smallest s
  // with a usable 90-degree sub-grid is s=2 (rotation 3*pi/2), which walks
  // the QPSK grid in a permuted order and needs the modular-inverse fixup.
  ModulationScheme qpsk = scheme_by_name("qpsk");
  qpsk.harmonic = 3;
  const TimeCode base = parse_code("00001111", 1.0);
  const Codebook book = design_by_shift(base, qpsk);
  check_psk_geometry(book, 1e-12, 1e-12);
}

TEST_CASE("shift design failure modes") {
  // L=4 offers only 90-degree phase steps at n=1: 16PSK is unreachable.
  CHECK_THROWS_AS(design_by_shift(parse_code("0011", 1.0), scheme_by_name("16psk")),
                  ConfigError);
  // L=2, n=1: the only nonzero rotation is pi, never a 4-point grid.
  CHECK_THROWS_AS(design_by_shift(parse_code("01", 1.0), scheme_by_name("qpsk")),
                  ConfigError);
  // Constant code has no first harmonic to rotate.
  CHECK_THROWS_AS(design_by_shift(parse_code("11111111", 1.0), scheme_by_name("qpsk")),
                  ConfigError);
}

TEST_CASE("shift design accepts ternary bases") {
  const TimeCode base = parse_code("+0-0", 1.0, Alphabet::ternary);
  const Codebook book = design_by_shift(base, scheme_by_name("qpsk"));
  check_psk_geometry(book, 1e-12, 1e-12);
  CHECK(book.ring_amplitude > 0.4);  // ternary beats the binary 1/pi ring here
}

TEST_CASE("search finds the maximal ring for QPSK at L=8") {
  ModulationScheme qpsk = scheme_by_name("qpsk");
  const Codebook book = search_codebook(8, qpsk, 0.05, kPi / 16.0);
  // The half-period block rotations realize the offset-0 grid exactly, so
  // the search must return the 1/pi ring with zero error.
  CHECK(book.ring_amplitude == doctest::Approx(0.31830988618379067).epsilon(1e-12));
  CHECK(book.quality.max_phase_err_rad <= 1e-9);
  check_psk_geometry(book, 0.05, kPi / 16.0);
}

TEST_CASE("search never returns a smaller ring than the shift construction") {
  const TimeCode base = parse_code("00001111", 1.0);
  for (const char* name : {"bpsk", "qpsk", "8psk"}) {
    const Codebook shift_book = design_by_shift(base, scheme_by_name(name));
    ModulationScheme anchored = scheme_by_name(name);
    anchored.phase_offset = shift_book.scheme.phase_offset;
    const Codebook searched = search_codebook(8, anchored, 0.05, kPi / 16.0);
    CHECK(searched.ring_amplitude >= shift_book.ring_amplitude - 1e-12);
    check_psk_geometry(searched, 0.05, kPi / 16.0);
  }
}

TEST_CASE("search respects tolerances or reports the shortfall") {
  ModulationScheme qpsk = scheme_by_name("qpsk");
  qpsk.phase_offset = 0.3;  // off-grid anchor
  CHECK_THROWS_AS(search_codebook(8, qpsk, 0.05, 1e-7), ConfigError);
  try {
    search_codebook(8, qpsk, 0.05, 1e-7);
  } catch (const ConfigError& e) {
    // The failure message quantifies the best phase error per empty slot.
    CHECK(std::string(e.what()).find("phase") != std::string::npos);
  }
  CHECK_THROWS_AS(search_codebook(8, qpsk, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(search_codebook(8, qpsk, 0.6, 0.1), ConfigError);
  CHECK_THROWS_AS(search_codebook(8, qpsk, 0.05, kPi), ConfigError);
}

TEST_CASE("search over the ternary alphabet widens the ring") {
  ModulationScheme bpsk = scheme_by_name("bpsk");
  const Codebook binary_book = search_codebook(4, bpsk, 0.05, kPi / 8.0);
  const Codebook ternary_book =
      search_codebook(4, bpsk, 0.05, kPi / 8.0, Alphabet::ternary);
  CHECK(ternary_book.ring_amplitude > binary_book.ring_amplitude);
  check_psk_geometry(ternary_book, 0.05, kPi / 8.0);
}

TEST_CASE("leakage metrics flag narrow-pulse codebooks") {
  // Single-on-bit codes put most energy outside the first harmonic.
  const Codebook narrow =
      design_by_shift(parse_code("00000001", 1.0), scheme_by_name("bpsk"));
  const LeakageReport bad = leakage_metrics(narrow);
  CHECK(bad.max_ratio > 0.25);
  CHECK(bad.symbols[0].flagged);

  // The half-period block kills the second harmonic outright.
  const Codebook block =
      design_by_shift(parse_code("00001111", 1.0), scheme_by_name("qpsk"));
  const LeakageReport good = leakage_metrics(block);
  CHECK(good.max_ratio < 0.25);
  for (const auto& s : good.symbols) {
    CHECK_FALSE(s.flagged);
    CHECK(s.second_harmonic < 1e-12);
  }
}

TEST_CASE("payload bits map through gray labels to symbols") {
  // 0xDE = 11011110: pairs 11,01,11,10 carry gray labels 3,1,3,2.
  const auto symbols = map_bits_to_symbols("11011110", 4);
  REQUIRE(symbols.size() == 4);
  CHECK(symbols[0] == 2);
  CHECK(symbols[1] == 1);
  CHECK(symbols[2] == 2);
  CHECK(symbols[3] == 3);

  // One symbol per bit for BPSK.
  const auto bpsk = map_bits_to_symbols("10", 2);
  CHECK(bpsk[0] == 1);
  CHECK(bpsk[1] == 0);

  CHECK_THROWS_AS(map_bits_to_symbols("110", 4), ConfigError);   // ragged tail
  CHECK_THROWS_AS(map_bits_to_symbols("1102", 4), ConfigError);  // non-bit char
}

TEST_CASE("schedules repeat each symbol's code reps times") {
  const Codebook book =
      design_by_shift(parse_code("00001111", 1.0), scheme_by_name("qpsk"));
  const auto sched = map_bits_to_schedule(book, "1101", 2);
  REQUIRE(sched.size() == 4);  // 2 symbols x 2 repetitions
  CHECK(sched[0].format() == book.entries[2].code.format());
  CHECK(sched[1].format() == book.entries[2].code.format());
  CHECK(sched[2].format() == book.entries[1].code.format());
  CHECK(sched[3].format() == book.entries[1].code.format());
  CHECK_THROWS_AS(map_bits_to_schedule(book, "1101", 0), ConfigError);
}

}  // TEST_SUITE
