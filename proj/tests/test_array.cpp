#include <cmath>
#include <complex>

#include "doctest.h"
#include "stcris/array.hpp"
#include "stcris/codes.hpp"
#include "stcris/harmonics.hpp"
#include "stcris/types.hpp"

using namespace stcris;

namespace {

SteeringPlan make_plan(long shift, long harmonic = 1) {
  SteeringPlan p;
  p.base = parse_code("00001111", 3.74e-3);
  p.shift_per_column = shift;
  p.harmonic = harmonic;
  return p;
}

}  // namespace

TEST_SUITE("array") {

TEST_CASE("steering angle follows arcsin(2ns/L)") {
  CHECK(steering_angle(1, 1, 8).degrees ==
        doctest::Approx(14.477512185929924).epsilon(1e-12));
  CHECK(steering_angle(1, 2, 8).degrees == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(steering_angle(2, 1, 8).degrees == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(steering_angle(1, -2, 8).degrees == doctest::Approx(-30.0).epsilon(1e-12));
  CHECK(steering_angle(1, 0, 8).degrees == 0.0);
  CHECK_FALSE(steering_angle(1, 2, 8).endfire);

  const SteeringAngle edge = steering_angle(1, 4, 8);
  CHECK(edge.endfire);
  CHECK(edge.degrees == doctest::Approx(90.0));
  CHECK(steering_angle(-1, 4, 8).endfire);

  CHECK_THROWS_AS(steering_angle(1, 5, 8), ConfigError);
  CHECK_THROWS_AS(steering_angle(3, 2, 8), ConfigError);
  CHECK_THROWS_AS(steering_angle(1, 1, 0), ConfigError);
}

TEST_CASE("column coefficients walk the shift phase ramp") {
  const SteeringPlan plan = make_plan(2);
  const auto coeffs = column_coefficients(plan, 8);
  REQUIRE(coeffs.size() == 8);
  const double mag = std::abs(coeffs[0]);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(std::abs(std::abs(coeffs[k]) - mag) < 1e-12);
    // Each column advances the phase by 2 pi n s / L = pi/2.
    const double expected =
        std::arg(coeffs[0]) + kPi / 2.0 * static_cast<double>(k);
    CHECK(std::abs(wrap_angle(std::arg(coeffs[k]) - expected)) < 1e-12);
  }
}

TEST_CASE("angle grid covers both endpoints") {
  const auto g = angle_grid(-90.0, 90.0, 0.1);
  CHECK(g.size() == 1801);
  CHECK(g.front() == doctest::Approx(-90.0));
  CHECK(g.back() == doctest::Approx(90.0));
  const auto g2 = angle_grid(0.0, 1.0, 0.3);
  CHECK(g2.size() == 4);  // 0.0 0.3 0.6 0.9
  CHECK_THROWS_AS(angle_grid(1.0, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(angle_grid(0.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("pattern peaks land on the predicted steering angles") {
  ArrayGeometry geom;  // 8 columns, half-wavelength pitch
  const auto grid = angle_grid(-90.0, 90.0, 0.1);

  for (long s : {1L, 2L, 3L}) {
    const auto coeffs = column_coefficients(make_plan(s), geom.num_columns);
    const Pattern p = array_factor(coeffs, geom, grid);
    const PatternPeak peak = find_peak(p);
    const double predicted = steering_angle(1, s, 8).degrees;
    CHECK(std::abs(peak.theta_deg - predicted) < 0.5);
    CHECK(peak.mag_db == doctest::Approx(0.0).epsilon(1e-3));
  }

  // Negative shift mirrors the beam.
  const auto coeffs = column_coefficients(make_plan(-2), geom.num_columns);
  const PatternPeak peak = find_peak(array_factor(coeffs, geom, grid));
  CHECK(std::abs(peak.theta_deg - -30.0) < 0.5);
}

TEST_CASE("coherent peak magnitude equals columns times ring") {
  ArrayGeometry geom;
  const auto coeffs = column_coefficients(make_plan(2), geom.num_columns);
  const auto grid = angle_grid(-90.0, 90.0, 0.01);
  const Pattern p = array_factor(coeffs, geom, grid);
  double best = 0.0;
  for (const auto& v : p.values) best = std::max(best, std::abs(v));
  // All 8 columns add in phase at the steering angle.
  CHECK(best == doctest::Approx(8.0 * std::abs(coeffs[0])).epsilon(1e-5));
}

TEST_CASE("zero shift keeps the beam at broadside") {
  ArrayGeometry geom;
  const auto coeffs = column_coefficients(make_plan(0), geom.num_columns);
  const Pattern p = array_factor(coeffs, geom, angle_grid(-90.0, 90.0, 0.1));
  const PatternPeak peak = find_peak(p);
  CHECK(std::abs(peak.theta_deg) < 1e-9);
  // Uniform excitation is symmetric about broadside.
  const std::size_t n = p.mag_db.size();
  for (std::size_t i = 0; i < n / 4; ++i) {
    CHECK(p.mag_db[i] == doctest::Approx(p.mag_db[n - 1 - i]).epsilon(1e-9));
  }
}

TEST_CASE("normalization puts the maximum at 0 dB") {
  ArrayGeometry geom;
  const auto coeffs = column_coefficients(make_plan(1), geom.num_columns);
  const Pattern p = array_factor(coeffs, geom, angle_grid(-90.0, 90.0, 0.5));
  double top = -1e9;
  for (double db : p.mag_db) {
    CHECK(db <= 0.0);
    top = std::max(top, db);
  }
  CHECK(top == doctest::Approx(0.0));
}

TEST_CASE("cosine element factor tapers wide angles") {
  ArrayGeometry geom;
  const auto coeffs = column_coefficients(make_plan(0), geom.num_columns);
  const auto grid = angle_grid(-90.0, 90.0, 1.0);
  const Pattern bare = array_factor(coeffs, geom, grid, false);
  const Pattern tapered = array_factor(coeffs, geom, grid, true);
  for (std::size_t a = 0; a < grid.size(); ++a) {
    const double cosw = std::cos(deg_to_rad(grid[a]));
    CHECK(std::abs(tapered.values[a] - bare.values[a] * cosw) < 1e-12);
  }
}

TEST_CASE("array factor validates inputs") {
  ArrayGeometry geom;
  const auto coeffs = column_coefficients(make_plan(1), 4);  // wrong count
  CHECK_THROWS_AS(array_factor(coeffs, geom, angle_grid(-90.0, 90.0, 1.0)),
                  ConfigError);
  const auto ok = column_coefficients(make_plan(1), geom.num_columns);
  CHECK_THROWS_AS(array_factor(ok, geom, {0.0}), ConfigError);
  CHECK_THROWS_AS(array_factor(ok, geom, {-100.0, 0.0}), ConfigError);
  ArrayGeometry bad = geom;
  bad.spacing_wl = 0.0;
  CHECK_THROWS_AS(array_factor(ok, bad, angle_grid(0.0, 10.0, 1.0)), ConfigError);
}

TEST_CASE("all-zero coefficients produce a flat floor, not NaN") {
  ArrayGeometry geom;
  geom.num_columns = 4;
  const std::vector<cdouble> zeros(4, cdouble{0.0, 0.0});
  const Pattern p = array_factor(zeros, geom, angle_grid(-10.0, 10.0, 1.0));
  for (double db : p.mag_db) {
    CHECK(std::isfinite(db));
    CHECK(db == doctest::Approx(p.mag_db[0]));
  }
}

TEST_CASE("peak refinement beats the raw grid") {
  // True maximum at asin(0.25) = 14.4775 degrees; a coarse 1-degree grid
  // plus quadratic refinement should still land within 0.05 degrees.
  ArrayGeometry geom;
  const auto coeffs = column_coefficients(make_plan(1), geom.num_columns);
  const Pattern p = array_factor(coeffs, geom, angle_grid(-90.0, 90.0, 1.0));
  const PatternPeak peak = find_peak(p);
  CHECK(std::abs(peak.theta_deg - 14.477512185929924) < 0.05);
}

}  // TEST_SUITE
