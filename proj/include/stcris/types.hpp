// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stcris {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Usage / configuration problems (CLI exit code 2). Anything else that
// escapes is an internal error (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unnormalized sinc: sin(x)/x, sinc(0) = 1.
inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(x) / x;
}

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

}  // namespace stcris
