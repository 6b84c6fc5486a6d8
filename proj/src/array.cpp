// SPDX-License-Identifier: Apache-2.0
#include "stcris/array.hpp"

#include <algorithm>
#include <cmath>

#include "stcris/harmonics.hpp"
#include "stcris/kernels.hpp"

namespace stcris {

void ArrayGeometry::validate() const {
  if (num_columns < 1) throw ConfigError("array needs at least one column");
  if (!(spacing_wl > 0.0) || !std::isfinite(spacing_wl)) {
    throw ConfigError("element spacing must be positive (in wavelengths)");
  }
}

SteeringAngle steering_angle(long n, long s, std::size_t length) {
  if (length == 0) throw ConfigError("code length must be at least 1");
  const double x = 2.0 * static_cast<double>(n) * static_cast<double>(s) /
                   static_cast<double>(length);
  if (std::fabs(x) > 1.0) {
    throw ConfigError("evanescent: no real steering angle for 2ns/L = " +
                      std::to_string(x));
  }
  SteeringAngle a;
  a.degrees = rad_to_deg(std::asin(x));
  // Compare the integer quantity, not the rounded double.
  const long lhs = 2 * n * s;
  a.endfire = (lhs == static_cast<long>(length) || -lhs == static_cast<long>(length));
  return a;
}

std::vector<cdouble> column_coefficients(const SteeringPlan& plan,
                                         std::size_t n_columns) {
  if (n_columns == 0) throw ConfigError("array needs at least one column");
  const SpaceTimeCode stc =
      shifted_columns(plan.base, plan.shift_per_column, n_columns);
  std::vector<cdouble> out;
  out.reserve(n_columns);
  for (const TimeCode& col : stc.columns) {
    out.push_back(harmonic_coefficient(col, plan.harmonic));
  }
  return out;
}

std::vector<double> angle_grid(double lo_deg, double hi_deg, double step_deg) {
  if (!(step_deg > 0.0) || hi_deg < lo_deg) {
    throw ConfigError("bad angle grid (need lo <= hi and step > 0)");
  }
  std::vector<double> grid;
  const std::size_t count =
      static_cast<std::size_t>(std::floor((hi_deg - lo_deg) / step_deg + 0.5)) + 1;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(lo_deg + step_deg * static_cast<double>(i));
  }
  if (!grid.empty() && grid.back() > hi_deg + 1e-9) grid.pop_back();
  return grid;
}

Pattern array_factor(const std::vector<cdouble>& coeffs, const ArrayGeometry& geom,
                     const std::vector<double>& grid_deg, bool cosine_element) {
  geom.validate();
  if (coeffs.empty()) throw ConfigError("empty coefficient list");
  if (coeffs.size() != geom.num_columns) {
    throw ConfigError("coefficient count " + std::to_string(coeffs.size()) +
                      " does not match column count " +
                      std::to_string(geom.num_columns));
  }
  if (grid_deg.size() < 2) throw ConfigError("angle grid needs at least 2 samples");
  for (double th : grid_deg) {
    if (th < -90.0 - 1e-9 || th > 90.0 + 1e-9) {
      throw ConfigError("angle grid must stay within [-90, 90] degrees");
    }
  }

  const std::size_t n_angles = grid_deg.size();
  const std::size_t n_cols = coeffs.size();
  std::vector<double> sins(n_angles), cre(n_cols), cim(n_cols);
  for (std::size_t a = 0; a < n_angles; ++a) sins[a] = std::sin(deg_to_rad(grid_deg[a]));
  for (std::size_t k = 0; k < n_cols; ++k) {
    cre[k] = coeffs[k].real();
    cim[k] = coeffs[k].imag();
  }
  std::vector<double> out_re(n_angles), out_im(n_angles);
  kernels::active().array_factor_grid(sins.data(), n_angles, cre.data(), cim.data(),
                                      n_cols, geom.spacing_wl, out_re.data(),
                                      out_im.data());

  Pattern p;
  p.theta_deg = grid_deg;
  p.values.resize(n_angles);
  p.mag_db.resize(n_angles);
  double peak = 0.0;
  for (std::size_t a = 0; a < n_angles; ++a) {
    cdouble v{out_re[a], out_im[a]};
    if (cosine_element) v *= std::cos(deg_to_rad(grid_deg[a]));
    p.values[a] = v;
    peak = std::max(peak, std::abs(v));
  }
  if (peak <= 0.0) peak = 1.0;  // all-zero pattern: report a flat floor
  for (std::size_t a = 0; a < n_angles; ++a) {
    const double mag = std::abs(p.values[a]);
    p.mag_db[a] = 20.0 * std::log10(std::max(mag / peak, 1e-15));
  }
  return p;
}

PatternPeak find_peak(const Pattern& pattern) {
  const std::size_t n = pattern.theta_deg.size();
  if (n == 0 || pattern.values.size() != n) {
    throw ConfigError("empty pattern");
  }
  std::size_t best = 0;
  auto better = [&](std::size_t a, std::size_t b) {
    // true when a beats b
    const double ma = std::abs(pattern.values[a]);
    const double mb = std::abs(pattern.values[b]);
    if (ma != mb) return ma > mb;
    const double aa = std::fabs(pattern.theta_deg[a]);
    const double ab = std::fabs(pattern.theta_deg[b]);
    if (aa != ab) return aa < ab;
    return pattern.theta_deg[a] < pattern.theta_deg[b];
  };
  for (std::size_t i = 1; i < n; ++i) {
    if (better(i, best)) best = i;
  }

  PatternPeak peak;
  peak.theta_deg = pattern.theta_deg[best];
  peak.mag_db = pattern.mag_db.empty() ? 0.0 : pattern.mag_db[best];
  if (best == 0 || best + 1 == n) return peak;  // no room to refine at the edge

  // Quadratic fit through the dB values either side of the argmax.
  const double alpha = pattern.mag_db[best - 1];
  const double beta = pattern.mag_db[best];
  const double gamma = pattern.mag_db[best + 1];
  const double denom = alpha - 2.0 * beta + gamma;
  if (denom >= 0.0) return peak;  // plateau or saddle: keep the grid point
  const double shift = 0.5 * (alpha - gamma) / denom;
  const double step = pattern.theta_deg[best + 1] - pattern.theta_deg[best];
  peak.theta_deg += shift * step;
  peak.mag_db = beta - 0.25 * (alpha - gamma) * shift;
  return peak;
}

}  // namespace stcris
