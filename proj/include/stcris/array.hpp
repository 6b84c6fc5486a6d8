// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "stcris/codes.hpp"
#include "stcris/types.hpp"

namespace stcris {

struct ArrayGeometry {
  std::size_t num_columns = 8;
  double spacing_wl = 0.5;  // element pitch in wavelengths

  void validate() const;
};

// Per-column shift plan: column k carries rotate(base, k * shift_per_column)
// and the receiver listens in harmonic n.
struct SteeringPlan {
  TimeCode base;
  long shift_per_column = 0;
  long harmonic = 1;
};

struct SteeringAngle {
  double degrees = 0.0;
  bool endfire = false;  // |2ns/L| == 1, main lobe at the array plane
};

// Main-lobe direction arcsin(2ns/L) for half-wavelength-style steering.
// Throws when |2ns/L| > 1 (no real angle).
SteeringAngle steering_angle(long n, long s, std::size_t length);

// Harmonic-n coefficient of each column, computed from the rotated codes
// themselves. Deliberately not the closed-form phase ramp: this route
// exercises rotation + coefficient synthesis end to end, and tests compare
// it against the ramp.
std::vector<cdouble> column_coefficients(const SteeringPlan& plan,
                                         std::size_t n_columns);

struct Pattern {
  std::vector<double> theta_deg;
  std::vector<cdouble> values;
  std::vector<double> mag_db;  // normalized, 0 dB at the pattern maximum
};

// Far-field sum of column coefficients over an angle grid (degrees).
// Optionally weights each angle's sum by cos(theta) as a crude element factor.
Pattern array_factor(const std::vector<cdouble>& coeffs, const ArrayGeometry& geom,
                     const std::vector<double>& grid_deg,
                     bool cosine_element = false);

// Convenience: uniform grid [lo, hi] with the given step (degrees).
std::vector<double> angle_grid(double lo_deg, double hi_deg, double step_deg);

struct PatternPeak {
  double theta_deg = 0.0;
  double mag_db = 0.0;
};

// Grid argmax refined by a quadratic fit through the three samples around
// it. Ties go to the smaller |angle|, then to the more negative angle.
PatternPeak find_peak(const Pattern& pattern);

}  // namespace stcris
