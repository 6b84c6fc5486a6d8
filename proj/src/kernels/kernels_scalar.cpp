// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "lanes.hpp"

namespace stcris::kernels {
namespace {

// Rotator recurrences below re-anchor with a fresh sincos every kAnchor
// steps so phase error stays at a few ulp regardless of block length. The
// vector lane uses the same anchor interval, which keeps the lanes within
// rounding noise of each other.
constexpr std::size_t kAnchor = 256;

void coeff_batch_scalar(const std::uint32_t* on_bits, const std::uint32_t* neg_bits,
                        std::size_t count, const double* wre, const double* wim,
                        unsigned length, double* out_re, double* out_im) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t on = on_bits[i];
    const std::uint32_t neg = neg_bits ? neg_bits[i] : 0u;
    double re = 0.0;
    double im = 0.0;
    for (unsigned k = 0; k < length; ++k) {
      const std::uint32_t bit = 1u << k;
      if (!(on & bit)) continue;
      if (neg & bit) {
        re -= wre[k];
        im -= wim[k];
      } else {
        re += wre[k];
        im += wim[k];
      }
    }
    out_re[i] = re;
    out_im[i] = im;
  }
}

void array_factor_grid_scalar(const double* sin_theta, std::size_t n_angles,
                              const double* cre, const double* cim,
                              std::size_t n_cols, double spacing_wl,
                              double* out_re, double* out_im) {
  for (std::size_t a = 0; a < n_angles; ++a) {
    const double dphi = -2.0 * kPi * spacing_wl * sin_theta[a];
    double acc_re = 0.0;
    double acc_im = 0.0;
    double rot_re = 1.0;
    double rot_im = 0.0;
    const double step_re = std::cos(dphi);
    const double step_im = std::sin(dphi);
    for (std::size_t k = 0; k < n_cols; ++k) {
      if (k % kAnchor == 0 && k > 0) {
        const double ph = dphi * static_cast<double>(k);
        rot_re = std::cos(ph);
        rot_im = std::sin(ph);
      }
      acc_re += cre[k] * rot_re - cim[k] * rot_im;
      acc_im += cre[k] * rot_im + cim[k] * rot_re;
      const double nr = rot_re * step_re - rot_im * step_im;
      const double ni = rot_re * step_im + rot_im * step_re;
      rot_re = nr;
      rot_im = ni;
    }
    out_re[a] = acc_re;
    out_im[a] = acc_im;
  }
}

void tone_block_scalar(std::complex<double>* out, std::size_t n, cdouble gain,
                       double phase0, double dphase) {
  const double step_re = std::cos(dphase);
  const double step_im = std::sin(dphase);
  double cur_re = 0.0;
  double cur_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % kAnchor == 0) {
      const double ph = phase0 + dphase * static_cast<double>(i);
      cur_re = std::cos(ph);
      cur_im = std::sin(ph);
    }
    out[i] = {gain.real() * cur_re - gain.imag() * cur_im,
              gain.real() * cur_im + gain.imag() * cur_re};
    const double nr = cur_re * step_re - cur_im * step_im;
    const double ni = cur_re * step_im + cur_im * step_re;
    cur_re = nr;
    cur_im = ni;
  }
}

cdouble dot_tone_scalar(const std::complex<double>* x, std::size_t n,
                        double phase0, double dphase) {
  // Conjugate tone: multiply by exp(-i * phase).
  const double step_re = std::cos(-dphase);
  const double step_im = std::sin(-dphase);
  double cur_re = 0.0;
  double cur_im = 0.0;
  double acc_re = 0.0;
  double acc_im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % kAnchor == 0) {
      const double ph = -(phase0 + dphase * static_cast<double>(i));
      cur_re = std::cos(ph);
      cur_im = std::sin(ph);
    }
    const double xr = x[i].real();
    const double xi = x[i].imag();
    acc_re += xr * cur_re - xi * cur_im;
    acc_im += xr * cur_im + xi * cur_re;
    const double nr = cur_re * step_re - cur_im * step_im;
    const double ni = cur_re * step_im + cur_im * step_re;
    cur_re = nr;
    cur_im = ni;
  }
  return {acc_re, acc_im};
}

constexpr Dispatch kScalar = {
    "scalar",
    coeff_batch_scalar,
    array_factor_grid_scalar,
    tone_block_scalar,
    dot_tone_scalar,
};

}  // namespace

namespace detail {

const Dispatch& scalar_table() { return kScalar; }

}  // namespace detail

void fft_inplace(std::vector<cdouble>& x) {
  const std::size_t n = x.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft size must be a nonzero power of two");
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cdouble w = std::polar(1.0, ang * static_cast<double>(j));
        const cdouble u = x[i + j];
        const cdouble v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace stcris::kernels
