// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stcris/types.hpp"

namespace stcris::kernels {

// Hot loops live behind this table so the scalar reference implementation
// and the vectorized one stay interchangeable. The scalar lane is the
// definition of correct; the AVX2 lane must agree with it (bit-exact for
// coeff_batch, to rounding noise for the others) and is selected at runtime
// when the CPU supports it.
struct Dispatch {
  const char* name;

  // Batched harmonic coefficients. Code i is described by bit masks:
  // on_bits[i] bit k set when state k is nonzero, neg_bits (may be null)
  // bit k set when state k is -1. The per-bit complex weights are
  // (wre[k], wim[k]); the output is a masked signed sum over k ascending.
  void (*coeff_batch)(const std::uint32_t* on_bits, const std::uint32_t* neg_bits,
                      std::size_t count, const double* wre, const double* wim,
                      unsigned length, double* out_re, double* out_im);

  // Far-field sum over columns for a grid of angles:
  // out[a] = sum_k c[k] * exp(-i * 2*pi * spacing_wl * k * sin_theta[a]).
  void (*array_factor_grid)(const double* sin_theta, std::size_t n_angles,
                            const double* cre, const double* cim,
                            std::size_t n_cols, double spacing_wl,
                            double* out_re, double* out_im);

  // out[i] = gain * exp(i * (phase0 + i_sample * dphase)) for n samples.
  void (*tone_block)(std::complex<double>* out, std::size_t n, cdouble gain,
                     double phase0, double dphase);

  // Correlate a block against a tone: sum_i x[i] * exp(-i*(phase0 + i*dphase)).
  cdouble (*dot_tone)(const std::complex<double>* x, std::size_t n,
                      double phase0, double dphase);
};

// Currently selected lane. Defaults to the best supported lane; the
// STC_KERNELS environment variable ("scalar" or "avx2") overrides.
const Dispatch& active();

// Specific lanes for equivalence testing. avx2() is null when the build or
// the CPU lacks support.
const Dispatch& scalar();
const Dispatch* avx2();

// Force a lane by name ("scalar" or "avx2"). Throws ConfigError for unknown
// or unsupported names.
void force(const std::string& name);

// In-place radix-2 FFT, n a power of two. Deliberately a plain scalar
// routine: spectrum output must be byte-for-byte reproducible across
// machines, which rules out planned/tuned FFT libraries.
void fft_inplace(std::vector<cdouble>& x);

}  // namespace stcris::kernels
