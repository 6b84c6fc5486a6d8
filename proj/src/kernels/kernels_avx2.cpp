// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA lane. Compiled with -mavx2 -mfma on x86-64 targets; on other
// targets (or compilers without the flags) this file degenerates to a stub
// that reports the lane as unavailable.
#include "lanes.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace stcris::kernels {
namespace {

constexpr std::size_t kAnchor = 256;

// out[a] gets all-ones when bit k of masks[a] is set.
inline __m256d bit_lanes(__m256i masks, unsigned k) {
  const __m256i bit = _mm256_set1_epi64x(std::int64_t{1} << k);
  const __m256i hit = _mm256_cmpeq_epi64(_mm256_and_si256(masks, bit), bit);
  return _mm256_castsi256_pd(hit);
}

void coeff_batch_avx2(const std::uint32_t* on_bits, const std::uint32_t* neg_bits,
                      std::size_t count, const double* wre, const double* wim,
                      unsigned length, double* out_re, double* out_im) {
  const __m256d signbit = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256i on = _mm256_set_epi64x(on_bits[i + 3], on_bits[i + 2],
                                         on_bits[i + 1], on_bits[i + 0]);
    const __m256i neg =
        neg_bits ? _mm256_set_epi64x(neg_bits[i + 3], neg_bits[i + 2],
                                     neg_bits[i + 1], neg_bits[i + 0])
                 : _mm256_setzero_si256();
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    // Plain adds in ascending k, exactly like the scalar lane, so the two
    // lanes agree bit for bit.
    for (unsigned k = 0; k < length; ++k) {
      const __m256d onm = bit_lanes(on, k);
      const __m256d sgn = _mm256_and_pd(bit_lanes(neg, k), signbit);
      const __m256d vre =
          _mm256_xor_pd(_mm256_and_pd(_mm256_set1_pd(wre[k]), onm), sgn);
      const __m256d vim =
          _mm256_xor_pd(_mm256_and_pd(_mm256_set1_pd(wim[k]), onm), sgn);
      acc_re = _mm256_add_pd(acc_re, vre);
      acc_im = _mm256_add_pd(acc_im, vim);
    }
    _mm256_storeu_pd(out_re + i, acc_re);
    _mm256_storeu_pd(out_im + i, acc_im);
  }
  if (i < count) {
    detail::scalar_table().coeff_batch(on_bits + i, neg_bits ? neg_bits + i : nullptr,
                                       count - i, wre, wim, length, out_re + i,
                                       out_im + i);
  }
}

void array_factor_grid_avx2(const double* sin_theta, std::size_t n_angles,
                            const double* cre, const double* cim,
                            std::size_t n_cols, double spacing_wl,
                            double* out_re, double* out_im) {
  std::size_t a = 0;
  for (; a + 4 <= n_angles; a += 4) {
    double dphi[4], sr[4], si[4];
    for (int j = 0; j < 4; ++j) {
      dphi[j] = -2.0 * kPi * spacing_wl * sin_theta[a + j];
      sr[j] = std::cos(dphi[j]);
      si[j] = std::sin(dphi[j]);
    }
    const __m256d step_re = _mm256_loadu_pd(sr);
    const __m256d step_im = _mm256_loadu_pd(si);
    __m256d rot_re = _mm256_set1_pd(1.0);
    __m256d rot_im = _mm256_setzero_pd();
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n_cols; ++k) {
      if (k % kAnchor == 0 && k > 0) {
        double rr[4], ri[4];
        for (int j = 0; j < 4; ++j) {
          const double ph = dphi[j] * static_cast<double>(k);
          rr[j] = std::cos(ph);
          ri[j] = std::sin(ph);
        }
        rot_re = _mm256_loadu_pd(rr);
        rot_im = _mm256_loadu_pd(ri);
      }
      const __m256d c_re = _mm256_set1_pd(cre[k]);
      const __m256d c_im = _mm256_set1_pd(cim[k]);
      acc_re = _mm256_fmadd_pd(c_re, rot_re, acc_re);
      acc_re = _mm256_fnmadd_pd(c_im, rot_im, acc_re);
      acc_im = _mm256_fmadd_pd(c_re, rot_im, acc_im);
      acc_im = _mm256_fmadd_pd(c_im, rot_re, acc_im);
      const __m256d nr = _mm256_fmsub_pd(rot_re, step_re,
                                         _mm256_mul_pd(rot_im, step_im));
      const __m256d ni = _mm256_fmadd_pd(rot_re, step_im,
                                         _mm256_mul_pd(rot_im, step_re));
      rot_re = nr;
      rot_im = ni;
    }
    _mm256_storeu_pd(out_re + a, acc_re);
    _mm256_storeu_pd(out_im + a, acc_im);
  }
  if (a < n_angles) {
    detail::scalar_table().array_factor_grid(sin_theta + a, n_angles - a, cre, cim,
                                             n_cols, spacing_wl, out_re + a,
                                             out_im + a);
  }
}

void tone_block_avx2(std::complex<double>* out, std::size_t n, cdouble gain,
                     double phase0, double dphase) {
  const double s4_re = std::cos(4.0 * dphase);
  const double s4_im = std::sin(4.0 * dphase);
  const __m256d step_re = _mm256_set1_pd(s4_re);
  const __m256d step_im = _mm256_set1_pd(s4_im);
  const __m256d g_re = _mm256_set1_pd(gain.real());
  const __m256d g_im = _mm256_set1_pd(gain.imag());
  __m256d cur_re = _mm256_setzero_pd();
  __m256d cur_im = _mm256_setzero_pd();
  double* p = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    if (i % kAnchor == 0) {
      double cr[4], ci[4];
      for (int j = 0; j < 4; ++j) {
        const double ph = phase0 + dphase * static_cast<double>(i + j);
        cr[j] = std::cos(ph);
        ci[j] = std::sin(ph);
      }
      cur_re = _mm256_loadu_pd(cr);
      cur_im = _mm256_loadu_pd(ci);
    }
    const __m256d v_re = _mm256_fmsub_pd(g_re, cur_re,
                                         _mm256_mul_pd(g_im, cur_im));
    const __m256d v_im = _mm256_fmadd_pd(g_re, cur_im,
                                         _mm256_mul_pd(g_im, cur_re));
    const __m256d lo = _mm256_unpacklo_pd(v_re, v_im);
    const __m256d hi = _mm256_unpackhi_pd(v_re, v_im);
    _mm256_storeu_pd(p + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(p + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    const __m256d nr = _mm256_fmsub_pd(cur_re, step_re,
                                       _mm256_mul_pd(cur_im, step_im));
    const __m256d ni = _mm256_fmadd_pd(cur_re, step_im,
                                       _mm256_mul_pd(cur_im, step_re));
    cur_re = nr;
    cur_im = ni;
  }
  if (i < n) {
    detail::scalar_table().tone_block(out + i, n - i, gain,
                                      phase0 + dphase * static_cast<double>(i),
                                      dphase);
  }
}

cdouble dot_tone_avx2(const std::complex<double>* x, std::size_t n,
                      double phase0, double dphase) {
  const double s4_re = std::cos(-4.0 * dphase);
  const double s4_im = std::sin(-4.0 * dphase);
  const __m256d step_re = _mm256_set1_pd(s4_re);
  const __m256d step_im = _mm256_set1_pd(s4_im);
  __m256d cur_re = _mm256_setzero_pd();
  __m256d cur_im = _mm256_setzero_pd();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const double* p = reinterpret_cast<const double*>(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    if (i % kAnchor == 0) {
      double cr[4], ci[4];
      for (int j = 0; j < 4; ++j) {
        const double ph = -(phase0 + dphase * static_cast<double>(i + j));
        cr[j] = std::cos(ph);
        ci[j] = std::sin(ph);
      }
      cur_re = _mm256_loadu_pd(cr);
      cur_im = _mm256_loadu_pd(ci);
    }
    const __m256d a0 = _mm256_loadu_pd(p + 2 * i);
    const __m256d a1 = _mm256_loadu_pd(p + 2 * i + 4);
    const __m256d t0 = _mm256_permute2f128_pd(a0, a1, 0x20);
    const __m256d t1 = _mm256_permute2f128_pd(a0, a1, 0x31);
    const __m256d x_re = _mm256_unpacklo_pd(t0, t1);
    const __m256d x_im = _mm256_unpackhi_pd(t0, t1);
    acc_re = _mm256_fmadd_pd(x_re, cur_re, acc_re);
    acc_re = _mm256_fnmadd_pd(x_im, cur_im, acc_re);
    acc_im = _mm256_fmadd_pd(x_re, cur_im, acc_im);
    acc_im = _mm256_fmadd_pd(x_im, cur_re, acc_im);
    const __m256d nr = _mm256_fmsub_pd(cur_re, step_re,
                                       _mm256_mul_pd(cur_im, step_im));
    const __m256d ni = _mm256_fmadd_pd(cur_re, step_im,
                                       _mm256_mul_pd(cur_im, step_re));
    cur_re = nr;
    cur_im = ni;
  }
  double buf_re[4], buf_im[4];
  _mm256_storeu_pd(buf_re, acc_re);
  _mm256_storeu_pd(buf_im, acc_im);
  cdouble total{buf_re[0] + buf_re[1] + buf_re[2] + buf_re[3],
                buf_im[0] + buf_im[1] + buf_im[2] + buf_im[3]};
  if (i < n) {
    total += detail::scalar_table().dot_tone(
        x + i, n - i, phase0 + dphase * static_cast<double>(i), dphase);
  }
  return total;
}

constexpr Dispatch kAvx2 = {
    "avx2",
    coeff_batch_avx2,
    array_factor_grid_avx2,
    tone_block_avx2,
    dot_tone_avx2,
};

}  // namespace

namespace detail {

const Dispatch* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &kAvx2;
  }
  return nullptr;
}

}  // namespace detail
}  // namespace stcris::kernels

#else  // stub for targets without AVX2 support

namespace stcris::kernels::detail {

const Dispatch* avx2_table() { return nullptr; }

}  // namespace stcris::kernels::detail

#endif
