// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2 closeness kernels. Compiled with per-function target attributes so the
// rest of this translation unit (and any inline code it instantiates) stays
// baseline x86-64.
#include "tcscore/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define TCSCORE_HAS_AVX2_KERNELS 1
#include <immintrin.h>
#else
#define TCSCORE_HAS_AVX2_KERNELS 0
#endif

namespace tcscore::kernels::detail {

#if TCSCORE_HAS_AVX2_KERNELS

namespace {

#define TCSCORE_AVX2 __attribute__((target("avx2")))

TCSCORE_AVX2 inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// Lanes whose |v| is finite (NaN compares false).
TCSCORE_AVX2 inline __m256d finite_mask(__m256d v) {
  return _mm256_cmp_pd(abs_pd(v), _mm256_set1_pd(__builtin_inf()), _CMP_LT_OQ);
}

// Lane-wise scaled_modulus for four (a, b) pairs.
TCSCORE_AVX2 inline __m256d scaled_modulus_pd(__m256d a, __m256d b) {
  const __m256d aa = abs_pd(a);
  const __m256d bb = abs_pd(b);
  const __m256d m = _mm256_max_pd(aa, bb);
  const __m256d zero = _mm256_cmp_pd(m, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d safe_m = _mm256_blendv_pd(m, _mm256_set1_pd(1.0), zero);
  const __m256d r1 = _mm256_div_pd(a, safe_m);
  const __m256d r2 = _mm256_div_pd(b, safe_m);
  const __m256d s = _mm256_add_pd(_mm256_mul_pd(r1, r1), _mm256_mul_pd(r2, r2));
  const __m256d mod = _mm256_mul_pd(m, _mm256_sqrt_pd(s));
  return _mm256_blendv_pd(mod, _mm256_setzero_pd(), zero);
}

}  // namespace

TCSCORE_AVX2 bool all_close_real_avx2(const double* x, const double* y, std::size_t n, double atol,
                                      double rtol) noexcept {
  const __m256d va = _mm256_set1_pd(atol);
  const __m256d vr = _mm256_set1_pd(rtol);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d diff = abs_pd(_mm256_sub_pd(vx, vy));
    const __m256d bound = _mm256_add_pd(va, _mm256_mul_pd(vr, abs_pd(vy)));
    __m256d ok = _mm256_cmp_pd(diff, bound, _CMP_LE_OQ);
    ok = _mm256_and_pd(ok, _mm256_and_pd(finite_mask(vx), finite_mask(vy)));
    const int mask = _mm256_movemask_pd(ok);
    if (mask != 0xF) {
      // Non-finite or failing lanes: the scalar rule decides.
      for (int lane = 0; lane < 4; ++lane) {
        if ((mask >> lane & 1) == 0 && !close_real(x[i + lane], y[i + lane], atol, rtol)) return false;
      }
    }
  }
  return all_close_real_scalar(x + i, y + i, n - i, atol, rtol);
}

TCSCORE_AVX2 bool all_close_complex_avx2(const double* x, const double* y, std::size_t pairs, double atol,
                                         double rtol) noexcept {
  const __m256d va = _mm256_set1_pd(atol);
  const __m256d vr = _mm256_set1_pd(rtol);
  std::size_t i = 0;
  for (; i + 4 <= pairs; i += 4) {
    const double* px = x + 2 * i;
    const double* py = y + 2 * i;
    const __m256d x01 = _mm256_loadu_pd(px);
    const __m256d x23 = _mm256_loadu_pd(px + 4);
    const __m256d y01 = _mm256_loadu_pd(py);
    const __m256d y23 = _mm256_loadu_pd(py + 4);
    // De-interleave to (re0, re2, re1, re3) / (im0, im2, im1, im3); lane
    // order is irrelevant for an all-pass check but is mapped back below.
    const __m256d xre = _mm256_unpacklo_pd(x01, x23);
    const __m256d xim = _mm256_unpackhi_pd(x01, x23);
    const __m256d yre = _mm256_unpacklo_pd(y01, y23);
    const __m256d yim = _mm256_unpackhi_pd(y01, y23);

    const __m256d diff = scaled_modulus_pd(_mm256_sub_pd(xre, yre), _mm256_sub_pd(xim, yim));
    const __m256d bound = _mm256_add_pd(va, _mm256_mul_pd(vr, scaled_modulus_pd(yre, yim)));
    __m256d ok = _mm256_cmp_pd(diff, bound, _CMP_LE_OQ);
    ok = _mm256_and_pd(ok, _mm256_and_pd(finite_mask(xre), finite_mask(xim)));
    ok = _mm256_and_pd(ok, _mm256_and_pd(finite_mask(yre), finite_mask(yim)));
    const int mask = _mm256_movemask_pd(ok);
    if (mask != 0xF) {
      static constexpr int kPairOfLane[4] = {0, 2, 1, 3};
      for (int lane = 0; lane < 4; ++lane) {
        if ((mask >> lane & 1) != 0) continue;
        const std::size_t k = 2 * static_cast<std::size_t>(kPairOfLane[lane]);
        if (!close_complex(px[k], px[k + 1], py[k], py[k + 1], atol, rtol)) return false;
      }
    }
  }
  return all_close_complex_scalar(x + 2 * i, y + 2 * i, pairs - i, atol, rtol);
}

bool avx2_compiled() noexcept { return true; }

#else

bool all_close_real_avx2(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept {
  return all_close_real_scalar(x, y, n, atol, rtol);
}

bool all_close_complex_avx2(const double* x, const double* y, std::size_t pairs, double atol,
                            double rtol) noexcept {
  return all_close_complex_scalar(x, y, pairs, atol, rtol);
}

bool avx2_compiled() noexcept { return false; }

#endif

}  // namespace tcscore::kernels::detail
