// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)
#define TCSCORE_HAS_NEON_KERNELS 1
#include <arm_neon.h>
#else
#define TCSCORE_HAS_NEON_KERNELS 0
#endif

namespace tcscore::kernels::detail {

#if TCSCORE_HAS_NEON_KERNELS

namespace {

inline uint64x2_t finite_mask(float64x2_t v) { return vcltq_f64(vabsq_f64(v), vdupq_n_f64(__builtin_inf())); }

inline float64x2_t scaled_modulus_f64(float64x2_t a, float64x2_t b) {
  const float64x2_t m = vmaxq_f64(vabsq_f64(a), vabsq_f64(b));
  const uint64x2_t zero = vceqq_f64(m, vdupq_n_f64(0.0));
  const float64x2_t safe_m = vbslq_f64(zero, vdupq_n_f64(1.0), m);
  const float64x2_t r1 = vdivq_f64(a, safe_m);
  const float64x2_t r2 = vdivq_f64(b, safe_m);
  const float64x2_t s = vaddq_f64(vmulq_f64(r1, r1), vmulq_f64(r2, r2));
  const float64x2_t mod = vmulq_f64(m, vsqrtq_f64(s));
  return vbslq_f64(zero, vdupq_n_f64(0.0), mod);
}

}  // namespace

bool all_close_real_neon(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept {
  const float64x2_t va = vdupq_n_f64(atol);
  const float64x2_t vr = vdupq_n_f64(rtol);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    const float64x2_t diff = vabsq_f64(vsubq_f64(vx, vy));
    const float64x2_t bound = vaddq_f64(va, vmulq_f64(vr, vabsq_f64(vy)));
    uint64x2_t ok = vcleq_f64(diff, bound);
    ok = vandq_u64(ok, vandq_u64(finite_mask(vx), finite_mask(vy)));
    for (int lane = 0; lane < 2; ++lane) {
      const bool pass = lane == 0 ? vgetq_lane_u64(ok, 0) != 0 : vgetq_lane_u64(ok, 1) != 0;
      if (!pass && !close_real(x[i + lane], y[i + lane], atol, rtol)) return false;
    }
  }
  return all_close_real_scalar(x + i, y + i, n - i, atol, rtol);
}

bool all_close_complex_neon(const double* x, const double* y, std::size_t pairs, double atol,
                            double rtol) noexcept {
  const float64x2_t va = vdupq_n_f64(atol);
  const float64x2_t vr = vdupq_n_f64(rtol);
  std::size_t i = 0;
  for (; i + 2 <= pairs; i += 2) {
    const double* px = x + 2 * i;
    const double* py = y + 2 * i;
    const float64x2x2_t vx = vld2q_f64(px);
    const float64x2x2_t vy = vld2q_f64(py);
    const float64x2_t diff = scaled_modulus_f64(vsubq_f64(vx.val[0], vy.val[0]), vsubq_f64(vx.val[1], vy.val[1]));
    const float64x2_t bound = vaddq_f64(va, vmulq_f64(vr, scaled_modulus_f64(vy.val[0], vy.val[1])));
    uint64x2_t ok = vcleq_f64(diff, bound);
    ok = vandq_u64(ok, vandq_u64(finite_mask(vx.val[0]), finite_mask(vx.val[1])));
    ok = vandq_u64(ok, vandq_u64(finite_mask(vy.val[0]), finite_mask(vy.val[1])));
    for (int lane = 0; lane < 2; ++lane) {
      const bool pass = lane == 0 ? vgetq_lane_u64(ok, 0) != 0 : vgetq_lane_u64(ok, 1) != 0;
      const std::size_t k = 2 * static_cast<std::size_t>(lane);
      if (!pass && !close_complex(px[k], px[k + 1], py[k], py[k + 1], atol, rtol)) return false;
    }
  }
  return all_close_complex_scalar(x + 2 * i, y + 2 * i, pairs - i, atol, rtol);
}

bool neon_compiled() noexcept { return true; }

#else

bool all_close_real_neon(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept {
  return all_close_real_scalar(x, y, n, atol, rtol);
}

bool all_close_complex_neon(const double* x, const double* y, std::size_t pairs, double atol,
                            double rtol) noexcept {
  return all_close_complex_scalar(x, y, pairs, atol, rtol);
}

bool neon_compiled() noexcept { return false; }

#endif

}  // namespace tcscore::kernels::detail
