// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

// Bulk closeness kernels. Each instruction set gets its own implementation;
// the scalar one is the reference and the vector ones must agree with it
// bit for bit (no FMA, identical operation order per element).

namespace tcscore::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

/// Best instruction set supported by the running CPU.
Isa detected_isa() noexcept;

/// Whether `isa` was compiled in and is usable on this CPU.
bool isa_available(Isa isa) noexcept;

/// True iff every pair (x[i], y[i]) is element_close. Spans must have equal
/// length; this is not checked here.
bool all_close_real(std::span<const double> x, std::span<const double> y, double atol, double rtol,
                    Isa isa = detected_isa()) noexcept;

/// Same over interleaved (re, im) pairs; span lengths must be even.
bool all_close_complex(std::span<const double> x, std::span<const double> y, double atol, double rtol,
                       Isa isa = detected_isa()) noexcept;

namespace detail {

/// max(|a|,|b|) * sqrt((a/m)^2 + (b/m)^2), 0 when both are zero. Every
/// kernel uses this exact operation sequence.
inline double scaled_modulus(double a, double b) noexcept {
  const double aa = a < 0 ? -a : a;
  const double bb = b < 0 ? -b : b;
  const double m = aa > bb ? aa : bb;
  if (m == 0.0) return 0.0;
  const double r1 = a / m;
  const double r2 = b / m;
  return m * std::sqrt(r1 * r1 + r2 * r2);
}

inline bool nonfinite_match(double x, double y) noexcept {
  return (std::isnan(x) && std::isnan(y)) || x == y;
}

inline bool close_real(double x, double y, double atol, double rtol) noexcept {
  if (!std::isfinite(x) || !std::isfinite(y)) return nonfinite_match(x, y);
  return std::abs(x - y) <= atol + rtol * std::abs(y);
}

inline bool close_complex(double x_re, double x_im, double y_re, double y_im, double atol, double rtol) noexcept {
  if (!std::isfinite(x_re) || !std::isfinite(x_im) || !std::isfinite(y_re) || !std::isfinite(y_im)) {
    return nonfinite_match(x_re, y_re) && nonfinite_match(x_im, y_im);
  }
  return scaled_modulus(x_re - y_re, x_im - y_im) <= atol + rtol * scaled_modulus(y_re, y_im);
}

bool all_close_real_scalar(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept;
bool all_close_complex_scalar(const double* x, const double* y, std::size_t pairs, double atol,
                              double rtol) noexcept;

bool all_close_real_avx2(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept;
bool all_close_complex_avx2(const double* x, const double* y, std::size_t pairs, double atol,
                            double rtol) noexcept;

bool all_close_real_neon(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept;
bool all_close_complex_neon(const double* x, const double* y, std::size_t pairs, double atol,
                            double rtol) noexcept;

bool avx2_compiled() noexcept;
bool neon_compiled() noexcept;

}  // namespace detail
}  // namespace tcscore::kernels
