// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/kernels.hpp"

namespace tcscore::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return detail::avx2_compiled() && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
      // Advanced SIMD is mandatory on AArch64.
      return detail::neon_compiled();
  }
  return false;
}

Isa detected_isa() noexcept {
  static const Isa best = [] {
    if (isa_available(Isa::avx2)) return Isa::avx2;
    if (isa_available(Isa::neon)) return Isa::neon;
    return Isa::scalar;
  }();
  return best;
}

bool all_close_real(std::span<const double> x, std::span<const double> y, double atol, double rtol,
                    Isa isa) noexcept {
  if (!isa_available(isa)) isa = Isa::scalar;
  switch (isa) {
    case Isa::avx2: return detail::all_close_real_avx2(x.data(), y.data(), x.size(), atol, rtol);
    case Isa::neon: return detail::all_close_real_neon(x.data(), y.data(), x.size(), atol, rtol);
    case Isa::scalar: break;
  }
  return detail::all_close_real_scalar(x.data(), y.data(), x.size(), atol, rtol);
}

bool all_close_complex(std::span<const double> x, std::span<const double> y, double atol, double rtol,
                       Isa isa) noexcept {
  if (!isa_available(isa)) isa = Isa::scalar;
  const std::size_t pairs = x.size() / 2;
  switch (isa) {
    case Isa::avx2: return detail::all_close_complex_avx2(x.data(), y.data(), pairs, atol, rtol);
    case Isa::neon: return detail::all_close_complex_neon(x.data(), y.data(), pairs, atol, rtol);
    case Isa::scalar: break;
  }
  return detail::all_close_complex_scalar(x.data(), y.data(), pairs, atol, rtol);
}

}  // namespace tcscore::kernels
