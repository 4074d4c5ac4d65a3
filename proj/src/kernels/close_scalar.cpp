// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/kernels.hpp"

namespace tcscore::kernels::detail {

bool all_close_real_scalar(const double* x, const double* y, std::size_t n, double atol, double rtol) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    if (!close_real(x[i], y[i], atol, rtol)) return false;
  }
  return true;
}

bool all_close_complex_scalar(const double* x, const double* y, std::size_t pairs, double atol,
                              double rtol) noexcept {
  for (std::size_t i = 0; i < pairs; ++i) {
    if (!close_complex(x[2 * i], x[2 * i + 1], y[2 * i], y[2 * i + 1], atol, rtol)) return false;
  }
  return true;
}

}  // namespace tcscore::kernels::detail
