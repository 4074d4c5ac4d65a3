// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

namespace tcscore {

/// Neumaier-compensated accumulator. Used for every log-sum in the scorer so
/// that geometric means over thousands of samples do not depend on order
/// beyond the last few ulps.
class CompensatedSum {
 public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// exp(mean(log(values))). Returns 1 for an empty span.
double geometric_mean(std::span<const double> values);

/// Fixed-point rendering with round-half-away-from-zero on the exact binary
/// value (printf rounds ties to even).
std::string format_fixed(double value, int decimals);

/// Shortest representation that parses back to the same double.
std::string format_shortest(double value);

/// True when `a` and `b` are the same grid coordinate.
bool same_grid_point(double a, double b) noexcept;

}  // namespace tcscore
