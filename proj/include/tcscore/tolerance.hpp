// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tcscore {

enum class ScalarKind {
  float16,
  bfloat16,
  float32,
  float64,
  complex32,
  complex64,
  complex128,
  quint8,
  quint2x4,
  quint4x2,
  qint8,
  qint32,
  other,
};

inline constexpr std::size_t kScalarKindCount = 13;

std::string_view to_string(ScalarKind kind) noexcept;
/// Unknown names map to ScalarKind::other.
ScalarKind parse_scalar_kind(std::string_view name) noexcept;
bool is_complex(ScalarKind kind) noexcept;
/// All kinds in declaration order.
std::span<const ScalarKind> all_scalar_kinds() noexcept;

/// atol(t) = 10^(atol_slope * t), rtol(t) = 10^(rtol_slope * t). An empty
/// slope means the tolerance is identically zero.
struct ToleranceRule {
  ScalarKind kind = ScalarKind::other;
  std::optional<double> atol_slope;
  std::optional<double> rtol_slope;

  bool operator==(const ToleranceRule&) const = default;
};

/// The smallest tolerance level on a grid at which a tensor pair passes.
/// An empty value means the pair fails even at the loosest grid point.
using PassLevel = std::optional<double>;

class ToleranceTable {
 public:
  /// Compiled-in log-linear schedules.
  static ToleranceTable defaults();

  /// Defaults overridden per kind by a JSON object
  /// `{"float32": {"atol_slope": 1, "rtol_slope": 1.1772}, ...}`.
  /// A null slope makes that tolerance identically zero. Throws DataError.
  static ToleranceTable load(const std::filesystem::path& path);
  static ToleranceTable from_json_text(std::string_view text);

  const ToleranceRule& rule(ScalarKind kind) const noexcept;

  /// Throws std::invalid_argument for t > 0.
  double atol(ScalarKind kind, double t) const;
  double rtol(ScalarKind kind, double t) const;

 private:
  std::array<ToleranceRule, kScalarKindCount> rules_{};
};

double atol(ScalarKind kind, double t);
double rtol(ScalarKind kind, double t);

/// |x - y| <= atol + rtol * |y|. Non-finite values match only an identical
/// non-finite value (NaN matches NaN).
bool element_close(double x, double y, double atol, double rtol) noexcept;

/// Complex variant: moduli of the difference and of y.
bool element_close(double x_re, double x_im, double y_re, double y_im, double atol, double rtol) noexcept;

/// `x` and `y` hold real elements, or interleaved (re, im) pairs for complex
/// kinds. `grid` must be ascending, nonempty, and <= 0. Throws
/// std::invalid_argument on a length mismatch or a bad grid.
PassLevel min_passing_tolerance(std::span<const double> x, std::span<const double> y, ScalarKind kind,
                                std::span<const double> grid,
                                const ToleranceTable& table = ToleranceTable::defaults());

/// Integers lo..hi inclusive.
std::vector<double> integer_grid(int lo, int hi);

}  // namespace tcscore
