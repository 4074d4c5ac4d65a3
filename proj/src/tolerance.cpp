// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/tolerance.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tcscore/error.hpp"
#include "tcscore/kernels.hpp"

namespace tcscore {
namespace {

constexpr std::array<ScalarKind, kScalarKindCount> kAllKinds = {
    ScalarKind::float16,  ScalarKind::bfloat16,   ScalarKind::float32,  ScalarKind::float64, ScalarKind::complex32,
    ScalarKind::complex64, ScalarKind::complex128, ScalarKind::quint8,  ScalarKind::quint2x4, ScalarKind::quint4x2,
    ScalarKind::qint8,    ScalarKind::qint32,     ScalarKind::other,
};

constexpr std::array<std::string_view, kScalarKindCount> kKindNames = {
    "float16", "bfloat16", "float32", "float64", "complex32", "complex64", "complex128",
    "quint8",  "quint2x4", "quint4x2", "qint8",  "qint32",    "other",
};

// Slopes interpolate log-linearly between the t = -5 and t = 0 reference
// tolerances of each dtype.
ToleranceRule default_rule(ScalarKind kind) {
  constexpr double kHalfSlope = 3.0 / 5.0;
  constexpr double kBf16Slope = 1.796 / 5.0;
  constexpr double kSingleSlope = 5.886 / 5.0;
  constexpr double kDoubleSlope = 7.0 / 5.0;
  switch (kind) {
    case ScalarKind::float16:
    case ScalarKind::complex32: return {kind, 1.0, kHalfSlope};
    case ScalarKind::bfloat16: return {kind, 1.0, kBf16Slope};
    case ScalarKind::float32:
    case ScalarKind::complex64:
    case ScalarKind::quint8:
    case ScalarKind::quint2x4:
    case ScalarKind::quint4x2:
    case ScalarKind::qint8:
    case ScalarKind::qint32: return {kind, 1.0, kSingleSlope};
    case ScalarKind::float64:
    case ScalarKind::complex128: return {kind, kDoubleSlope, kDoubleSlope};
    case ScalarKind::other: return {kind, std::nullopt, std::nullopt};
  }
  return {kind, std::nullopt, std::nullopt};
}

double schedule(const std::optional<double>& slope, double t) {
  if (t > 0) throw std::invalid_argument("tolerance level must be <= 0, got " + std::to_string(t));
  if (!slope) return 0.0;
  return std::pow(10.0, *slope * t);
}

std::optional<double> parse_slope(const nlohmann::json& v, std::string_view kind, std::string_view field) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) {
    throw DataError("tolerance override: " + std::string(kind) + "." + std::string(field) + " must be a number or null");
  }
  const double slope = v.get<double>();
  if (!std::isfinite(slope) || slope < 0) {
    // A negative slope would make the schedule shrink as t grows and break
    // pass monotonicity.
    throw DataError("tolerance override: " + std::string(kind) + "." + std::string(field) + " must be >= 0");
  }
  return slope;
}

}  // namespace

std::string_view to_string(ScalarKind kind) noexcept { return kKindNames[static_cast<std::size_t>(kind)]; }

ScalarKind parse_scalar_kind(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kScalarKindCount; ++i) {
    if (kKindNames[i] == name) return kAllKinds[i];
  }
  return ScalarKind::other;
}

bool is_complex(ScalarKind kind) noexcept {
  return kind == ScalarKind::complex32 || kind == ScalarKind::complex64 || kind == ScalarKind::complex128;
}

std::span<const ScalarKind> all_scalar_kinds() noexcept { return kAllKinds; }

ToleranceTable ToleranceTable::defaults() {
  static const ToleranceTable table = [] {
    ToleranceTable t;
    for (ScalarKind k : kAllKinds) t.rules_[static_cast<std::size_t>(k)] = default_rule(k);
    return t;
  }();
  return table;
}

ToleranceTable ToleranceTable::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("tolerance override: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("tolerance override: top level must be an object");

  ToleranceTable table = defaults();
  for (const auto& [name, entry] : doc.items()) {
    const ScalarKind kind = parse_scalar_kind(name);
    if (kind == ScalarKind::other && name != "other") {
      throw DataError("tolerance override: unknown scalar kind '" + name + "'");
    }
    if (!entry.is_object()) throw DataError("tolerance override: entry '" + name + "' must be an object");
    ToleranceRule& rule = table.rules_[static_cast<std::size_t>(kind)];
    for (const auto& [field, value] : entry.items()) {
      if (field == "atol_slope") {
        rule.atol_slope = parse_slope(value, name, field);
      } else if (field == "rtol_slope") {
        rule.rtol_slope = parse_slope(value, name, field);
      } else {
        throw DataError("tolerance override: unknown field '" + name + "." + field + "'");
      }
    }
  }
  return table;
}

ToleranceTable ToleranceTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tolerance file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

const ToleranceRule& ToleranceTable::rule(ScalarKind kind) const noexcept {
  return rules_[static_cast<std::size_t>(kind)];
}

double ToleranceTable::atol(ScalarKind kind, double t) const { return schedule(rule(kind).atol_slope, t); }
double ToleranceTable::rtol(ScalarKind kind, double t) const { return schedule(rule(kind).rtol_slope, t); }

double atol(ScalarKind kind, double t) { return ToleranceTable::defaults().atol(kind, t); }
double rtol(ScalarKind kind, double t) { return ToleranceTable::defaults().rtol(kind, t); }

bool element_close(double x, double y, double atol, double rtol) noexcept {
  return kernels::detail::close_real(x, y, atol, rtol);
}

bool element_close(double x_re, double x_im, double y_re, double y_im, double atol, double rtol) noexcept {
  return kernels::detail::close_complex(x_re, x_im, y_re, y_im, atol, rtol);
}

PassLevel min_passing_tolerance(std::span<const double> x, std::span<const double> y, ScalarKind kind,
                                std::span<const double> grid, const ToleranceTable& table) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("min_passing_tolerance: length mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  if (x.empty()) throw std::invalid_argument("min_passing_tolerance: empty tensors");
  if (is_complex(kind) && x.size() % 2 != 0) {
    throw std::invalid_argument("min_passing_tolerance: complex data must be interleaved (re, im) pairs");
  }
  if (grid.empty()) throw std::invalid_argument("min_passing_tolerance: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.back() > 0) {
    throw std::invalid_argument("min_passing_tolerance: grid must be ascending and <= 0");
  }

  const auto passes = [&](double t) {
    const double a = table.atol(kind, t);
    const double r = table.rtol(kind, t);
    return is_complex(kind) ? kernels::all_close_complex(x, y, a, r) : kernels::all_close_real(x, y, a, r);
  };

  // pass(t) is monotone in t, so bisect for the first passing grid index.
  std::size_t lo = 0;
  std::size_t hi = grid.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (passes(grid[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == grid.size()) return std::nullopt;
  return grid[lo];
}

std::vector<double> integer_grid(int lo, int hi) {
  std::vector<double> grid;
  for (int t = lo; t <= hi; ++t) grid.push_back(static_cast<double>(t));
  return grid;
}

}  // namespace tcscore
