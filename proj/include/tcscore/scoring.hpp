// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tcscore/records.hpp"

namespace tcscore {

/// Why a sample is not correct. A level t >= code tolerates the error.
enum class ErrorCode : int { accuracy = 1, runtime_crash = 2, compile_failure = 3 };

struct Correct {
  double speedup;  // eager / compiled, finite and > 0
  bool operator==(const Correct&) const = default;
};

struct Erroneous {
  ErrorCode code;
  bool operator==(const Erroneous&) const = default;
};

struct ClassifiedSample {
  std::string sample_id;
  std::variant<Correct, Erroneous> status;

  bool is_correct() const noexcept { return std::holds_alternative<Correct>(status); }
  bool operator==(const ClassifiedSample&) const = default;
};

struct ScoreConfig {
  double p = 0.1;  // degradation penalty
  double b = 0.1;  // failure penalty
  std::vector<double> grid_neg = integer_grid(-10, 0);
  std::vector<double> grid_pos = integer_grid(1, 4);

  /// Throws DataError if p or b is outside (0, 1) or a grid is malformed.
  void validate() const;
  bool on_grid(double t) const noexcept;
  /// grid_neg followed by grid_pos.
  std::vector<double> full_grid() const;
};

struct ScoreComponents {
  double t = 0;
  std::size_t n = 0;  // samples
  std::size_t m = 0;  // correct
  std::size_t k = 0;  // correct with speedup < 1
  std::size_t e = 0;  // erroneous
  std::array<std::size_t, 3> e_by_code{};

  double alpha = 1;   // geometric mean speedup of correct samples
  double beta = 1;    // geometric mean speedup of correct slowdowns
  double lambda = 0;  // m / n
  double eta = 0;     // k / m
  std::array<double, 3> pi{};  // share of each error code among erroneous samples
  double gamma = 1;   // tolerance-dependent failure penalty
};

struct CurvePoint {
  double t = 0;
  ScoreComponents components;
  std::optional<double> speedup_score;  // absent for t > 0
  double error_aware_score = 0;
};

struct ScoreCurve {
  std::vector<CurvePoint> points;
};

/// Throws DataError if t is off the configured grid.
ClassifiedSample classify(const RunRecord& record, double t, const ScoreConfig& cfg);

std::vector<ClassifiedSample> classify_all(std::span<const RunRecord> records, double t, const ScoreConfig& cfg);

/// Aggregates over a classification at level t. Throws DataError for an
/// empty sample list or a nonpositive speedup.
ScoreComponents components(std::span<const ClassifiedSample> samples, double t, const ScoreConfig& cfg);

/// alpha^lambda * beta^(lambda*eta*p) * b^(1-lambda)
double speedup_score(const ScoreComponents& comp, const ScoreConfig& cfg);

/// b^(sum_c pi_c * [t < c]); exactly b when t < 1.
double gamma(const std::array<double, 3>& pi, double t, const ScoreConfig& cfg);

/// alpha^lambda * beta^(lambda*eta*p) * gamma^(1-lambda). For t <= 0 this is
/// speedup_score bit for bit.
double error_aware_score(const ScoreComponents& comp, const ScoreConfig& cfg);

// Per-sample forms. Their geometric means reproduce the macro scores.
double rectified_speedup(const ClassifiedSample& sample, const ScoreConfig& cfg);
double error_aware_rectified_speedup(const ClassifiedSample& sample, double t, const ScoreConfig& cfg);
/// b if t < code, else 1.
double penalty_factor(ErrorCode code, double t, const ScoreConfig& cfg) noexcept;
double gmrs(std::span<const ClassifiedSample> samples, double t, const ScoreConfig& cfg);

/// One point per grid value (grid_neg then grid_pos). Throws DataError on an
/// empty grid, an empty dataset, or a manifest/record mismatch.
ScoreCurve score_curve(const std::vector<SampleManifest>& manifests, const std::vector<RunRecord>& records,
                       const ScoreConfig& cfg);

/// Curve over already-joined records.
ScoreCurve score_curve(std::span<const RunRecord> records, const ScoreConfig& cfg);

}  // namespace tcscore
