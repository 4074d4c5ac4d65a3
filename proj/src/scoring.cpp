// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "tcscore/error.hpp"
#include "tcscore/numeric.hpp"

namespace tcscore {
namespace {

// Shared by S_t and ES_t so that the t <= 0 reduction is exact.
double combine(const ScoreComponents& c, double p, double failure_base) {
  return std::pow(c.alpha, c.lambda) * std::pow(c.beta, c.lambda * c.eta * p) * std::pow(failure_base, 1.0 - c.lambda);
}

void check_grid(const std::vector<double>& grid, bool positive, const char* name) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (!std::isfinite(t) || (positive ? !(t > 0) : t > 0)) {
      throw DataError(std::string("score config: ") + name + (positive ? " values must be > 0" : " values must be <= 0"));
    }
    if (i > 0 && !(grid[i - 1] < t)) throw DataError(std::string("score config: ") + name + " must be strictly ascending");
  }
}

}  // namespace

void ScoreConfig::validate() const {
  if (!(p > 0 && p < 1)) throw DataError("score config: p must lie in (0, 1)");
  if (!(b > 0 && b < 1)) throw DataError("score config: b must lie in (0, 1)");
  check_grid(grid_neg, false, "grid_neg");
  check_grid(grid_pos, true, "grid_pos");
}

bool ScoreConfig::on_grid(double t) const noexcept {
  const auto match = [t](double g) { return same_grid_point(g, t); };
  return std::any_of(grid_neg.begin(), grid_neg.end(), match) || std::any_of(grid_pos.begin(), grid_pos.end(), match);
}

std::vector<double> ScoreConfig::full_grid() const {
  std::vector<double> grid = grid_neg;
  grid.insert(grid.end(), grid_pos.begin(), grid_pos.end());
  return grid;
}

ClassifiedSample classify(const RunRecord& record, double t, const ScoreConfig& cfg) {
  if (!cfg.on_grid(t)) throw DataError("tolerance level " + format_shortest(t) + " is not on the configured grid");
  // Positive levels only change penalties; correctness stays at the t = 0 verdict.
  const double level = std::min(t, 0.0);

  ClassifiedSample out{record.sample_id, Erroneous{ErrorCode::accuracy}};
  if (std::holds_alternative<RuntimeCrash>(record.outcome)) {
    out.status = Erroneous{ErrorCode::runtime_crash};
  } else if (std::holds_alternative<CompileFailure>(record.outcome)) {
    out.status = Erroneous{ErrorCode::compile_failure};
  } else {
    const auto& done = std::get<Completed>(record.outcome);
    const bool passes = !done.comparisons.empty() &&
                        std::all_of(done.comparisons.begin(), done.comparisons.end(), [&](const TensorComparison& c) {
                          return c.min_passing_t && (*c.min_passing_t <= level || same_grid_point(*c.min_passing_t, level));
                        });
    if (passes) {
      if (!record.compiled_time_s) throw DataError("record '" + record.sample_id + "': completed without compiled_time_s");
      out.status = Correct{record.eager_time_s / *record.compiled_time_s};
    }
  }
  return out;
}

std::vector<ClassifiedSample> classify_all(std::span<const RunRecord> records, double t, const ScoreConfig& cfg) {
  std::vector<ClassifiedSample> out;
  out.reserve(records.size());
  for (const RunRecord& r : records) out.push_back(classify(r, t, cfg));
  return out;
}

ScoreComponents components(std::span<const ClassifiedSample> samples, double t, const ScoreConfig& cfg) {
  if (samples.empty()) throw DataError("no samples");
  ScoreComponents c;
  c.t = t;
  c.n = samples.size();

  CompensatedSum log_all;
  CompensatedSum log_slow;
  for (const ClassifiedSample& s : samples) {
    if (const auto* ok = std::get_if<Correct>(&s.status)) {
      if (!(ok->speedup > 0) || !std::isfinite(ok->speedup)) {
        throw DataError("sample '" + s.sample_id + "': speedup must be finite and > 0");
      }
      ++c.m;
      const double l = std::log(ok->speedup);
      log_all.add(l);
      if (ok->speedup < 1.0) {
        ++c.k;
        log_slow.add(l);
      }
    } else {
      const auto code = std::get<Erroneous>(s.status).code;
      ++c.e;
      ++c.e_by_code[static_cast<std::size_t>(code) - 1];
    }
  }

  if (c.m > 0) c.alpha = std::exp(log_all.value() / static_cast<double>(c.m));
  if (c.k > 0) c.beta = std::exp(log_slow.value() / static_cast<double>(c.k));
  c.lambda = static_cast<double>(c.m) / static_cast<double>(c.n);
  c.eta = c.m > 0 ? static_cast<double>(c.k) / static_cast<double>(c.m) : 0.0;
  if (c.e > 0) {
    for (std::size_t i = 0; i < 3; ++i) c.pi[i] = static_cast<double>(c.e_by_code[i]) / static_cast<double>(c.e);
    c.gamma = gamma(c.pi, t, cfg);
  } else {
    c.gamma = 1.0;
  }
  return c;
}

double speedup_score(const ScoreComponents& comp, const ScoreConfig& cfg) { return combine(comp, cfg.p, cfg.b); }

double gamma(const std::array<double, 3>& pi, double t, const ScoreConfig& cfg) {
  // Every error code is penalised below level 1; return b itself rather than
  // b^(pi1+pi2+pi3), which can miss b by an ulp.
  if (t < 1) return cfg.b;
  double exponent = 0.0;
  for (int code = 1; code <= 3; ++code) {
    if (t < code) exponent += pi[static_cast<std::size_t>(code) - 1];
  }
  return std::pow(cfg.b, exponent);
}

double error_aware_score(const ScoreComponents& comp, const ScoreConfig& cfg) {
  if (comp.t <= 0) return speedup_score(comp, cfg);
  return combine(comp, cfg.p, comp.gamma);
}

double rectified_speedup(const ClassifiedSample& sample, const ScoreConfig& cfg) {
  if (const auto* ok = std::get_if<Correct>(&sample.status)) {
    return ok->speedup >= 1.0 ? ok->speedup : std::pow(ok->speedup, cfg.p + 1.0);
  }
  return cfg.b;
}

double penalty_factor(ErrorCode code, double t, const ScoreConfig& cfg) noexcept {
  return t < static_cast<double>(static_cast<int>(code)) ? cfg.b : 1.0;
}

double error_aware_rectified_speedup(const ClassifiedSample& sample, double t, const ScoreConfig& cfg) {
  if (const auto* err = std::get_if<Erroneous>(&sample.status)) return penalty_factor(err->code, t, cfg);
  return rectified_speedup(sample, cfg);
}

double gmrs(std::span<const ClassifiedSample> samples, double t, const ScoreConfig& cfg) {
  if (samples.empty()) throw DataError("no samples");
  std::vector<double> values;
  values.reserve(samples.size());
  for (const ClassifiedSample& s : samples) {
    values.push_back(t <= 0 ? rectified_speedup(s, cfg) : error_aware_rectified_speedup(s, t, cfg));
  }
  return geometric_mean(values);
}

ScoreCurve score_curve(std::span<const RunRecord> records, const ScoreConfig& cfg) {
  cfg.validate();
  const std::vector<double> grid = cfg.full_grid();
  if (grid.empty()) throw DataError("empty tolerance grid");
  if (records.empty()) throw DataError("no samples");

  ScoreCurve curve;
  curve.points.reserve(grid.size());
  for (double t : grid) {
    const std::vector<ClassifiedSample> samples = classify_all(records, t, cfg);
    CurvePoint point;
    point.t = t;
    point.components = components(samples, t, cfg);
    if (t <= 0) point.speedup_score = speedup_score(point.components, cfg);
    point.error_aware_score = error_aware_score(point.components, cfg);
    curve.points.push_back(point);
  }
  return curve;
}

ScoreCurve score_curve(const std::vector<SampleManifest>& manifests, const std::vector<RunRecord>& records,
                       const ScoreConfig& cfg) {
  check_join(manifests, records);
  return score_curve(std::span<const RunRecord>(records), cfg);
}

}  // namespace tcscore
