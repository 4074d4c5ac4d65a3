// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcscore/dataset_stats.hpp"
#include "tcscore/scoring.hpp"

namespace tcscore {

enum class OutputFormat { csv, json, md };

/// Throws DataError for an unknown name.
OutputFormat parse_output_format(std::string_view name);

/// Score table with columns t, alpha, beta, lambda, eta, S(t), gamma, ES(t).
/// Values are rounded half away from zero to 3 decimals; S(t) is "-" for
/// t > 0. Supports csv, md and json.
std::string render_report_table(const ScoreCurve& curve, OutputFormat format);

/// Full-precision curve data, one row per grid point, for plotting. csv or
/// json; an empty S field (csv) / null (json) for t > 0.
std::string render_curve(const ScoreCurve& curve, OutputFormat format);

/// Grid coordinate as written in reports: integers without a fraction.
std::string format_level(double t);

struct ViolinGroup {
  std::string framework;
  TaskCategory task_category = TaskCategory::Other;
  std::vector<double> log2_speedups;
};

/// log2(speedup) of correct samples, grouped by (framework, task_category)
/// in sorted group order and input sample order within a group. Groups with
/// no correct sample are kept with an empty list. `samples[i]` must belong to
/// the manifest with the same sample_id.
std::vector<ViolinGroup> emit_violin(const std::vector<SampleManifest>& manifests,
                                     const std::vector<ClassifiedSample>& samples);

std::string render_violin(const std::vector<ViolinGroup>& groups, OutputFormat format);

std::string render_stats(const StatsReport& report, OutputFormat format);

std::string render_dedup(const DedupResult& result, OutputFormat format);

}  // namespace tcscore
