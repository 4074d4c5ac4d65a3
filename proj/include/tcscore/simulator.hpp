// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tcscore/records.hpp"

namespace tcscore {

/// Synthetic benchmark population. Every field has a default so a config
/// file only needs to name what it changes.
struct SimSpec {
  std::uint64_t seed = 0;
  std::size_t n_samples = 100;
  std::string framework = "synthetic";
  /// Weights over TaskCategory in declaration order; need not sum to 1.
  std::array<double, kTaskCategoryCount> category_mix{0.5, 0.5, 0, 0, 0, 0};

  struct Log2Normal {
    double log2_mean = 0;
    double log2_stddev = 0;
  };
  Log2Normal speedup_law{0.3, 0.6};
  Log2Normal opcount_law{9.0, 1.5};

  struct ErrorRates {
    double accuracy_violation = 0.02;
    double runtime_crash = 0.01;
    double compile_failure = 0.03;
  };
  ErrorRates error_rates;

  /// Typical absolute perturbation injected into compiled outputs, per dtype.
  /// Output dtypes are drawn from the keys.
  std::map<ScalarKind, double> noise_law{{ScalarKind::float32, 1e-6}, {ScalarKind::float16, 1e-3}};

  double eager_median_s = 0.01;
  double eager_log_stddev = 1.0;  // natural-log spread of eager times
  std::size_t tensor_len = 16;
  std::size_t max_outputs = 2;
  std::uint32_t warmup_iters = 10;
  std::uint32_t timed_iters = 100;
  /// Probability that a sample re-uses an earlier sample's graph with
  /// cosmetic source edits (exercises dedup).
  double duplicate_rate = 0;
  /// Store normalized source and topology in the manifests for hash audits.
  bool emit_hash_inputs = false;

  std::vector<double> grid = integer_grid(-10, 0);
  double p = 0.1;
  double b = 0.1;

  /// Throws DataError.
  void validate() const;
};

/// Reads a JSON config. Unknown keys are rejected. Throws DataError.
SimSpec load_sim_spec(const std::filesystem::path& path);
SimSpec parse_sim_spec(std::string_view json_text);

struct SimOutput {
  std::vector<SampleManifest> manifests;
  RecordSet records;
};

/// Pure function of the spec: the same spec gives byte-identical files.
SimOutput simulate(const SimSpec& spec, const ToleranceTable& table = ToleranceTable::defaults());

/// Compares compiled output `x` with reference `y` over the grid.
TensorComparison compare_outputs(std::span<const double> x, std::span<const double> y, ScalarKind kind,
                                 std::span<const double> grid, std::uint32_t tensor_index = 0,
                                 const ToleranceTable& table = ToleranceTable::defaults());

/// Portable variates over a fixed engine (std::mt19937_64 is fully specified
/// by the standard; the std distributions are not, so they are not used).
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal, Box-Muller.
  double normal();
  /// Index drawn proportionally to weights (at least one must be > 0).
  std::size_t categorical(std::span<const double> weights);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace tcscore
