// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/dataset_stats.hpp"

#include <bit>
#include <unordered_map>

#include "tcscore/error.hpp"

namespace tcscore {

DedupResult dedup(const std::vector<SampleManifest>& manifests) {
  DedupResult result;
  std::unordered_map<std::string, std::string> first_by_hash;
  for (const SampleManifest& m : manifests) {
    const auto [it, inserted] = first_by_hash.emplace(m.graph_hash, m.sample_id);
    if (inserted) {
      result.kept.push_back(m);
    } else {
      result.dropped.push_back({m.sample_id, it->second, m.graph_hash});
    }
  }
  return result;
}

int log2_bin(std::uint64_t operator_count) noexcept {
  if (operator_count == 0) return 0;
  return static_cast<int>(std::bit_width(operator_count)) - 1;
}

StatsReport stats(const std::vector<SampleManifest>& manifests) {
  if (manifests.empty()) throw DataError("no manifests");
  StatsReport report;
  report.total = manifests.size();
  for (const SampleManifest& m : manifests) {
    CategoryStats& cat = report.categories[static_cast<std::size_t>(m.task_category)];
    ++cat.count;
    ++cat.histogram[log2_bin(m.operator_count)];
  }
  for (CategoryStats& cat : report.categories) {
    cat.share_percent = 100.0 * static_cast<double>(cat.count) / static_cast<double>(report.total);
  }
  return report;
}

}  // namespace tcscore
