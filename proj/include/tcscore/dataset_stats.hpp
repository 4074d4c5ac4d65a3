// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tcscore/records.hpp"

namespace tcscore {

/// Canonical source text for hashing: '#' comments (outside string literals)
/// are stripped, every run of whitespace outside string literals becomes one
/// space, and leading/trailing whitespace is trimmed. Identifiers and string
/// contents are kept verbatim. Idempotent.
std::string normalize_source(std::string_view source);

/// The exact byte sequence that graph_hash digests.
std::string canonical_hash_bytes(const HashInput& input);

/// Lowercase hex SHA-256 of canonical_hash_bytes over the normalized source.
/// Throws std::invalid_argument for an empty topology.
std::string graph_hash(const HashInput& input);

struct DroppedSample {
  std::string sample_id;
  std::string duplicate_of;
  std::string graph_hash;
};

struct DedupResult {
  std::vector<SampleManifest> kept;
  std::vector<DroppedSample> dropped;
};

/// Keeps the first manifest per graph_hash, in input order.
DedupResult dedup(const std::vector<SampleManifest>& manifests);

struct CategoryStats {
  std::size_t count = 0;
  double share_percent = 0;
  /// floor(log2(operator_count)) -> samples in [2^k, 2^(k+1)).
  std::map<int, std::size_t> histogram;
};

struct StatsReport {
  std::size_t total = 0;
  std::array<CategoryStats, kTaskCategoryCount> categories{};
};

/// Throws DataError for an empty manifest list.
StatsReport stats(const std::vector<SampleManifest>& manifests);

/// Bin index k with 2^k <= operator_count < 2^(k+1).
int log2_bin(std::uint64_t operator_count) noexcept;

}  // namespace tcscore
