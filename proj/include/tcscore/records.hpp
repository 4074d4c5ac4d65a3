// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tcscore/tolerance.hpp"

namespace tcscore {

enum class TaskCategory { CV, NLP, Audio, Multimodal, Scientific, Other };

inline constexpr std::size_t kTaskCategoryCount = 6;

std::string_view to_string(TaskCategory category) noexcept;
std::optional<TaskCategory> parse_task_category(std::string_view name) noexcept;

/// One operator of a canonical topology listing.
struct TopoNode {
  std::string op_type;
  std::vector<std::uint32_t> inputs;

  bool operator==(const TopoNode&) const = default;
};

/// What the graph hash is computed from.
struct HashInput {
  std::string normalized_source;
  std::vector<TopoNode> topology;

  bool operator==(const HashInput&) const = default;
};

struct SampleManifest {
  std::string sample_id;
  std::string framework;
  TaskCategory task_category = TaskCategory::Other;
  std::uint64_t operator_count = 1;
  std::optional<std::uint64_t> parameter_count;
  std::set<ScalarKind> dtypes;
  std::string graph_hash;
  std::optional<HashInput> source_digest_inputs;

  bool operator==(const SampleManifest&) const = default;
};

struct TensorComparison {
  std::uint32_t tensor_index = 0;
  ScalarKind kind = ScalarKind::float32;
  PassLevel min_passing_t;

  bool operator==(const TensorComparison&) const = default;
};

struct Completed {
  std::vector<TensorComparison> comparisons;
  bool operator==(const Completed&) const = default;
};
struct RuntimeCrash {
  std::string message;
  bool operator==(const RuntimeCrash&) const = default;
};
struct CompileFailure {
  std::string message;
  bool operator==(const CompileFailure&) const = default;
};

using RunOutcome = std::variant<Completed, RuntimeCrash, CompileFailure>;

struct RunRecord {
  std::string sample_id;
  double eager_time_s = 1.0;
  std::optional<double> compiled_time_s;
  RunOutcome outcome;
  std::uint32_t warmup_iters = 0;
  std::uint32_t timed_iters = 1;

  bool operator==(const RunRecord&) const = default;
};

/// First line of a records file.
struct RecordsHeader {
  std::vector<double> grid;
  double p = 0.1;
  double b = 0.1;
  std::string producer;

  bool operator==(const RecordsHeader&) const = default;
};

struct RecordSet {
  RecordsHeader header;
  std::vector<RunRecord> records;
};

// Single-object serialization (one JSON object, no trailing newline).
std::string serialize(const SampleManifest& manifest);
std::string serialize(const RunRecord& record);
std::string serialize(const RecordsHeader& header);

// Parsing validates the object; errors are DataError without location.
SampleManifest parse_manifest(std::string_view line);
RunRecord parse_record(std::string_view line);
RecordsHeader parse_records_header(std::string_view line);

/// Invariant checks shared by the parser and the simulator. Throws DataError.
void validate(const SampleManifest& manifest);
void validate(const RunRecord& record);
void validate(const RecordsHeader& header);

/// serialize then parse.
SampleManifest roundtrip(const SampleManifest& manifest);
RunRecord roundtrip(const RunRecord& record);

/// Line-delimited manifests. Blank lines are skipped. Errors name the file
/// and line; a duplicate sample_id names both lines.
std::vector<SampleManifest> load_manifests(const std::filesystem::path& path);
std::vector<SampleManifest> read_manifests(std::string_view text, std::string_view source_name = "<input>");

/// A header line followed by one record per line. A completely empty input
/// yields an empty set with a default header. Every min_passing_t must lie on
/// the header grid.
RecordSet load_records(const std::filesystem::path& path);
RecordSet read_records(std::string_view text, std::string_view source_name = "<input>");

std::string write_manifests(const std::vector<SampleManifest>& manifests);
std::string write_records(const RecordSet& set);

/// Every record has a manifest and every manifest has a record.
void check_join(const std::vector<SampleManifest>& manifests, const std::vector<RunRecord>& records);

}  // namespace tcscore
