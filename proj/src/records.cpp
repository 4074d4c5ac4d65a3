// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/records.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "tcscore/error.hpp"
#include "tcscore/numeric.hpp"

namespace tcscore {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr std::array<std::string_view, kTaskCategoryCount> kCategoryNames = {"CV",         "NLP",        "Audio",
                                                                             "Multimodal", "Scientific", "Other"};
constexpr std::string_view kNever = "never";

// Reads the fields of one JSON object and rejects any it did not consume.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string what) : obj_(obj), what_(std::move(what)) {
    if (!obj_.is_object()) throw DataError(what_ + " must be a JSON object");
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  const json& at(const std::string& key) {
    seen_.push_back(key);
    const auto it = obj_.find(key);
    if (it == obj_.end()) throw DataError(what_ + ": missing field '" + key + "'");
    return *it;
  }

  const json* optional(const std::string& key) {
    seen_.push_back(key);
    const auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw DataError(what_ + ": field '" + key + "' must be a string");
    return v.get<std::string>();
  }

  double number(const std::string& key) { return as_number(at(key), key); }

  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw DataError(what_ + ": field '" + key + "' must be a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_integer(const std::string& key) { return as_unsigned(at(key), key); }

  std::uint64_t as_unsigned(const json& v, const std::string& key) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw DataError(what_ + ": field '" + key + "' must be a nonnegative integer");
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw DataError(what_ + ": unknown field '" + key + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string what_;
  std::vector<std::string> seen_;
};

std::uint32_t narrow_u32(std::uint64_t v, const std::string& what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw DataError(what + " is out of range");
  return static_cast<std::uint32_t>(v);
}

json parse_object(std::string_view line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

ojson topology_to_json(const std::vector<TopoNode>& topology) {
  ojson nodes = ojson::array();
  for (const TopoNode& node : topology) {
    ojson n;
    n["op"] = node.op_type;
    n["inputs"] = node.inputs;
    nodes.push_back(std::move(n));
  }
  return nodes;
}

HashInput hash_input_from_json(const json& v) {
  ObjectReader r(v, "source_digest_inputs");
  HashInput h;
  h.normalized_source = r.string("normalized_source");
  const json& topo = r.at("topology");
  if (!topo.is_array()) throw DataError("source_digest_inputs: 'topology' must be an array");
  for (const json& node : topo) {
    ObjectReader nr(node, "topology node");
    TopoNode n;
    n.op_type = nr.string("op");
    const json& inputs = nr.at("inputs");
    if (!inputs.is_array()) throw DataError("topology node: 'inputs' must be an array");
    for (const json& idx : inputs) n.inputs.push_back(narrow_u32(nr.as_unsigned(idx, "inputs"), "input index"));
    nr.finish();
    h.topology.push_back(std::move(n));
  }
  r.finish();
  return h;
}

ojson outcome_to_json(const RunOutcome& outcome) {
  ojson o;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Completed>) {
          o["kind"] = "completed";
          ojson comps = ojson::array();
          for (const TensorComparison& c : v.comparisons) {
            ojson cj;
            cj["tensor_index"] = c.tensor_index;
            cj["kind"] = std::string(to_string(c.kind));
            if (c.min_passing_t) {
              cj["min_passing_t"] = *c.min_passing_t;
            } else {
              cj["min_passing_t"] = std::string(kNever);
            }
            comps.push_back(std::move(cj));
          }
          o["comparisons"] = std::move(comps);
        } else if constexpr (std::is_same_v<T, RuntimeCrash>) {
          o["kind"] = "runtime_crash";
          o["message"] = v.message;
        } else {
          o["kind"] = "compile_failure";
          o["message"] = v.message;
        }
      },
      outcome);
  return o;
}

RunOutcome outcome_from_json(const json& v) {
  ObjectReader r(v, "outcome");
  const std::string kind = r.string("kind");
  RunOutcome outcome;
  if (kind == "completed") {
    Completed done;
    const json& comps = r.at("comparisons");
    if (!comps.is_array()) throw DataError("outcome: 'comparisons' must be an array");
    for (const json& cj : comps) {
      ObjectReader cr(cj, "comparison");
      TensorComparison c;
      c.tensor_index = narrow_u32(cr.unsigned_integer("tensor_index"), "tensor_index");
      c.kind = parse_scalar_kind(cr.string("kind"));
      const json& level = cr.at("min_passing_t");
      if (level.is_string() && level.get<std::string>() == kNever) {
        c.min_passing_t = std::nullopt;
      } else if (level.is_number()) {
        c.min_passing_t = level.get<double>();
      } else {
        throw DataError("comparison: 'min_passing_t' must be a number or \"never\"");
      }
      cr.finish();
      done.comparisons.push_back(c);
    }
    outcome = std::move(done);
  } else if (kind == "runtime_crash") {
    outcome = RuntimeCrash{r.string("message")};
  } else if (kind == "compile_failure") {
    outcome = CompileFailure{r.string("message")};
  } else {
    throw DataError("outcome: unknown kind '" + kind + "'");
  }
  r.finish();
  return outcome;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> nonblank_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) lines.push_back({number, line});
    pos = end + 1;
  }
  return lines;
}

std::string located(std::string_view source, std::size_t line, const std::string& message) {
  return std::string(source) + ":" + std::to_string(line) + ": " + message;
}

template <typename T>
void check_unique_ids(const std::vector<T>& items, const std::vector<std::size_t>& line_numbers,
                      std::string_view source) {
  std::unordered_map<std::string, std::size_t> first_line;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto [it, inserted] = first_line.emplace(items[i].sample_id, line_numbers[i]);
    if (!inserted) {
      throw DataError(located(source, line_numbers[i],
                              "duplicate sample_id '" + items[i].sample_id + "' (first seen on line " +
                                  std::to_string(it->second) + ")"));
    }
  }
}

}  // namespace

std::string_view to_string(TaskCategory category) noexcept {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::optional<TaskCategory> parse_task_category(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kTaskCategoryCount; ++i) {
    if (kCategoryNames[i] == name) return static_cast<TaskCategory>(i);
  }
  return std::nullopt;
}

std::string serialize(const SampleManifest& m) {
  ojson o;
  o["sample_id"] = m.sample_id;
  o["framework"] = m.framework;
  o["task_category"] = std::string(to_string(m.task_category));
  o["operator_count"] = m.operator_count;
  o["parameter_count"] = m.parameter_count ? ojson(*m.parameter_count) : ojson(nullptr);
  ojson dtypes = ojson::array();
  for (ScalarKind k : m.dtypes) dtypes.push_back(std::string(to_string(k)));
  o["dtypes"] = std::move(dtypes);
  o["graph_hash"] = m.graph_hash;
  if (m.source_digest_inputs) {
    ojson h;
    h["normalized_source"] = m.source_digest_inputs->normalized_source;
    h["topology"] = topology_to_json(m.source_digest_inputs->topology);
    o["source_digest_inputs"] = std::move(h);
  } else {
    o["source_digest_inputs"] = nullptr;
  }
  return o.dump();
}

std::string serialize(const RunRecord& r) {
  ojson o;
  o["sample_id"] = r.sample_id;
  o["eager_time_s"] = r.eager_time_s;
  if (r.compiled_time_s) o["compiled_time_s"] = *r.compiled_time_s;
  o["outcome"] = outcome_to_json(r.outcome);
  o["warmup_iters"] = r.warmup_iters;
  o["timed_iters"] = r.timed_iters;
  return o.dump();
}

std::string serialize(const RecordsHeader& h) {
  ojson o;
  o["grid"] = h.grid;
  o["p"] = h.p;
  o["b"] = h.b;
  o["producer"] = h.producer;
  return o.dump();
}

void validate(const SampleManifest& m) {
  if (m.sample_id.empty()) throw DataError("manifest: sample_id must be nonempty");
  if (m.operator_count < 1) throw DataError("manifest '" + m.sample_id + "': operator_count must be >= 1");
  if (m.graph_hash.empty() || m.graph_hash.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw DataError("manifest '" + m.sample_id + "': graph_hash must be a lowercase hex digest");
  }
}

void validate(const RunRecord& r) {
  if (r.sample_id.empty()) throw DataError("record: sample_id must be nonempty");
  const std::string who = "record '" + r.sample_id + "'";
  if (!std::isfinite(r.eager_time_s) || r.eager_time_s <= 0) throw DataError(who + ": eager_time_s must be > 0");
  const bool completed = std::holds_alternative<Completed>(r.outcome);
  if (completed != r.compiled_time_s.has_value()) {
    throw DataError(who + ": compiled_time_s must be present iff the outcome is completed");
  }
  if (r.compiled_time_s && (!std::isfinite(*r.compiled_time_s) || *r.compiled_time_s <= 0)) {
    throw DataError(who + ": compiled_time_s must be > 0");
  }
  if (completed && std::get<Completed>(r.outcome).comparisons.empty()) {
    throw DataError(who + ": a completed outcome needs at least one comparison");
  }
  if (r.timed_iters < 1) throw DataError(who + ": timed_iters must be >= 1");
}

void validate(const RecordsHeader& h) {
  if (h.grid.empty()) throw DataError("records header: grid must be nonempty");
  for (std::size_t i = 0; i < h.grid.size(); ++i) {
    if (!std::isfinite(h.grid[i]) || h.grid[i] > 0) throw DataError("records header: grid values must be <= 0");
    if (i > 0 && !(h.grid[i - 1] < h.grid[i])) throw DataError("records header: grid must be strictly ascending");
  }
  if (!(h.p > 0 && h.p < 1)) throw DataError("records header: p must lie in (0, 1)");
  if (!(h.b > 0 && h.b < 1)) throw DataError("records header: b must lie in (0, 1)");
}

SampleManifest parse_manifest(std::string_view line) {
  const json doc = parse_object(line);
  ObjectReader r(doc, "manifest");
  SampleManifest m;
  m.sample_id = r.string("sample_id");
  m.framework = r.string("framework");
  const std::string category = r.string("task_category");
  const auto parsed = parse_task_category(category);
  if (!parsed) throw DataError("manifest: unknown task_category '" + category + "'");
  m.task_category = *parsed;
  m.operator_count = r.unsigned_integer("operator_count");
  if (const json* pc = r.optional("parameter_count")) m.parameter_count = r.as_unsigned(*pc, "parameter_count");
  const json& dtypes = r.at("dtypes");
  if (!dtypes.is_array()) throw DataError("manifest: 'dtypes' must be an array");
  for (const json& d : dtypes) {
    if (!d.is_string()) throw DataError("manifest: dtype names must be strings");
    m.dtypes.insert(parse_scalar_kind(d.get<std::string>()));
  }
  m.graph_hash = r.string("graph_hash");
  if (const json* h = r.optional("source_digest_inputs")) m.source_digest_inputs = hash_input_from_json(*h);
  r.finish();
  validate(m);
  return m;
}

RunRecord parse_record(std::string_view line) {
  const json doc = parse_object(line);
  ObjectReader r(doc, "record");
  RunRecord rec;
  rec.sample_id = r.string("sample_id");
  rec.eager_time_s = r.number("eager_time_s");
  if (const json* ct = r.optional("compiled_time_s")) rec.compiled_time_s = r.as_number(*ct, "compiled_time_s");
  rec.outcome = outcome_from_json(r.at("outcome"));
  rec.warmup_iters = narrow_u32(r.unsigned_integer("warmup_iters"), "warmup_iters");
  rec.timed_iters = narrow_u32(r.unsigned_integer("timed_iters"), "timed_iters");
  r.finish();
  validate(rec);
  return rec;
}

RecordsHeader parse_records_header(std::string_view line) {
  const json doc = parse_object(line);
  ObjectReader r(doc, "records header");
  RecordsHeader h;
  const json& grid = r.at("grid");
  if (!grid.is_array()) throw DataError("records header: 'grid' must be an array");
  for (const json& g : grid) h.grid.push_back(r.as_number(g, "grid"));
  h.p = r.number("p");
  h.b = r.number("b");
  h.producer = r.string("producer");
  r.finish();
  validate(h);
  return h;
}

SampleManifest roundtrip(const SampleManifest& manifest) { return parse_manifest(serialize(manifest)); }
RunRecord roundtrip(const RunRecord& record) { return parse_record(serialize(record)); }

std::vector<SampleManifest> read_manifests(std::string_view text, std::string_view source_name) {
  std::vector<SampleManifest> out;
  std::vector<std::size_t> line_numbers;
  for (const Line& line : nonblank_lines(text)) {
    try {
      out.push_back(parse_manifest(line.text));
    } catch (const DataError& e) {
      throw DataError(located(source_name, line.number, e.what()));
    }
    line_numbers.push_back(line.number);
  }
  check_unique_ids(out, line_numbers, source_name);
  return out;
}

std::vector<SampleManifest> load_manifests(const std::filesystem::path& path) {
  return read_manifests(read_file(path), path.string());
}

RecordSet read_records(std::string_view text, std::string_view source_name) {
  RecordSet set;
  const std::vector<Line> lines = nonblank_lines(text);
  if (lines.empty()) {
    set.header.grid = integer_grid(-10, 0);
    return set;
  }
  try {
    set.header = parse_records_header(lines.front().text);
  } catch (const DataError& e) {
    throw DataError(located(source_name, lines.front().number, e.what()));
  }

  std::vector<std::size_t> line_numbers;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    try {
      RunRecord rec = parse_record(lines[i].text);
      if (const auto* done = std::get_if<Completed>(&rec.outcome)) {
        for (const TensorComparison& c : done->comparisons) {
          if (!c.min_passing_t) continue;
          const bool on_grid = std::any_of(set.header.grid.begin(), set.header.grid.end(),
                                           [&](double g) { return same_grid_point(g, *c.min_passing_t); });
          if (!on_grid) {
            throw DataError("record '" + rec.sample_id + "': min_passing_t " + format_shortest(*c.min_passing_t) +
                            " is not on the header grid");
          }
        }
      }
      set.records.push_back(std::move(rec));
    } catch (const DataError& e) {
      throw DataError(located(source_name, lines[i].number, e.what()));
    }
    line_numbers.push_back(lines[i].number);
  }
  check_unique_ids(set.records, line_numbers, source_name);
  return set;
}

RecordSet load_records(const std::filesystem::path& path) { return read_records(read_file(path), path.string()); }

std::string write_manifests(const std::vector<SampleManifest>& manifests) {
  std::string out;
  for (const SampleManifest& m : manifests) out += serialize(m) + "\n";
  return out;
}

std::string write_records(const RecordSet& set) {
  std::string out = serialize(set.header) + "\n";
  for (const RunRecord& r : set.records) out += serialize(r) + "\n";
  return out;
}

void check_join(const std::vector<SampleManifest>& manifests, const std::vector<RunRecord>& records) {
  std::map<std::string_view, int> seen;
  for (const SampleManifest& m : manifests) seen[m.sample_id] |= 1;
  for (const RunRecord& r : records) seen[r.sample_id] |= 2;
  for (const auto& [id, mask] : seen) {
    if (mask == 1) throw DataError("manifest '" + std::string(id) + "' has no run record");
    if (mask == 2) throw DataError("record '" + std::string(id) + "' has no manifest");
  }
}

}  // namespace tcscore
