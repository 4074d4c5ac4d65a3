// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/simulator.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tcscore/dataset_stats.hpp"
#include "tcscore/error.hpp"
#include "tcscore/numeric.hpp"

namespace tcscore {
namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, 10> kOpTypes = {"conv2d", "matmul",  "add",     "relu",  "layer_norm",
                                                       "softmax", "reshape", "gelu",    "mul",   "transpose"};
constexpr std::uint32_t kGraphInputs = 2;

void check_probability(double v, const std::string& name) {
  if (!(v >= 0 && v <= 1)) throw DataError("sim spec: " + name + " must lie in [0, 1]");
}

struct GeneratedGraph {
  std::vector<TopoNode> topology;
  std::uint64_t variant = 0;  // drives cosmetic differences in the rendered source
};

std::vector<TopoNode> random_topology(SimRng& rng, std::uint64_t operator_count) {
  std::vector<TopoNode> nodes;
  nodes.reserve(operator_count);
  for (std::uint64_t j = 0; j < operator_count; ++j) {
    TopoNode node;
    node.op_type = kOpTypes[rng.below(kOpTypes.size())];
    const std::uint64_t available = j + kGraphInputs;
    const std::uint64_t arity = 1 + rng.below(2);
    for (std::uint64_t a = 0; a < arity; ++a) node.inputs.push_back(static_cast<std::uint32_t>(rng.below(available)));
    nodes.push_back(std::move(node));
  }
  return nodes;
}

// Python-like model source. `variant` only changes comments and spacing, so
// every variant normalizes to the same text.
std::string render_source(const std::vector<TopoNode>& topology, std::uint64_t variant) {
  std::ostringstream src;
  src << "# generated model, revision " << variant << "\n";
  src << "class Model(nn.Module):\n";
  src << "    def forward(self, v0, v1):" << (variant % 2 ? "   # entry" : "") << "\n";
  for (std::size_t j = 0; j < topology.size(); ++j) {
    const TopoNode& node = topology[j];
    src << "        v" << j + kGraphInputs << " = " << node.op_type << "(";
    for (std::size_t k = 0; k < node.inputs.size(); ++k) src << (k ? ", " : "") << "v" << node.inputs[k];
    src << ")";
    if (variant % 3 == 1) src << "  # op " << j;
    src << "\n";
    if (variant % 5 == 2) src << "\n";
  }
  src << "        return v" << topology.size() + kGraphInputs - 1 << "\n";
  return src.str();
}

double draw_log2_normal(SimRng& rng, const SimSpec::Log2Normal& law) {
  return law.log2_mean + law.log2_stddev * rng.normal();
}

}  // namespace

double SimRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SimRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::size_t SimRng::categorical(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  const double target = uniform() * total;
  double acc = 0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

std::uint64_t SimRng::below(std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

void SimSpec::validate() const {
  if (n_samples < 1) throw DataError("sim spec: n_samples must be >= 1");
  double total = 0;
  for (double w : category_mix) {
    if (!(w >= 0) || !std::isfinite(w)) throw DataError("sim spec: category weights must be >= 0");
    total += w;
  }
  if (!(total > 0)) throw DataError("sim spec: category_mix needs a positive weight");
  if (!(speedup_law.log2_stddev >= 0) || !(opcount_law.log2_stddev >= 0) || !(eager_log_stddev >= 0)) {
    throw DataError("sim spec: standard deviations must be >= 0");
  }
  check_probability(error_rates.accuracy_violation, "error_rates.accuracy_violation");
  check_probability(error_rates.runtime_crash, "error_rates.runtime_crash");
  check_probability(error_rates.compile_failure, "error_rates.compile_failure");
  if (error_rates.accuracy_violation + error_rates.runtime_crash + error_rates.compile_failure > 1 + 1e-12) {
    throw DataError("sim spec: error rates must sum to <= 1");
  }
  check_probability(duplicate_rate, "duplicate_rate");
  if (noise_law.empty()) throw DataError("sim spec: noise_law needs at least one dtype");
  for (const auto& [kind, magnitude] : noise_law) {
    if (!(magnitude >= 0) || !std::isfinite(magnitude)) throw DataError("sim spec: noise magnitudes must be >= 0");
  }
  if (!(eager_median_s > 0)) throw DataError("sim spec: eager_median_s must be > 0");
  if (tensor_len < 1 || max_outputs < 1) throw DataError("sim spec: tensor_len and max_outputs must be >= 1");
  if (timed_iters < 1) throw DataError("sim spec: timed_iters must be >= 1");
  RecordsHeader header{grid, p, b, ""};
  tcscore::validate(header);
}

SimSpec parse_sim_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("sim spec: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("sim spec: top level must be an object");

  SimSpec spec;
  const auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) throw DataError("sim spec: '" + key + "' must be a number");
    return v.get<double>();
  };
  const auto count = [](const json& v, const std::string& key) -> std::uint64_t {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw DataError("sim spec: '" + key + "' must be a nonnegative integer");
  };
  const auto law = [&](const json& v, const std::string& key) {
    if (!v.is_object()) throw DataError("sim spec: '" + key + "' must be an object");
    SimSpec::Log2Normal out;
    for (const auto& [field, value] : v.items()) {
      if (field == "log2_mean") {
        out.log2_mean = number(value, key + "." + field);
      } else if (field == "log2_stddev") {
        out.log2_stddev = number(value, key + "." + field);
      } else {
        throw DataError("sim spec: unknown field '" + key + "." + field + "'");
      }
    }
    return out;
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") {
      spec.seed = count(value, key);
    } else if (key == "n_samples") {
      spec.n_samples = count(value, key);
    } else if (key == "framework") {
      if (!value.is_string()) throw DataError("sim spec: 'framework' must be a string");
      spec.framework = value.get<std::string>();
    } else if (key == "category_mix") {
      if (!value.is_object()) throw DataError("sim spec: 'category_mix' must be an object");
      spec.category_mix.fill(0);
      for (const auto& [name, weight] : value.items()) {
        const auto category = parse_task_category(name);
        if (!category) throw DataError("sim spec: unknown task category '" + name + "'");
        spec.category_mix[static_cast<std::size_t>(*category)] = number(weight, key + "." + name);
      }
    } else if (key == "speedup_law") {
      spec.speedup_law = law(value, key);
    } else if (key == "opcount_law") {
      spec.opcount_law = law(value, key);
    } else if (key == "error_rates") {
      if (!value.is_object()) throw DataError("sim spec: 'error_rates' must be an object");
      for (const auto& [field, rate] : value.items()) {
        const double r = number(rate, key + "." + field);
        if (field == "accuracy_violation") {
          spec.error_rates.accuracy_violation = r;
        } else if (field == "runtime_crash") {
          spec.error_rates.runtime_crash = r;
        } else if (field == "compile_failure") {
          spec.error_rates.compile_failure = r;
        } else {
          throw DataError("sim spec: unknown field 'error_rates." + field + "'");
        }
      }
    } else if (key == "noise_law") {
      if (!value.is_object()) throw DataError("sim spec: 'noise_law' must be an object");
      spec.noise_law.clear();
      for (const auto& [name, magnitude] : value.items()) {
        const ScalarKind kind = parse_scalar_kind(name);
        if (kind == ScalarKind::other && name != "other") throw DataError("sim spec: unknown dtype '" + name + "'");
        spec.noise_law[kind] = number(magnitude, key + "." + name);
      }
    } else if (key == "eager_median_s") {
      spec.eager_median_s = number(value, key);
    } else if (key == "eager_log_stddev") {
      spec.eager_log_stddev = number(value, key);
    } else if (key == "tensor_len") {
      spec.tensor_len = count(value, key);
    } else if (key == "max_outputs") {
      spec.max_outputs = count(value, key);
    } else if (key == "warmup_iters") {
      spec.warmup_iters = static_cast<std::uint32_t>(count(value, key));
    } else if (key == "timed_iters") {
      spec.timed_iters = static_cast<std::uint32_t>(count(value, key));
    } else if (key == "duplicate_rate") {
      spec.duplicate_rate = number(value, key);
    } else if (key == "emit_hash_inputs") {
      if (!value.is_boolean()) throw DataError("sim spec: 'emit_hash_inputs' must be a boolean");
      spec.emit_hash_inputs = value.get<bool>();
    } else if (key == "grid") {
      if (!value.is_array()) throw DataError("sim spec: 'grid' must be an array");
      spec.grid.clear();
      for (const json& g : value) spec.grid.push_back(number(g, key));
    } else if (key == "p") {
      spec.p = number(value, key);
    } else if (key == "b") {
      spec.b = number(value, key);
    } else {
      throw DataError("sim spec: unknown field '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

SimSpec load_sim_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sim spec " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sim_spec(ss.str());
}

TensorComparison compare_outputs(std::span<const double> x, std::span<const double> y, ScalarKind kind,
                                 std::span<const double> grid, std::uint32_t tensor_index,
                                 const ToleranceTable& table) {
  return TensorComparison{tensor_index, kind, min_passing_tolerance(x, y, kind, grid, table)};
}

SimOutput simulate(const SimSpec& spec, const ToleranceTable& table) {
  spec.validate();
  SimRng rng(spec.seed);

  std::vector<ScalarKind> output_kinds;
  for (const auto& [kind, magnitude] : spec.noise_law) output_kinds.push_back(kind);

  SimOutput out;
  out.records.header = RecordsHeader{spec.grid, spec.p, spec.b, "tcscore-simulate seed=" + std::to_string(spec.seed)};
  std::vector<GeneratedGraph> graphs;

  const double acc_cut = spec.error_rates.accuracy_violation;
  const double crash_cut = acc_cut + spec.error_rates.runtime_crash;
  const double compile_cut = crash_cut + spec.error_rates.compile_failure;
  const int id_width = static_cast<int>(std::to_string(spec.n_samples).size());

  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    std::string id = std::to_string(i);
    id = "sim-" + std::string(static_cast<std::size_t>(id_width) - id.size(), '0') + id;

    SampleManifest manifest;
    manifest.sample_id = id;
    manifest.framework = spec.framework;
    manifest.task_category = static_cast<TaskCategory>(rng.categorical(spec.category_mix));

    // Graph: fresh, or a cosmetic re-rendering of an earlier one.
    GeneratedGraph graph;
    const bool duplicate = !graphs.empty() && rng.uniform() < spec.duplicate_rate;
    if (duplicate) {
      graph = graphs[rng.below(graphs.size())];
      graph.variant += 1 + rng.below(29);
    } else {
      const double log2_ops = draw_log2_normal(rng, spec.opcount_law);
      const double ops = std::round(std::exp2(std::clamp(log2_ops, 0.0, 16.0)));
      graph.topology = random_topology(rng, std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ops)));
      graph.variant = rng.below(30);
      graphs.push_back(graph);
    }
    manifest.operator_count = graph.topology.size();
    manifest.parameter_count =
        manifest.operator_count * static_cast<std::uint64_t>(std::round(std::exp2(10.0 + rng.normal())));
    HashInput hash_input{normalize_source(render_source(graph.topology, graph.variant)), graph.topology};
    manifest.graph_hash = graph_hash(hash_input);
    if (spec.emit_hash_inputs) manifest.source_digest_inputs = std::move(hash_input);

    RunRecord record;
    record.sample_id = id;
    record.warmup_iters = spec.warmup_iters;
    record.timed_iters = spec.timed_iters;
    record.eager_time_s = spec.eager_median_s * std::exp(spec.eager_log_stddev * rng.normal());

    const double outcome_draw = rng.uniform();
    const std::size_t n_outputs = 1 + rng.below(spec.max_outputs);
    std::vector<ScalarKind> kinds;
    for (std::size_t o = 0; o < n_outputs; ++o) kinds.push_back(output_kinds[rng.below(output_kinds.size())]);
    manifest.dtypes.insert(kinds.begin(), kinds.end());

    if (outcome_draw < acc_cut || outcome_draw >= compile_cut) {
      const bool violate = outcome_draw < acc_cut;
      Completed done;
      for (std::size_t o = 0; o < n_outputs; ++o) {
        const ScalarKind kind = kinds[o];
        const std::size_t len = spec.tensor_len * (is_complex(kind) ? 2 : 1);
        std::vector<double> reference(len);
        std::vector<double> compiled(len);
        for (double& v : reference) v = rng.normal();
        const double amplitude = spec.noise_law.at(kind) * std::pow(10.0, rng.normal());
        for (std::size_t e = 0; e < len; ++e) compiled[e] = reference[e] + amplitude * rng.normal();
        if (violate && o == 0) {
          // Beyond atol(0) + rtol(0)|y| = 1 + |y| for every schedule.
          const double mag = is_complex(kind) ? std::hypot(reference[0], reference[1]) : std::abs(reference[0]);
          compiled[0] = reference[0] + 2.0 + 2.0 * mag;
        }
        done.comparisons.push_back(compare_outputs(compiled, reference, kind, spec.grid, static_cast<std::uint32_t>(o), table));
      }
      const double speedup = std::exp2(draw_log2_normal(rng, spec.speedup_law));
      record.compiled_time_s = record.eager_time_s / speedup;
      record.outcome = std::move(done);
    } else if (outcome_draw < crash_cut) {
      record.outcome = RuntimeCrash{"simulated runtime crash"};
    } else {
      record.outcome = CompileFailure{"simulated compilation failure"};
    }

    validate(manifest);
    validate(record);
    out.manifests.push_back(std::move(manifest));
    out.records.records.push_back(std::move(record));
  }
  return out;
}

}  // namespace tcscore
