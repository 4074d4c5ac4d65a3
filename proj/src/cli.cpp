// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "tcscore/dataset_stats.hpp"
#include "tcscore/error.hpp"
#include "tcscore/records.hpp"
#include "tcscore/report.hpp"
#include "tcscore/scoring.hpp"
#include "tcscore/simulator.hpp"

namespace tcscore {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string records;
  std::string manifests;
  std::string out;
  std::string format;
  std::string grid;
  std::optional<double> t;
  std::optional<double> p;
  std::optional<double> b;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::string spec;
  std::string tolerance;
  std::string dropped;
};

double parse_real(std::string_view text) {
  double v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw CLI::ValidationError("--grid", "not a number: '" + std::string(text) + "'");
  }
  return v;
}

// "lo:hi" (integer range) or "a,b,c".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const double lo = parse_real(std::string_view(text).substr(0, colon));
    const double hi = parse_real(std::string_view(text).substr(colon + 1));
    if (lo != std::floor(lo) || hi != std::floor(hi) || lo > hi) {
      throw CLI::ValidationError("--grid", "range must be lo:hi with integers lo <= hi");
    }
    return integer_grid(static_cast<int>(lo), static_cast<int>(hi));
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    grid.push_back(parse_real(std::string_view(text).substr(pos, end - pos)));
    pos = end + 1;
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

ScoreConfig make_config(const RecordsHeader& header, const Options& o) {
  ScoreConfig cfg;
  cfg.p = o.p.value_or(header.p);
  cfg.b = o.b.value_or(header.b);
  cfg.grid_neg = header.grid;
  if (!o.grid.empty()) {
    cfg.grid_neg.clear();
    cfg.grid_pos.clear();
    for (double t : parse_grid(o.grid)) (t > 0 ? cfg.grid_pos : cfg.grid_neg).push_back(t);
  }
  cfg.validate();
  return cfg;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw DataError("cannot write " + o.out);
  file << text;
  if (!file) throw DataError("failed writing " + o.out);
}

OutputFormat format_or(const Options& o, OutputFormat fallback) {
  return o.format.empty() ? fallback : parse_output_format(o.format);
}

struct Dataset {
  std::vector<SampleManifest> manifests;
  RecordSet records;
};

Dataset load_dataset(const Options& o, bool manifests_required) {
  Dataset d;
  d.records = load_records(o.records);
  if (!o.manifests.empty()) {
    d.manifests = load_manifests(o.manifests);
    check_join(d.manifests, d.records.records);
  } else if (manifests_required) {
    throw DataError("--manifests is required");
  }
  if (d.records.records.empty()) throw DataError("no samples");
  return d;
}

int cmd_score(const Options& o, std::ostream& out) {
  const Dataset d = load_dataset(o, false);
  const ScoreConfig cfg = make_config(d.records.header, o);
  const double t = *o.t;
  const std::vector<ClassifiedSample> samples = classify_all(d.records.records, t, cfg);
  CurvePoint point;
  point.t = t;
  point.components = components(samples, t, cfg);
  if (t <= 0) point.speedup_score = speedup_score(point.components, cfg);
  point.error_aware_score = error_aware_score(point.components, cfg);
  write_output(o, render_curve(ScoreCurve{{point}}, format_or(o, OutputFormat::csv)), out);
  return kExitOk;
}

int cmd_curve(const Options& o, std::ostream& out, bool table) {
  const Dataset d = load_dataset(o, false);
  const ScoreConfig cfg = make_config(d.records.header, o);
  const ScoreCurve curve = score_curve(std::span<const RunRecord>(d.records.records), cfg);
  const OutputFormat format = format_or(o, OutputFormat::csv);
  write_output(o, table ? render_report_table(curve, format) : render_curve(curve, format), out);
  return kExitOk;
}

int cmd_violin(const Options& o, std::ostream& out) {
  const Dataset d = load_dataset(o, true);
  const ScoreConfig cfg = make_config(d.records.header, o);
  if (!cfg.on_grid(0.0)) throw DataError("violin data needs t = 0 on the grid");
  const std::vector<ClassifiedSample> samples = classify_all(d.records.records, 0.0, cfg);
  write_output(o, render_violin(emit_violin(d.manifests, samples), format_or(o, OutputFormat::csv)), out);
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const StatsReport report = stats(load_manifests(o.manifests));
  write_output(o, render_stats(report, format_or(o, OutputFormat::csv)), out);
  return kExitOk;
}

int cmd_dedup(const Options& o, std::ostream& out, std::ostream& err) {
  const DedupResult result = dedup(load_manifests(o.manifests));
  const std::string report = render_dedup(result, format_or(o, OutputFormat::csv));
  if (!o.out.empty()) {
    Options kept = o;
    write_output(kept, write_manifests(result.kept), out);
  }
  if (!o.dropped.empty()) {
    Options dropped = o;
    dropped.out = o.dropped;
    write_output(dropped, report, out);
  } else {
    out << report;
  }
  err << "dedup: kept " << result.kept.size() << ", dropped " << result.dropped.size() << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& err) {
  SimSpec spec = o.spec.empty() ? SimSpec{} : load_sim_spec(o.spec);
  if (o.seed) spec.seed = *o.seed;
  if (o.n) spec.n_samples = *o.n;
  if (o.p) spec.p = *o.p;
  if (o.b) spec.b = *o.b;
  if (!o.grid.empty()) spec.grid = parse_grid(o.grid);
  const ToleranceTable table = o.tolerance.empty() ? ToleranceTable::defaults() : ToleranceTable::load(o.tolerance);
  const SimOutput sim = simulate(spec, table);

  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path manifests = o.manifests.empty() ? dir / "manifests.jsonl" : fs::path(o.manifests);
  const fs::path records = o.records.empty() ? dir / "records.jsonl" : fs::path(o.records);
  for (const auto& [path, text] : {std::pair{manifests, write_manifests(sim.manifests)},
                                   std::pair{records, write_records(sim.records)}}) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot write " + path.string());
    file << text;
    if (!file) throw DataError("failed writing " + path.string());
  }
  err << "simulate: wrote " << sim.manifests.size() << " samples to " << manifests.string() << " and "
      << records.string() << "\n";
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  if (o.records.empty() && o.manifests.empty()) throw CLI::ValidationError("validate", "give --records and/or --manifests");
  std::vector<SampleManifest> manifests;
  RecordSet records;
  if (!o.manifests.empty()) {
    manifests = load_manifests(o.manifests);
    for (const SampleManifest& m : manifests) {
      if (m.source_digest_inputs && !m.source_digest_inputs->topology.empty() &&
          graph_hash(*m.source_digest_inputs) != m.graph_hash) {
        throw DataError(o.manifests + ": manifest '" + m.sample_id + "': graph_hash does not match its digest inputs");
      }
    }
  }
  if (!o.records.empty()) records = load_records(o.records);
  if (!o.manifests.empty() && !o.records.empty()) check_join(manifests, records.records);
  out << "ok: " << manifests.size() << " manifests, " << records.records.size() << " records\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Correctness-aware speedup scoring for tensor-compiler benchmark runs", "tcscore"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--format", o.format, "csv, json or md");
  };
  const auto add_scoring = [&](CLI::App* sub) {
    sub->add_option("--records", o.records, "Records file")->required();
    sub->add_option("--manifests", o.manifests, "Manifests file; enables the join check");
    sub->add_option("--grid", o.grid, "Tolerance grid: lo:hi or comma list (use --grid=...)");
    sub->add_option("--p", o.p, "Degradation penalty (overrides the records header)");
    sub->add_option("--b", o.b, "Failure penalty (overrides the records header)");
    add_common(sub);
  };

  CLI::App* score = app.add_subcommand("score", "Components and scores at one tolerance level");
  add_scoring(score);
  score->add_option("--t", o.t, "Tolerance level")->required();
  CLI::App* curve = app.add_subcommand("curve", "Full-precision S/ES curve data");
  add_scoring(curve);
  CLI::App* report = app.add_subcommand("report", "Score table rounded to 3 decimals");
  add_scoring(report);
  CLI::App* violin = app.add_subcommand("violin", "log2 speedups of correct samples at t = 0, grouped");
  add_scoring(violin);

  CLI::App* stats_cmd = app.add_subcommand("stats", "Category shares and log2 operator-count histograms");
  stats_cmd->add_option("--manifests", o.manifests, "Manifests file")->required();
  add_common(stats_cmd);

  CLI::App* dedup_cmd = app.add_subcommand("dedup", "Drop samples whose graph hash was already seen");
  dedup_cmd->add_option("--manifests", o.manifests, "Manifests file")->required();
  dedup_cmd->add_option("--out", o.out, "Write kept manifests here");
  dedup_cmd->add_option("--dropped", o.dropped, "Write the dropped-sample report here (default stdout)");
  dedup_cmd->add_option("--format", o.format, "Dropped report format: csv or json");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic benchmark run");
  simulate_cmd->add_option("--spec", o.spec, "Simulation config (JSON)");
  simulate_cmd->add_option("--seed", o.seed, "Overrides the config seed");
  simulate_cmd->add_option("--n", o.n, "Overrides the config sample count");
  simulate_cmd->add_option("--out", o.out, "Output directory (default .)");
  simulate_cmd->add_option("--manifests", o.manifests, "Manifests output path");
  simulate_cmd->add_option("--records", o.records, "Records output path");
  simulate_cmd->add_option("--grid", o.grid, "Producer tolerance grid (use --grid=...)");
  simulate_cmd->add_option("--p", o.p, "Degradation penalty written to the header");
  simulate_cmd->add_option("--b", o.b, "Failure penalty written to the header");
  simulate_cmd->add_option("--tolerance", o.tolerance, "Tolerance slope overrides (JSON)");

  CLI::App* validate_cmd = app.add_subcommand("validate", "Schema, uniqueness, join and hash checks");
  validate_cmd->add_option("--records", o.records, "Records file");
  validate_cmd->add_option("--manifests", o.manifests, "Manifests file");

  std::vector<const char*> argv{"tcscore"};
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (score->parsed()) return cmd_score(o, out);
    if (curve->parsed()) return cmd_curve(o, out, false);
    if (report->parsed()) return cmd_curve(o, out, true);
    if (violin->parsed()) return cmd_violin(o, out);
    if (stats_cmd->parsed()) return cmd_stats(o, out);
    if (dedup_cmd->parsed()) return cmd_dedup(o, out, err);
    if (simulate_cmd->parsed()) return cmd_simulate(o, err);
    if (validate_cmd->parsed()) return cmd_validate(o, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace tcscore
