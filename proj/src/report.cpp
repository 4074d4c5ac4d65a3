// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include "tcscore/report.hpp"

#include <json.hpp>

#include <cmath>
#include <unordered_map>

#include "tcscore/error.hpp"
#include "tcscore/numeric.hpp"

namespace tcscore {
namespace {

using ojson = nlohmann::ordered_json;

constexpr int kTableDecimals = 3;
constexpr std::string_view kDash = "-";

struct TableRow {
  std::string t;
  std::array<std::string, 7> cells;  // alpha beta lambda eta S gamma ES
};

std::vector<TableRow> table_rows(const ScoreCurve& curve) {
  std::vector<TableRow> rows;
  for (const CurvePoint& p : curve.points) {
    const ScoreComponents& c = p.components;
    const auto f = [](double v) { return format_fixed(v, kTableDecimals); };
    rows.push_back({format_level(p.t),
                    {f(c.alpha), f(c.beta), f(c.lambda), f(c.eta),
                     p.speedup_score ? f(*p.speedup_score) : std::string(kDash), f(c.gamma), f(p.error_aware_score)}});
  }
  return rows;
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dump(const ojson& doc) { return doc.dump(2) + "\n"; }

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "md") return OutputFormat::md;
  throw DataError("unknown output format '" + std::string(name) + "'");
}

std::string format_level(double t) {
  if (std::isfinite(t) && t == std::floor(t) && std::abs(t) < 1e15) {
    return std::to_string(static_cast<long long>(t));
  }
  return format_shortest(t);
}

std::string render_report_table(const ScoreCurve& curve, OutputFormat format) {
  static constexpr std::array<std::string_view, 8> kHeader = {"t", "alpha", "beta", "lambda", "eta", "S(t)", "gamma", "ES(t)"};
  const std::vector<TableRow> rows = table_rows(curve);
  std::string out;
  switch (format) {
    case OutputFormat::csv:
      for (std::size_t i = 0; i < kHeader.size(); ++i) out += (i ? "," : "") + std::string(kHeader[i]);
      out += "\n";
      for (const TableRow& r : rows) {
        out += r.t;
        for (const std::string& cell : r.cells) out += "," + cell;
        out += "\n";
      }
      break;
    case OutputFormat::md:
      out += "|";
      for (std::string_view h : kHeader) out += " " + std::string(h) + " |";
      out += "\n|";
      for (std::size_t i = 0; i < kHeader.size(); ++i) out += "---:|";
      out += "\n";
      for (const TableRow& r : rows) {
        out += "| " + r.t + " |";
        for (const std::string& cell : r.cells) out += " " + cell + " |";
        out += "\n";
      }
      break;
    case OutputFormat::json:
      // Written by hand so numbers keep exactly three decimals.
      out += "[\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const TableRow& r = rows[i];
        out += "  {\"t\": " + r.t;
        for (std::size_t k = 0; k < r.cells.size(); ++k) {
          const std::string& cell = r.cells[k];
          out += ", \"" + std::string(kHeader[k + 1]) + "\": " + (cell == kDash ? "\"-\"" : cell);
        }
        out += i + 1 < rows.size() ? "},\n" : "}\n";
      }
      out += "]\n";
      break;
  }
  return out;
}

std::string render_curve(const ScoreCurve& curve, OutputFormat format) {
  if (curve.points.empty()) throw DataError("empty curve");
  if (format == OutputFormat::md) throw DataError("curve output supports csv and json");
  if (format == OutputFormat::json) {
    ojson points = ojson::array();
    for (const CurvePoint& p : curve.points) {
      const ScoreComponents& c = p.components;
      ojson j;
      j["t"] = p.t;
      j["n"] = c.n;
      j["m"] = c.m;
      j["k"] = c.k;
      j["e"] = c.e;
      j["e_by_code"] = c.e_by_code;
      j["alpha"] = c.alpha;
      j["beta"] = c.beta;
      j["lambda"] = c.lambda;
      j["eta"] = c.eta;
      j["pi"] = c.pi;
      j["gamma"] = c.gamma;
      j["S"] = p.speedup_score ? ojson(*p.speedup_score) : ojson(nullptr);
      j["ES"] = p.error_aware_score;
      points.push_back(std::move(j));
    }
    return dump(points);
  }
  std::string out = "t,n,m,k,e,e1,e2,e3,alpha,beta,lambda,eta,pi1,pi2,pi3,gamma,S,ES\n";
  for (const CurvePoint& p : curve.points) {
    const ScoreComponents& c = p.components;
    out += format_level(p.t);
    for (std::size_t v : {c.n, c.m, c.k, c.e, c.e_by_code[0], c.e_by_code[1], c.e_by_code[2]}) {
      out += "," + std::to_string(v);
    }
    for (double v : {c.alpha, c.beta, c.lambda, c.eta, c.pi[0], c.pi[1], c.pi[2], c.gamma}) out += "," + format_shortest(v);
    out += "," + (p.speedup_score ? format_shortest(*p.speedup_score) : std::string());
    out += "," + format_shortest(p.error_aware_score) + "\n";
  }
  return out;
}

std::vector<ViolinGroup> emit_violin(const std::vector<SampleManifest>& manifests,
                                     const std::vector<ClassifiedSample>& samples) {
  std::map<std::pair<std::string, TaskCategory>, std::vector<double>> groups;
  std::unordered_map<std::string_view, const SampleManifest*> by_id;
  for (const SampleManifest& m : manifests) {
    by_id.emplace(m.sample_id, &m);
    groups[{m.framework, m.task_category}];
  }
  for (const ClassifiedSample& s : samples) {
    const auto it = by_id.find(s.sample_id);
    if (it == by_id.end()) throw DataError("sample '" + s.sample_id + "' has no manifest");
    if (const auto* ok = std::get_if<Correct>(&s.status)) {
      groups[{it->second->framework, it->second->task_category}].push_back(std::log2(ok->speedup));
    }
  }
  std::vector<ViolinGroup> out;
  for (auto& [key, values] : groups) out.push_back({key.first, key.second, std::move(values)});
  return out;
}

std::string render_violin(const std::vector<ViolinGroup>& groups, OutputFormat format) {
  if (format == OutputFormat::json) {
    ojson doc = ojson::array();
    for (const ViolinGroup& g : groups) {
      ojson j;
      j["framework"] = g.framework;
      j["task_category"] = std::string(to_string(g.task_category));
      j["log2_speedup"] = g.log2_speedups;
      doc.push_back(std::move(j));
    }
    return dump(doc);
  }
  if (format == OutputFormat::md) throw DataError("violin output supports csv and json");
  // Long format; an empty group is one row with an empty value.
  std::string out = "framework,task_category,log2_speedup\n";
  for (const ViolinGroup& g : groups) {
    const std::string prefix = csv_escape(g.framework) + "," + std::string(to_string(g.task_category)) + ",";
    if (g.log2_speedups.empty()) out += prefix + "\n";
    for (double v : g.log2_speedups) out += prefix + format_shortest(v) + "\n";
  }
  return out;
}

std::string render_stats(const StatsReport& report, OutputFormat format) {
  if (format == OutputFormat::json) {
    ojson doc;
    doc["total"] = report.total;
    ojson cats = ojson::array();
    for (std::size_t i = 0; i < kTaskCategoryCount; ++i) {
      const CategoryStats& c = report.categories[i];
      ojson j;
      j["category"] = std::string(to_string(static_cast<TaskCategory>(i)));
      j["count"] = c.count;
      j["share_percent"] = c.share_percent;
      ojson hist = ojson::array();
      for (const auto& [bin, n] : c.histogram) hist.push_back({{"log2_bin", bin}, {"count", n}});
      j["histogram"] = std::move(hist);
      cats.push_back(std::move(j));
    }
    doc["categories"] = std::move(cats);
    return dump(doc);
  }
  if (format == OutputFormat::md) throw DataError("stats output supports csv and json");
  // One row per (category, bin); categories without samples get one row
  // with empty bin columns so every category is listed.
  std::string out = "category,count,share_percent,log2_bin,bin_count\n";
  for (std::size_t i = 0; i < kTaskCategoryCount; ++i) {
    const CategoryStats& c = report.categories[i];
    const std::string prefix = std::string(to_string(static_cast<TaskCategory>(i))) + "," + std::to_string(c.count) +
                               "," + format_shortest(c.share_percent) + ",";
    if (c.histogram.empty()) out += prefix + ",\n";
    for (const auto& [bin, n] : c.histogram) out += prefix + std::to_string(bin) + "," + std::to_string(n) + "\n";
  }
  return out;
}

std::string render_dedup(const DedupResult& result, OutputFormat format) {
  if (format == OutputFormat::json) {
    ojson doc;
    doc["kept"] = result.kept.size();
    ojson dropped = ojson::array();
    for (const DroppedSample& d : result.dropped) {
      dropped.push_back({{"sample_id", d.sample_id}, {"duplicate_of", d.duplicate_of}, {"graph_hash", d.graph_hash}});
    }
    doc["dropped"] = std::move(dropped);
    return dump(doc);
  }
  if (format == OutputFormat::md) throw DataError("dedup output supports csv and json");
  std::string out = "sample_id,duplicate_of,graph_hash\n";
  for (const DroppedSample& d : result.dropped) {
    out += csv_escape(d.sample_id) + "," + csv_escape(d.duplicate_of) + "," + d.graph_hash + "\n";
  }
  return out;
}

}  // namespace tcscore
