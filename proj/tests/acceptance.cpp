// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Usage: tcscore_acceptance <path-to-tcscore>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "support/published_tables.hpp"
#include "tcscore/dataset_stats.hpp"
#include "tcscore/scoring.hpp"
#include "tcscore/simulator.hpp"
#include "tcscore/tolerance.hpp"

namespace fs = std::filesystem;
using namespace tcscore;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Plain long-double mean of logs, independent of the library's summation.
double oracle_geomean(const std::vector<double>& values) {
  long double sum = 0;
  for (double v : values) sum += std::log(static_cast<long double>(v));
  return static_cast<double>(std::exp(sum / static_cast<long double>(values.size())));
}

// Randomized sets shared by the equivalence criteria.
struct RandomSets {
  static constexpr int kSets = 1000;
  static constexpr std::uint64_t kSeed = 20260101;
};

std::size_t draw_size(std::mt19937_64& rng) {
  // Log-uniform over [1, 10^4] so small and large sets both appear.
  std::uniform_real_distribution<double> u(0.0, 4.0);
  return static_cast<std::size_t>(std::llround(std::pow(10.0, u(rng))));
}

Outcome ac1_fixtures() {
  Outcome o;
  const ScoreConfig cfg;
  double worst_nlp = 0, worst_cv = 0;
  for (const auto& table : testing::kPublishedTables) {
    const double limit = table.nlp ? 0.005 : 0.01;
    for (const auto& row : table.rows) {
      ScoreComponents c;
      c.t = row.t;
      c.alpha = row.alpha;
      c.beta = row.beta;
      c.lambda = row.lambda;
      c.eta = row.eta;
      c.gamma = row.gamma;
      double& worst = table.nlp ? worst_nlp : worst_cv;
      if (!std::isnan(row.s)) {
        const double d = std::abs(speedup_score(c, cfg) - row.s);
        worst = std::max(worst, d);
        if (d > limit) o.fail(std::string(table.name) + fmt(" t=%g S off by %.4f", row.t, d));
      }
      const double d = std::abs(error_aware_score(c, cfg) - row.es);
      worst = std::max(worst, d);
      if (d > limit) o.fail(std::string(table.name) + fmt(" t=%g ES off by %.4f", row.t, d));
    }
  }
  if (o.pass) o.detail = fmt("max |diff| NLP %.4f (limit 0.005), CV %.4f (limit 0.01)", worst_nlp, worst_cv);
  return o;
}

// AC2 and AC3 share the randomized sets; each gets its own timing.
struct EquivalenceResult {
  Outcome b2, c24;
  double b2_seconds = 0, c24_seconds = 0;
};

EquivalenceResult ac2_ac3_equivalence() {
  using clock = std::chrono::steady_clock;
  EquivalenceResult r;
  const ScoreConfig cfg;
  std::mt19937_64 rng(RandomSets::kSeed);
  double worst_s = 0, worst_gamma = 0, worst_es = 0;
  std::size_t total_samples = 0;
  for (int set = 0; set < RandomSets::kSets; ++set) {
    const std::size_t n = draw_size(rng);
    total_samples += n;
    const auto records = testing::random_records(rng, n, cfg.grid_neg);

    auto start = clock::now();
    for (double t : cfg.grid_neg) {
      const auto samples = classify_all(records, t, cfg);
      const double s = speedup_score(components(samples, t, cfg), cfg);
      const double g = gmrs(samples, t, cfg);
      const double e = rel_err(s, g);
      worst_s = std::max(worst_s, e);
      if (e > 1e-9) r.b2.fail(fmt("set %g t=%g relative error %.3g", set, t, e));
    }
    r.b2_seconds += std::chrono::duration<double>(clock::now() - start).count();

    start = clock::now();
    for (double t : cfg.grid_pos) {
      const auto samples = classify_all(records, t, cfg);
      const ScoreComponents c = components(samples, t, cfg);
      // Per-sample penalties over erroneous samples only.
      std::vector<double> penalties;
      for (const ClassifiedSample& s : samples) {
        if (const auto* bad = std::get_if<Erroneous>(&s.status)) penalties.push_back(penalty_factor(bad->code, t, cfg));
      }
      const double gamma_oracle = penalties.empty() ? 1.0 : oracle_geomean(penalties);
      const double eg = rel_err(c.gamma, gamma_oracle);
      worst_gamma = std::max(worst_gamma, eg);
      if (eg > 1e-12) r.c24.fail(fmt("set %g t=%g gamma relative error %.3g", set, t, eg));
      const double ee = rel_err(error_aware_score(c, cfg), gmrs(samples, t, cfg));
      worst_es = std::max(worst_es, ee);
      if (ee > 1e-9) r.c24.fail(fmt("set %g t=%g ES relative error %.3g", set, t, ee));
    }
    r.c24_seconds += std::chrono::duration<double>(clock::now() - start).count();
  }
  if (r.b2_seconds >= 30) r.b2.fail(fmt("took %.1f s (limit 30 s)", r.b2_seconds));
  if (r.c24_seconds >= 30) r.c24.fail(fmt("took %.1f s (limit 30 s)", r.c24_seconds));
  if (r.b2.pass) {
    r.b2.detail = fmt("%g sets, %g samples, max relative error %.2g (limit 1e-9)", RandomSets::kSets,
                      static_cast<double>(total_samples), worst_s);
  }
  if (r.c24.pass) r.c24.detail = fmt("max gamma error %.2g (limit 1e-12), max ES error %.2g (limit 1e-9)", worst_gamma, worst_es);
  return r;
}

bool two_sig_figs(double value, double printed) {
  const double scale = std::pow(10.0, std::floor(std::log10(printed)) - 1);
  return std::llround(value / scale) == std::llround(printed / scale);
}

Outcome ac4_tolerance_tables() {
  Outcome o;
  struct Row {
    ScalarKind kind;
    double atol_m5, rtol_m5;
    bool rtol_exact;
  };
  const std::vector<Row> rows = {
      {ScalarKind::float16, 1e-5, 1e-3, true},      {ScalarKind::bfloat16, 1e-5, 1.6e-2, false},
      {ScalarKind::float32, 1e-5, 1.3e-6, false},   {ScalarKind::float64, 1e-7, 1e-7, true},
      {ScalarKind::complex32, 1e-5, 1e-3, true},    {ScalarKind::complex64, 1e-5, 1.3e-6, false},
      {ScalarKind::complex128, 1e-7, 1e-7, true},   {ScalarKind::quint8, 1e-5, 1.3e-6, false},
      {ScalarKind::quint2x4, 1e-5, 1.3e-6, false},  {ScalarKind::quint4x2, 1e-5, 1.3e-6, false},
      {ScalarKind::qint8, 1e-5, 1.3e-6, false},     {ScalarKind::qint32, 1e-5, 1.3e-6, false},
  };
  for (const Row& r : rows) {
    const std::string name(to_string(r.kind));
    if (atol(r.kind, -5) != r.atol_m5) o.fail(name + " atol(-5)");
    if (atol(r.kind, 0) != 1.0) o.fail(name + " atol(0)");
    if (rtol(r.kind, 0) != 1.0) o.fail(name + " rtol(0)");
    const double rv = rtol(r.kind, -5);
    if (r.rtol_exact ? rv != r.rtol_m5 : !two_sig_figs(rv, r.rtol_m5)) o.fail(name + fmt(" rtol(-5) = %.4g", rv));
  }
  for (double t : {-5.0, 0.0}) {
    if (atol(ScalarKind::other, t) != 0.0 || rtol(ScalarKind::other, t) != 0.0) o.fail("others must be 0");
  }
  if (o.pass) o.detail = "13 dtype rows at t=-5 and t=0";
  return o;
}

Outcome ac5_monotonicity() {
  Outcome o;
  const ScoreConfig cfg;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    SimSpec spec;
    spec.seed = seed;
    spec.n_samples = 250;
    spec.error_rates = {0.02 * static_cast<double>(seed % 5), 0.05, 0.01 * static_cast<double>(seed % 7)};
    spec.noise_law = {{ScalarKind::float32, 1e-5}, {ScalarKind::float16, 1e-3}, {ScalarKind::bfloat16, 1e-2},
                      {ScalarKind::complex64, 1e-6}};
    const SimOutput sim = simulate(spec);
    const auto& records = sim.records.records;

    for (const RunRecord& r : records) {
      bool passed = false;
      for (double t : cfg.grid_neg) {
        const bool now = classify(r, t, cfg).is_correct();
        if (passed && !now) o.fail("pass(t) not monotone for " + r.sample_id);
        passed = now;
      }
    }
    const ScoreCurve curve = score_curve(sim.manifests, records, cfg);
    double prev_lambda = -1, prev_gamma = 0, prev_es = 0;
    for (const CurvePoint& p : curve.points) {
      const ScoreComponents& c = p.components;
      if (p.t <= 0) {
        if (c.lambda < prev_lambda) o.fail(fmt("lambda decreased at t=%g seed %g", p.t, static_cast<double>(seed)));
        prev_lambda = c.lambda;
        if (!p.speedup_score || *p.speedup_score != p.error_aware_score) o.fail(fmt("ES != S at t=%g", p.t));
        if (c.e > 0 && c.gamma != cfg.b) o.fail(fmt("gamma != b at t=%g", p.t));
      }
      if (c.gamma < prev_gamma) o.fail(fmt("gamma decreased at t=%g", p.t));
      prev_gamma = c.gamma;
      if (p.t >= 3 && c.gamma != 1.0) o.fail(fmt("gamma != 1 at t=%g", p.t));
      if (p.t >= 0) {
        if (p.error_aware_score < prev_es) o.fail(fmt("ES decreased at t=%g", p.t));
        prev_es = p.error_aware_score;
      }
    }
    checked += records.size();
  }
  if (o.pass) o.detail = fmt("40 seeds, %g simulated samples", static_cast<double>(checked));
  return o;
}

RunRecord completed_record(const std::string& id, double speedup) {
  RunRecord r;
  r.sample_id = id;
  r.eager_time_s = 0.01;
  r.compiled_time_s = 0.01 / speedup;
  r.outcome = Completed{{{0, ScalarKind::float32, -10.0}}};
  return r;
}

RunRecord compile_failure_record(const std::string& id) {
  RunRecord r;
  r.sample_id = id;
  r.eager_time_s = 0.01;
  r.outcome = CompileFailure{"failed"};
  return r;
}

Outcome ac6_degenerate() {
  Outcome o;
  const ScoreConfig cfg;
  const auto s_at = [&](const std::vector<RunRecord>& records, double t) {
    return speedup_score(components(classify_all(records, t, cfg), t, cfg), cfg);
  };

  std::vector<RunRecord> failures;
  for (int i = 0; i < 20; ++i) failures.push_back(compile_failure_record("f" + std::to_string(i)));
  const double s0 = s_at(failures, 0);
  if (std::abs(s0 - 0.1) > 1e-15) o.fail(fmt("all-compile-failure S_0 = %.17g", s0));

  std::vector<RunRecord> units;
  for (int i = 0; i < 20; ++i) units.push_back(completed_record("u" + std::to_string(i), 1.0));
  for (double t : cfg.grid_neg) {
    if (s_at(units, t) != 1.0) o.fail(fmt("unit-speedup S(%g) = %.17g", t, s_at(units, t)));
  }

  const std::vector<RunRecord> pair{completed_record("a", 2.0), compile_failure_record("b")};
  const double oracle = std::sqrt(2.0 * 0.1);
  const double s_pair = s_at(pair, 0);
  if (std::abs(s_pair - oracle) > 1e-12) o.fail(fmt("two-sample S_0 = %.17g, oracle %.17g", s_pair, oracle));
  if (o.pass) o.detail = fmt("S_0 = %.3f, unit S = 1, two-sample S_0 = %.4f", s0, s_pair);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome ac7_end_to_end(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    o.fail("no tcscore binary given");
    return o;
  }
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = fs::temp_directory_path() / "tcscore_acceptance_e2e";
  fs::remove_all(dir);
  std::vector<std::string> reports;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run));
    fs::create_directories(out);
    const std::string simulate = quote(cli) + " simulate --seed 42 --n 500 --out " + quote(out) + " 2>/dev/null";
    const std::string report = quote(cli) + " report --records " + quote(out / "records.jsonl") + " --manifests " +
                               quote(out / "manifests.jsonl") + " > " + quote(out / "report.csv");
    if (std::system(simulate.c_str()) != 0 || std::system(report.c_str()) != 0) {
      o.fail("command failed");
      return o;
    }
    reports.push_back(slurp(out / "report.csv"));
    if (run == 1) {
      if (slurp(dir / "run0" / "records.jsonl") != slurp(out / "records.jsonl")) o.fail("records differ between runs");
      if (slurp(dir / "run0" / "manifests.jsonl") != slurp(out / "manifests.jsonl")) o.fail("manifests differ between runs");
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fs::remove_all(dir);
  if (reports[0].empty()) o.fail("empty report");
  if (reports[0] != reports[1]) o.fail("reports differ");
  if (seconds >= 10) o.fail(fmt("took %.2f s (limit 10 s)", seconds));
  if (o.pass) o.detail = fmt("2 runs byte-identical (%g report bytes), %.2f s total", static_cast<double>(reports[0].size()), seconds);
  return o;
}

Outcome ac8_dedup_stats() {
  Outcome o;
  SimSpec spec;
  spec.seed = 8;
  spec.n_samples = 2000;
  spec.duplicate_rate = 0.2;
  spec.emit_hash_inputs = true;
  spec.category_mix = {4, 3, 1, 1, 1, 1};
  const SimOutput sim = simulate(spec);

  // Oracle: a sample is an injected duplicate iff its hash inputs equal an earlier sample's.
  std::vector<HashInput> seen;
  std::set<std::string> expected_dropped;
  for (const SampleManifest& m : sim.manifests) {
    const HashInput& h = *m.source_digest_inputs;
    bool repeat = false;
    for (const HashInput& prev : seen) repeat = repeat || prev == h;
    if (repeat) {
      expected_dropped.insert(m.sample_id);
    } else {
      seen.push_back(h);
    }
  }
  const DedupResult once = dedup(sim.manifests);
  std::set<std::string> dropped;
  for (const DroppedSample& d : once.dropped) dropped.insert(d.sample_id);
  if (expected_dropped.empty()) o.fail("simulation injected no duplicates");
  if (dropped != expected_dropped) o.fail(fmt("dropped %g, expected %g", static_cast<double>(dropped.size()),
                                              static_cast<double>(expected_dropped.size())));
  const DedupResult twice = dedup(once.kept);
  if (!twice.dropped.empty() || twice.kept != once.kept) o.fail("second dedup changed the set");

  const StatsReport report = stats(once.kept);
  double share_total = 0;
  for (const CategoryStats& c : report.categories) share_total += c.share_percent;
  if (std::abs(share_total - 100.0) > 1e-9) o.fail(fmt("shares sum to %.12f", share_total));

  SampleManifest big;
  big.sample_id = "big";
  big.framework = "f";
  big.task_category = TaskCategory::CV;
  big.operator_count = 512;
  big.graph_hash = "00";
  const StatsReport one = stats({big});
  if (one.categories[0].histogram.count(9) != 1 || one.categories[0].histogram.size() != 1) o.fail("512 ops not in bin 9");

  if (o.pass) {
    o.detail = fmt("%g injected duplicates removed, rerun no-op, shares sum %.9f", static_cast<double>(dropped.size()),
                   share_total);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  bool all = true;
  const auto report = [&](const char* id, const char* title, const Outcome& o, double seconds) {
    all = all && o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << id << " " << title << ": " << o.detail
              << fmt(" (%.2f s)", seconds) << std::endl;
  };
  const auto timed = [](const std::function<Outcome()>& fn, double& seconds) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = fn();
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return o;
  };

  double secs = 0;
  Outcome o = timed(ac1_fixtures, secs);
  if (secs >= 1) o.fail(fmt("took %.2f s (limit 1 s)", secs));
  report("AC1", "published score tables", o, secs);

  const EquivalenceResult eq = ac2_ac3_equivalence();
  report("AC2", "macro score equals GMRS for t <= 0", eq.b2, eq.b2_seconds);
  report("AC3", "gamma and ES equal per-sample forms for t > 0", eq.c24, eq.c24_seconds);

  o = timed(ac4_tolerance_tables, secs);
  if (secs >= 1) o.fail(fmt("took %.2f s (limit 1 s)", secs));
  report("AC4", "tolerance tables", o, secs);

  o = timed(ac5_monotonicity, secs);
  if (secs >= 30) o.fail(fmt("took %.1f s (limit 30 s)", secs));
  report("AC5", "monotonicity", o, secs);

  o = timed(ac6_degenerate, secs);
  report("AC6", "degenerate datasets", o, secs);

  o = timed([&] { return ac7_end_to_end(cli); }, secs);
  report("AC7", "end-to-end determinism", o, secs);

  o = timed(ac8_dedup_stats, secs);
  report("AC8", "dedup and stats", o, secs);

  std::cout << (all ? "all acceptance criteria passed" : "some acceptance criteria FAILED") << std::endl;
  return all ? 0 : 1;
}
