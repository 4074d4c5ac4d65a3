// Copyright 2026 The tcscore Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "support/generators.hpp"
#include "tcscore/error.hpp"
#include "tcscore/records.hpp"

using namespace tcscore;

namespace {

const std::string kHeader = R"({"grid":[-10,-9,-8,-7,-6,-5,-4,-3,-2,-1,0],"p":0.1,"b":0.1,"producer":"test"})";

std::string manifest_line(const std::string& id) {
  return R"({"sample_id":")" + id +
         R"(","framework":"torch","task_category":"CV","operator_count":512,"dtypes":["float32"],"graph_hash":"ab12"})";
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

SampleManifest random_manifest(std::mt19937_64& rng, std::size_t i) {
  std::uniform_int_distribution<int> small(0, 5);
  std::uniform_int_distribution<std::uint64_t> ops(1, 1u << 14);
  SampleManifest m;
  m.sample_id = "sample-" + std::to_string(i) + (small(rng) == 0 ? "-\xce\xbb" : "");
  m.framework = small(rng) % 2 ? "paddle" : "torch";
  m.task_category = static_cast<TaskCategory>(small(rng));
  m.operator_count = ops(rng);
  if (small(rng) > 2) m.parameter_count = ops(rng) * 1000;
  for (int k = 0; k < small(rng); ++k) m.dtypes.insert(all_scalar_kinds()[static_cast<std::size_t>(small(rng) * 2)]);
  m.graph_hash = "0123456789abcdef";
  if (small(rng) == 0) {
    HashInput h;
    h.normalized_source = "x = a + b \"quoted\" \\ tab\t";
    h.topology = {{"add", {0, 1}}, {"relu", {2}}};
    m.source_digest_inputs = h;
  }
  return m;
}

}  // namespace

TEST_CASE("load_manifests") {
  CHECK(read_manifests("").empty());
  const auto three = read_manifests(manifest_line("a") + "\n" + manifest_line("b") + "\n\n" + manifest_line("c") + "\n");
  REQUIRE(three.size() == 3);
  CHECK(three[0].sample_id == "a");
  CHECK(three[2].sample_id == "c");
  CHECK(three[0].task_category == TaskCategory::CV);
  CHECK(three[0].operator_count == 512);
  CHECK_FALSE(three[0].parameter_count.has_value());

  const std::string dup = error_of([] { read_manifests(manifest_line("a") + "\n" + manifest_line("x") + "\n" + manifest_line("a"), "m.jsonl"); });
  CHECK(dup.find("m.jsonl:3") != std::string::npos);
  CHECK(dup.find("line 1") != std::string::npos);
  CHECK(dup.find("duplicate sample_id 'a'") != std::string::npos);

  const std::string bad = error_of([] { read_manifests(manifest_line("a") + "\n{not json", "m.jsonl"); });
  CHECK(bad.find("m.jsonl:2") != std::string::npos);
}

TEST_CASE("manifest schema violations") {
  CHECK_THROWS_AS(parse_manifest(R"({"sample_id":"a","framework":"f","task_category":"Robotics","operator_count":1,"dtypes":[],"graph_hash":"ab"})"), DataError);
  CHECK_THROWS_AS(parse_manifest(R"({"sample_id":"a","framework":"f","task_category":"CV","operator_count":0,"dtypes":[],"graph_hash":"ab"})"), DataError);
  CHECK_THROWS_AS(parse_manifest(R"({"sample_id":"a","framework":"f","task_category":"CV","operator_count":-3,"dtypes":[],"graph_hash":"ab"})"), DataError);
  CHECK_THROWS_AS(parse_manifest(R"({"sample_id":"a","framework":"f","task_category":"CV","operator_count":1,"dtypes":[],"graph_hash":"XYZ"})"), DataError);
  CHECK_THROWS_AS(parse_manifest(R"({"sample_id":"a","framework":"f","task_category":"CV","operator_count":1,"dtypes":[],"graph_hash":"ab","extra":1})"), DataError);
  CHECK_THROWS_AS(parse_manifest(R"({"framework":"f","task_category":"CV","operator_count":1,"dtypes":[],"graph_hash":"ab"})"), DataError);
  // Unknown dtype names are accepted as `other`.
  const SampleManifest m = parse_manifest(R"({"sample_id":"a","framework":"f","task_category":"Other","operator_count":1,"dtypes":["int64","float32"],"graph_hash":"ab"})");
  CHECK(m.dtypes == std::set<ScalarKind>{ScalarKind::float32, ScalarKind::other});
}

TEST_CASE("load_records") {
  const std::string completed =
      R"({"sample_id":"a","eager_time_s":0.02,"compiled_time_s":0.01,"outcome":{"kind":"completed","comparisons":[{"tensor_index":0,"kind":"float32","min_passing_t":-5},{"tensor_index":1,"kind":"bfloat16","min_passing_t":"never"}]},"warmup_iters":3,"timed_iters":10})";
  const RecordSet set = read_records(kHeader + "\n" + completed + "\n");
  CHECK(set.header.producer == "test");
  CHECK(set.header.grid.size() == 11);
  REQUIRE(set.records.size() == 1);
  const auto& comps = std::get<Completed>(set.records[0].outcome).comparisons;
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].min_passing_t == -5.0);
  CHECK_FALSE(comps[1].min_passing_t.has_value());
  CHECK(comps[1].kind == ScalarKind::bfloat16);
  CHECK(set.records[0].warmup_iters == 3);

  SUBCASE("empty file is an empty set") { CHECK(read_records("").records.empty()); }

  SUBCASE("eager time must be positive") {
    const std::string zero =
        R"({"sample_id":"a","eager_time_s":0,"outcome":{"kind":"compile_failure","message":"x"},"warmup_iters":0,"timed_iters":1})";
    const std::string msg = error_of([&] { read_records(kHeader + "\n" + zero, "r.jsonl"); });
    CHECK(msg.find("r.jsonl:2") != std::string::npos);
    CHECK(msg.find("eager_time_s") != std::string::npos);
  }

  SUBCASE("compiled time only with a completed outcome") {
    const std::string crash =
        R"({"sample_id":"a","eager_time_s":1,"compiled_time_s":0.5,"outcome":{"kind":"runtime_crash","message":"x"},"warmup_iters":0,"timed_iters":1})";
    CHECK_THROWS_AS(read_records(kHeader + "\n" + crash), DataError);
    const std::string missing =
        R"({"sample_id":"a","eager_time_s":1,"outcome":{"kind":"completed","comparisons":[{"tensor_index":0,"kind":"float32","min_passing_t":0}]},"warmup_iters":0,"timed_iters":1})";
    CHECK_THROWS_AS(read_records(kHeader + "\n" + missing), DataError);
  }

  SUBCASE("completed needs a comparison") {
    const std::string none =
        R"({"sample_id":"a","eager_time_s":1,"compiled_time_s":1,"outcome":{"kind":"completed","comparisons":[]},"warmup_iters":0,"timed_iters":1})";
    CHECK_THROWS_AS(read_records(kHeader + "\n" + none), DataError);
  }

  SUBCASE("min_passing_t must be on the header grid") {
    const std::string off =
        R"({"sample_id":"a","eager_time_s":1,"compiled_time_s":1,"outcome":{"kind":"completed","comparisons":[{"tensor_index":0,"kind":"float32","min_passing_t":-4.5}]},"warmup_iters":0,"timed_iters":1})";
    CHECK_THROWS_AS(read_records(kHeader + "\n" + off), DataError);
  }

  SUBCASE("header is validated") {
    CHECK_THROWS_AS(read_records(R"({"grid":[0,-1],"p":0.1,"b":0.1,"producer":"x"})"), DataError);
    CHECK_THROWS_AS(read_records(R"({"grid":[-1,1],"p":0.1,"b":0.1,"producer":"x"})"), DataError);
    CHECK_THROWS_AS(read_records(R"({"grid":[-1,0],"p":1.5,"b":0.1,"producer":"x"})"), DataError);
    CHECK_THROWS_AS(read_records(R"({"grid":[],"p":0.1,"b":0.1,"producer":"x"})"), DataError);
  }

  SUBCASE("duplicate record ids") {
    const std::string crash =
        R"({"sample_id":"a","eager_time_s":1,"outcome":{"kind":"runtime_crash","message":"x"},"warmup_iters":0,"timed_iters":1})";
    const std::string msg = error_of([&] { read_records(kHeader + "\n" + crash + "\n" + crash, "r.jsonl"); });
    CHECK(msg.find("r.jsonl:3") != std::string::npos);
    CHECK(msg.find("line 2") != std::string::npos);
  }
}

TEST_CASE("round trip keeps sentinels and unicode") {
  RunRecord never;
  never.sample_id = "n";
  never.eager_time_s = 0.3;
  never.compiled_time_s = 0.1;
  never.outcome = Completed{{{0, ScalarKind::float16, std::nullopt}, {1, ScalarKind::complex64, -3.0}}};
  CHECK(roundtrip(never) == never);

  RunRecord failure;
  failure.sample_id = "u";
  failure.eager_time_s = 1.0 / 3.0;
  failure.outcome = CompileFailure{"\xe7\xbc\x96\xe8\xaf\x91\xe5\xa4\xb1\xe8\xb4\xa5: \"quoted\"\n\ttab \xf0\x9f\x94\xa5"};
  CHECK(roundtrip(failure) == failure);
}

TEST_CASE("round trip property over generated values") {
  std::mt19937_64 rng(5);
  const std::vector<double> grid = integer_grid(-10, 0);
  for (std::size_t i = 0; i < 300; ++i) {
    const SampleManifest m = random_manifest(rng, i);
    CHECK(roundtrip(m) == m);
  }
  for (const RunRecord& r : testing::random_records(rng, 300, grid)) CHECK(roundtrip(r) == r);

  RecordSet set;
  set.header = {grid, 0.25, 0.05, "prop"};
  set.records = testing::random_records(rng, 50, grid);
  const RecordSet back = read_records(write_records(set));
  CHECK(back.header == set.header);
  CHECK(back.records == set.records);
}

TEST_CASE("files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "tcscore_records_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "m.jsonl") << manifest_line("a") << "\n" << manifest_line("b") << "\n";
  }
  CHECK(load_manifests(dir / "m.jsonl").size() == 2);
  CHECK_THROWS_AS(load_manifests(dir / "missing.jsonl"), DataError);
  CHECK_THROWS_AS(load_records(dir / "missing.jsonl"), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("join check") {
  const auto manifests = read_manifests(manifest_line("a") + "\n" + manifest_line("b"));
  RunRecord r;
  r.sample_id = "a";
  r.outcome = RuntimeCrash{"x"};
  CHECK_THROWS_WITH_AS(check_join(manifests, {r}), "manifest 'b' has no run record", DataError);
  RunRecord extra = r;
  extra.sample_id = "c";
  RunRecord rb = r;
  rb.sample_id = "b";
  CHECK_THROWS_WITH_AS(check_join(manifests, {r, rb, extra}), "record 'c' has no manifest", DataError);
  CHECK_NOTHROW(check_join(manifests, {rb, r}));
}
