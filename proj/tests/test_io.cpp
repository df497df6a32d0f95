// Copyright 2026 The SRA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "sra/crm.hpp"
#include "sra/engine.hpp"
#include "sra/io.hpp"
#include "sra/rng.hpp"
#include "sra/types.hpp"

using namespace sra;

TEST_CASE("numbers print in their shortest faithful form") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.97) == "0.97");
  CHECK(format_number(-0.06) == "-0.06");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_number(1e-6) == "1e-06");
  CHECK(format_number(1e15) == "1e+15");
  CHECK(format_number(123456789.0) == "123456789");
}

TEST_CASE("every printed number parses back to the same double") {
  for (std::uint64_t k = 0; k < 4000; ++k) {
    double x = uniform01(mix(k, 0x666d74ULL));
    if (k % 3 == 1) x = (x - 0.5) * 1e9;
    if (k % 3 == 2) x *= 1e-7;
    const std::string printed = format_number(x);
    CHECK(std::strtod(printed.c_str(), nullptr) == x);
  }
}

TEST_CASE("graph files accept one-sided listings and optional fields") {
  const Instance in = parse_instance(R"({
    "seller": "S",
    "buyers": [
      {"id": "a", "valuation": 3, "neighbors": ["S", "b"]},
      {"id": "b", "valuation": 7},
      {"id": "c", "neighbors": ["S"]}
    ]
  })");
  CHECK(in.size() == 4);
  const int a = in.index_of("a");
  const int b = in.index_of("b");
  const int c = in.index_of("c");
  CHECK(in.valuations[b] == 7);
  CHECK(in.valuations[c] == 0);  // valuation defaults to zero
  // b never listed a, but a's mention symmetrizes.
  CHECK(in.neighbors[b] == std::vector<int>{a});
  CHECK(in.neighbors[a] == std::vector<int>{0, b});
}

TEST_CASE("malformed graph files fail loudly") {
  CHECK_THROWS_AS(parse_instance("not json"), InputError);
  CHECK_THROWS_AS(parse_instance("[]"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"buyers": []})"), InputError);
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S"})"), InputError);
  CHECK_THROWS_AS(
      parse_instance(R"({"seller": "S", "buyers": [], "extra": 1})"),
      InputError);
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S", "buyers": [
      {"id": "a", "value": 3}]})"),
                  InputError);  // typo "value" is rejected, not ignored
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S", "buyers": [
      {"id": "S", "valuation": 3}]})"),
                  InputError);
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S", "buyers": [
      {"id": "a", "valuation": "three"}]})"),
                  InputError);
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S", "buyers": [
      {"id": "a", "neighbors": "S"}]})"),
                  InputError);
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S", "buyers": [
      {"id": "a", "neighbors": ["ghost"]}]})"),
                  InputError);
  CHECK_THROWS_AS(parse_instance(R"({"seller": "S", "buyers": [
      {"id": "a", "valuation": -1, "neighbors": ["S"]}]})"),
                  InputError);
}

TEST_CASE("instances survive a serialize-parse round trip") {
  for (const Instance& in : {fixtures::instance_a(), fixtures::instance_b(),
                             fixtures::grid13(), fixtures::residual_ten()}) {
    const std::string text = serialize_instance(in);
    CHECK(text == serialize_instance(in));  // byte-stable
    const Instance back = parse_instance(text);
    CHECK(back.ids == in.ids);
    CHECK(back.valuations == in.valuations);
    CHECK(back.neighbors == in.neighbors);
  }
}

TEST_CASE("the shipped graph files equal the programmatic fixtures") {
  const std::string dir = SRA_GRAPHS_DIR;
  const struct {
    const char* file;
    Instance instance;
  } table[] = {
      {"/instance_a.json", fixtures::instance_a()},
      {"/instance_b.json", fixtures::instance_b()},
      {"/grid13.json", fixtures::grid13()},
  };
  for (const auto& row : table) {
    const Instance loaded = parse_instance_file(dir + row.file);
    CHECK(loaded.ids == row.instance.ids);
    CHECK(loaded.valuations == row.instance.valuations);
    CHECK(loaded.neighbors == row.instance.neighbors);
  }
}

TEST_CASE("the chain fixture's trace prints in the frozen format") {
  const Instance in = fixtures::instance_a();
  const SraOutcome out = run_sra(in, intended_profile(in), 0);
  CHECK(serialize_trace(in, out) ==
        "auction 1: host=S reserve=0 bids=[a=7, c=2] winner=a price=2\n"
        "auction 2: host=a reserve=2 bids=[b=7] winner=keep price=2\n"
        "final: winner=a revenue=2\n"
        "payments: a=2 b=0 c=0\n");
}

TEST_CASE("the diamond's expectation prints in the frozen format") {
  const Instance in = fixtures::instance_b();
  CrmOptions options;
  const OutcomeSummary s = crm_run(in, truthful_report(in), options);
  CHECK(serialize_summary(in, s, "crm", "uniform-trees") ==
        "mechanism: crm\n"
        "distribution: uniform-trees\n"
        "evaluation: exact over 4 trees\n"
        "revenue: 1.5\n"
        "seller_keeps: 0\n"
        "agent a: win_prob=0 payment=0 utility=0\n"
        "agent b: win_prob=0.5 payment=1 utility=4\n"
        "agent c: win_prob=0.5 payment=0.5 utility=0.5\n");
}

TEST_CASE("deterministic mechanisms print without a distribution line") {
  const Instance in = fixtures::single_buyer();
  OutcomeSummary s;
  s.win_prob.assign(in.size(), 0.0);
  s.payment.assign(in.size(), 0.0);
  s.utility.assign(in.size(), 0.0);
  s.win_prob[1] = 1;
  s.utility[1] = 5;
  s.tree_count = 0;
  CHECK(serialize_summary(in, s, "idm", "") ==
        "mechanism: idm\n"
        "evaluation: deterministic\n"
        "revenue: 0\n"
        "seller_keeps: 0\n"
        "agent a: win_prob=1 payment=0 utility=5\n");
}

TEST_CASE("property reports list verdict, rows and notes") {
  PropertyReport report;
  report.property = "demo";
  report.instances = 2;
  report.trials = 10;
  report.max_gap = 0.25;
  report.violations.push_back({"instance 1", "bid 5", 1.0, 1.25, 0.25});
  report.anomalies.push_back({"instance 0", "bid 2", 1.0, 1.0, 0.0});
  report.notes.push_back("a note");
  CHECK(serialize_report(report) ==
        "property: demo\n"
        "instances: 2\n"
        "trials: 10\n"
        "tolerance: 1e-09\n"
        "max_gap: 0.25\n"
        "violations: 1\n"
        "  violation: instance 1 | bid 5 | intended=1 deviant=1.25 gap=0.25\n"
        "anomalies: 1\n"
        "  anomaly: instance 0 | bid 2 | intended=1 deviant=1 gap=0\n"
        "note: a note\n"
        "result: FAIL\n");

  PropertyReport clean;
  clean.property = "demo";
  const std::string text = serialize_report(clean);
  CHECK(text.find("result: PASS\n") != std::string::npos);
  CHECK(text.find("violations: 0\n") != std::string::npos);
}

TEST_CASE("overlong anomaly lists are truncated with a count") {
  PropertyReport report;
  report.property = "demo";
  for (int k = 0; k < 60; ++k) {
    report.anomalies.push_back(
        {"instance " + std::to_string(k), "arm", 0, 0, 0});
  }
  const std::string text = serialize_report(report);
  CHECK(text.find("anomalies: 60\n") != std::string::npos);
  CHECK(text.find("... and 10 more\n") != std::string::npos);
  // All violations print; only anomalies are sampled.
  CHECK(text.find("result: PASS\n") != std::string::npos);
}

TEST_CASE("text files round trip and missing files are reported") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("sra_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string path = (dir / "probe.txt").string();
  write_text_file(path, "line one\nline two\n");
  CHECK(read_text_file(path) == "line one\nline two\n");
  CHECK_THROWS_AS(read_text_file((dir / "absent.txt").string()), InputError);
  fs::remove_all(dir);
}
