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

#include <benchmark/benchmark.h>

#include "sra/crm.hpp"
#include "sra/engine.hpp"
#include "sra/graph.hpp"
#include "sra/harness.hpp"
#include "sra/io.hpp"

namespace {

sra::Instance grid13() {
  return sra::parse_instance_file(std::string(SRA_GRAPHS_DIR) +
                                  "/grid13.json");
}

void BM_RunSra(benchmark::State& state) {
  const sra::Instance instance = grid13();
  const sra::StrategyProfile intended = sra::intended_profile(instance);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sra::run_sra(instance, intended, seed++));
  }
}
BENCHMARK(BM_RunSra);

void BM_EnumerateTrees(benchmark::State& state) {
  const sra::Instance instance =
      sra::random_instance(8, static_cast<int>(state.range(0)), 7);
  const sra::ValidSubgraph g =
      sra::build_valid_subgraph(instance, sra::truthful_report(instance));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sra::enumerate_spanning_trees(g));
  }
}
BENCHMARK(BM_EnumerateTrees)->Arg(2)->Arg(4)->Arg(8);

void BM_CrmExactUniform(benchmark::State& state) {
  const sra::Instance instance = grid13();
  const sra::Report reported = sra::truthful_report(instance);
  sra::CrmOptions options;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sra::crm_run(instance, reported, options));
  }
}
BENCHMARK(BM_CrmExactUniform);

void BM_ClosedFormTree(benchmark::State& state) {
  const sra::Instance instance = grid13();
  const sra::Report reported = sra::truthful_report(instance);
  const sra::DiffusionGraph dg =
      sra::run_stage1_diffusion(instance, reported);
  const sra::ValidSubgraph g = sra::build_valid_subgraph(instance, reported);
  const auto trees = sra::enumerate_spanning_trees(g);
  const sra::TieBreak tie;
  for (auto _ : state) {
    for (const sra::SpanningTree& tree : trees) {
      benchmark::DoNotOptimize(
          sra::closed_form_tree_outcome(instance, reported, dg, tree, tie));
    }
  }
}
BENCHMARK(BM_ClosedFormTree);

}  // namespace

BENCHMARK_MAIN();
