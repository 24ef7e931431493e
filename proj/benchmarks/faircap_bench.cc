// Copyright 2026 The FairCap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "faircap/causal.h"
#include "faircap/evaluation.h"
#include "faircap/grouping_miner.h"
#include "faircap/intervention_miner.h"
#include "faircap/pipeline.h"
#include "faircap/selector.h"

namespace faircap {
namespace {

SyntheticWorld World(size_t rows, size_t imm, size_t mut) {
  SyntheticSpec spec;
  spec.n_rows = rows;
  spec.n_immutable = imm;
  spec.n_mutable = mut;
  spec.seed = 17;
  spec.effects = {{0, 1, 0.5, 3.0}};
  return GenerateSynthetic(spec);
}

void BM_CateEstimate(benchmark::State& state) {
  const SyntheticWorld w = World(static_cast<size_t>(state.range(0)), 5, 2);
  std::vector<uint32_t> rows(w.dataset.num_rows());
  std::iota(rows.begin(), rows.end(), 0u);
  const Pattern treat({Predicate{"M0", Op::kEq, 1.0}});
  const auto adjust = AdjustmentSet(w.dag, {"M0"}, "O");
  for (auto _ : state) {
    SubgroupEstimator estimator(w.dataset, rows);
    benchmark::DoNotOptimize(estimator.Estimate(treat, adjust));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CateEstimate)->Arg(1000)->Arg(10000)->Arg(100000);

// Same subgroup, many interventions: the confounder factorization is reused.
void BM_CateReuse(benchmark::State& state) {
  const SyntheticWorld w = World(10000, 5, 3);
  std::vector<uint32_t> rows(w.dataset.num_rows());
  std::iota(rows.begin(), rows.end(), 0u);
  SubgroupEstimator estimator(w.dataset, rows);
  const auto adjust = AdjustmentSet(w.dag, {"M0"}, "O");
  double level = 0;
  for (auto _ : state) {
    const Pattern treat({Predicate{"M0", Op::kEq, level}});
    benchmark::DoNotOptimize(estimator.Estimate(treat, adjust));
    level = level == 2 ? 0 : level + 1;
  }
}
BENCHMARK(BM_CateReuse);

void BM_Apriori(benchmark::State& state) {
  const SyntheticWorld w = World(10000, static_cast<size_t>(state.range(0)), 2);
  const auto relevant = RelevantImmutableAttributes(w.dataset, w.dag);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MineGroupingPatterns(w.dataset, relevant, 0.05, 3));
  }
}
BENCHMARK(BM_Apriori)->Arg(5)->Arg(10)->Arg(15);

void BM_Greedy(benchmark::State& state) {
  const SyntheticWorld w = World(5000, 10, 5);
  const MinedSpace space = MineSpace(w.dataset, w.dag, MiningOptions{});
  SelectionConfig config;
  config.fairness = FairnessMode::SpGroup(0.5);
  config.coverage = {CoverageVariant::kGroup, 0.7, 0.7};
  const auto candidates = BuildCandidates(space, w.dataset, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GreedySelect(candidates, w.dataset, config));
  }
  state.counters["candidates"] = static_cast<double>(candidates.size());
}
BENCHMARK(BM_Greedy)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const SyntheticWorld w = World(10000, 10, 5);
  MiningOptions mining;
  mining.jobs = static_cast<size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunPipeline(w.dataset, w.dag, mining, SelectionConfig{}));
  }
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace faircap

BENCHMARK_MAIN();
