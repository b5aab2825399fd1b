// Copyright 2026 The HybridSim Authors
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

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "hybridsim/cost.hpp"
#include "hybridsim/event_gen.hpp"
#include "hybridsim/modeler.hpp"
#include "hybridsim/plan.hpp"
#include "hybridsim/search.hpp"

namespace hybridsim {
namespace {

ModelSpec bench_model(int layers, std::int64_t global_batch_size) {
  ModelSpec model;
  model.name = "bench";
  model.global_batch_size = global_batch_size;
  model.layers.reserve(layers);
  for (int i = 0; i < layers; ++i) {
    LayerSpec layer;
    layer.name = "layer" + std::to_string(i);
    layer.op_kind = "block";
    layer.param_bytes = 1 << 20;
    layer.fwd_flops = 2.0e9;
    layer.bwd_flops = 4.0e9;
    layer.output_activation_bytes = 1 << 20;
    layer.input_shape = {8, 64};
    layer.mp_splittable = true;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

ClusterSpec bench_cluster(int num_nodes, int devices_per_node) {
  ClusterSpec cluster;
  cluster.num_nodes = num_nodes;
  cluster.devices_per_node = devices_per_node;
  cluster.intra_node_bandwidth = 50.0e9;
  cluster.inter_node_bandwidth = 10.0e9;
  cluster.intra_node_latency = 5.0e-6;
  cluster.inter_node_latency = 10.0e-6;
  cluster.device_peak_flops = 100.0e12;
  cluster.device_efficiency = 0.5;
  return cluster;
}

StrategyConfig bench_strategy(int mp, int pp, int dp) {
  StrategyConfig strategy;
  strategy.mp = mp;
  strategy.pp = pp;
  strategy.dp = dp;
  strategy.pipeline_algorithm = pp == 1 ? PipelineAlgorithm::kSequential
                                        : PipelineAlgorithm::kDapple;
  strategy.micro_batch_size = 1;
  return strategy;
}

// Scaling of the timeline constructor with pipeline depth at a fixed
// per-stage load: pp stages, four micro-batches per device.
void BM_SimulatePipelineDepth(benchmark::State& state) {
  const int pp = static_cast<int>(state.range(0));
  const ModelSpec model = bench_model(2 * pp, 4);
  const ClusterSpec cluster = bench_cluster(pp, 1);
  const ValidatedPlan plan =
      validate_plan(model, cluster, bench_strategy(1, pp, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate(plan, CostTable{}, CostPolicy::kAnalyticalFallback));
  }
  state.SetComplexityN(pp);
}
BENCHMARK(BM_SimulatePipelineDepth)->RangeMultiplier(2)->Range(2, 32)
    ->Complexity();

// Scaling with the number of micro-batches at a fixed four-stage pipeline.
void BM_SimulateMicroBatches(benchmark::State& state) {
  const std::int64_t micro_batches = state.range(0);
  const ModelSpec model = bench_model(8, micro_batches);
  const ClusterSpec cluster = bench_cluster(4, 1);
  const ValidatedPlan plan =
      validate_plan(model, cluster, bench_strategy(1, 4, 1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate(plan, CostTable{}, CostPolicy::kAnalyticalFallback));
  }
  state.SetComplexityN(micro_batches);
}
BENCHMARK(BM_SimulateMicroBatches)->RangeMultiplier(2)->Range(4, 64)
    ->Complexity();

// Full three-axis plan on 16 devices, the shape the search evaluates.
void BM_SimulateHybridPlan(benchmark::State& state) {
  const ModelSpec model = bench_model(16, 16);
  const ClusterSpec cluster = bench_cluster(4, 4);
  const ValidatedPlan plan =
      validate_plan(model, cluster, bench_strategy(2, 2, 4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate(plan, CostTable{}, CostPolicy::kAnalyticalFallback));
  }
}
BENCHMARK(BM_SimulateHybridPlan);

// Event class enumeration with instance counting, per model size.
void BM_GenerateEvents(benchmark::State& state) {
  const int layers = static_cast<int>(state.range(0));
  const ModelSpec model = bench_model(layers, 16);
  const ClusterSpec cluster = bench_cluster(4, 4);
  const ValidatedPlan plan =
      validate_plan(model, cluster, bench_strategy(2, 2, 4));
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_events(plan));
  }
  state.SetComplexityN(layers);
}
BENCHMARK(BM_GenerateEvents)->RangeMultiplier(2)->Range(8, 128)
    ->Complexity();

// The whole grid search over 16 devices with analytical costs.
void BM_GridSearch16(benchmark::State& state) {
  const ModelSpec model = bench_model(16, 16);
  const ClusterSpec cluster = bench_cluster(4, 4);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_search(model, cluster, CostTable{},
                                         CostPolicy::kAnalyticalFallback,
                                         SearchSpace{}, threads));
  }
}
BENCHMARK(BM_GridSearch16)->Arg(1)->Arg(4);

}  // namespace
}  // namespace hybridsim

BENCHMARK_MAIN();
