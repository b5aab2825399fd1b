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

#include "fixtures.hpp"

#include <string>

#include "hybridsim/event_gen.hpp"
#include "hybridsim/modeler.hpp"

namespace hybridsim::testing {

ModelSpec uniform_model(int layers, std::int64_t global_batch_size,
                        const UniformModelOptions& options) {
  ModelSpec model;
  model.name = "uniform" + std::to_string(layers);
  model.global_batch_size = global_batch_size;
  model.layers.reserve(layers);
  for (int i = 0; i < layers; ++i) {
    LayerSpec layer;
    layer.name = "layer" + std::to_string(i);
    layer.op_kind = options.op_kind;
    layer.param_bytes = options.param_bytes;
    layer.fwd_flops = options.fwd_flops;
    layer.bwd_flops = options.bwd_flops;
    layer.output_activation_bytes = options.activation_bytes;
    layer.input_shape = options.input_shape;
    layer.mp_splittable = options.mp_splittable;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

ModelSpec compute_only_model(int layers, std::int64_t global_batch_size) {
  UniformModelOptions options;
  options.param_bytes = 0;
  options.activation_bytes = 0;
  options.mp_splittable = false;
  return uniform_model(layers, global_batch_size, options);
}

ClusterSpec flat_cluster(int num_nodes, int devices_per_node) {
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

StrategyConfig make_strategy(int mp, int pp, int dp,
                             PipelineAlgorithm algorithm,
                             std::int64_t micro_batch_size) {
  StrategyConfig strategy;
  strategy.mp = mp;
  strategy.pp = pp;
  strategy.dp = dp;
  strategy.pipeline_algorithm = algorithm;
  strategy.micro_batch_size = micro_batch_size;
  return strategy;
}

StrategyConfig make_strategy(int mp, int pp, int dp,
                             std::int64_t micro_batch_size) {
  return make_strategy(mp, pp, dp,
                       pp == 1 ? PipelineAlgorithm::kSequential
                               : PipelineAlgorithm::kDapple,
                       micro_batch_size);
}

CostTable table_for_plan(const ValidatedPlan& plan,
                         const std::function<Seconds(const EventKey&)>& rule) {
  CostTable table;
  const auto insert = [&](const EventKey& key) {
    if (table.find(key) != nullptr) return;
    CostEntry entry;
    entry.elapsed = rule(key);
    entry.provenance = Provenance::kMeasured;
    table.insert(key, entry);
  };
  const EventSet events = generate_events(plan);
  for (const auto& [canonical, event] : events.events()) {
    insert(event.key);
  }
  const LayerEventMap map = model_mp(plan);
  for (const auto& transfer : map.forward_p2p) {
    if (transfer) insert(transfer->key);
  }
  for (const auto& transfer : map.backward_p2p) {
    if (transfer) insert(transfer->key);
  }
  return table;
}

Seconds hashed_cost(const EventKey& key, std::uint64_t salt) {
  std::uint64_t hash = 14695981039346656037ULL ^ salt;
  for (const char c : key.canonical()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  const std::uint64_t micros = 1 + hash % 10000;
  return static_cast<Seconds>(micros) / kMicrosPerSecond;
}

CostTable hashed_table(const ValidatedPlan& plan, std::uint64_t salt) {
  return table_for_plan(
      plan, [salt](const EventKey& key) { return hashed_cost(key, salt); });
}

CostTable phase_table(const ValidatedPlan& plan, Seconds t_f, Seconds t_b,
                      Seconds other) {
  return table_for_plan(plan, [=](const EventKey& key) {
    if (key.kind == EventKind::kCompute) {
      return key.phase == Phase::kForward ? t_f : t_b;
    }
    return other;
  });
}

}  // namespace hybridsim::testing
