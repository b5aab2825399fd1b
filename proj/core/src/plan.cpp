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

#include "hybridsim/plan.hpp"

#include <string>

#include "hybridsim/error.hpp"

namespace hybridsim {

int ValidatedPlan::rank_of(int dp_idx, int pp_idx, int mp_idx) const {
  return (dp_idx * strategy.pp + pp_idx) * strategy.mp + mp_idx;
}

const RankCoord& ValidatedPlan::coord(int rank) const {
  if (rank < 0 || rank >= static_cast<int>(ranks.size())) {
    throw InternalError("rank " + std::to_string(rank) + " out of range");
  }
  return ranks[rank];
}

Bytes ValidatedPlan::stage_param_bytes(int pp_idx) const {
  const StageRange& range = stages.at(pp_idx);
  Bytes total = 0;
  for (int l = range.begin; l < range.end; ++l) {
    total += model.layers[l].param_bytes;
  }
  return total;
}

std::vector<RankCoord> rank_placement(const StrategyConfig& strategy,
                                      const ClusterSpec& cluster) {
  const int world = strategy.dp * strategy.pp * strategy.mp;
  std::vector<RankCoord> out;
  out.reserve(world);
  for (int d = 0; d < strategy.dp; ++d) {
    for (int p = 0; p < strategy.pp; ++p) {
      for (int m = 0; m < strategy.mp; ++m) {
        RankCoord c;
        c.rank = (d * strategy.pp + p) * strategy.mp + m;
        c.dp_idx = d;
        c.pp_idx = p;
        c.mp_idx = m;
        c.node_id = c.rank / cluster.devices_per_node;
        c.local_device_id = c.rank % cluster.devices_per_node;
        out.push_back(c);
      }
    }
  }
  return out;
}

std::vector<StageRange> partition_stages(int num_layers, int pp) {
  if (pp <= 0) throw ValidationError("strategy.pp: must be positive");
  if (num_layers < pp) {
    throw ValidationError("strategy.pp: " + std::to_string(pp) +
                          " stages need at least that many layers, model has " +
                          std::to_string(num_layers));
  }
  const int base = num_layers / pp;
  const int extra = num_layers % pp;
  std::vector<StageRange> out;
  out.reserve(pp);
  int cursor = 0;
  for (int s = 0; s < pp; ++s) {
    const int size = base + (s < extra ? 1 : 0);
    out.push_back(StageRange{cursor, cursor + size});
    cursor += size;
  }
  return out;
}

ValidatedPlan validate_plan(const ModelSpec& model, const ClusterSpec& cluster,
                            const StrategyConfig& strategy) {
  check_model(model);
  check_cluster(cluster);
  check_strategy(strategy);

  const std::int64_t world =
      static_cast<std::int64_t>(strategy.dp) * strategy.pp * strategy.mp;
  if (world != cluster.total_devices()) {
    throw ValidationError(
        "strategy " + format_strategy(strategy) + " needs " +
        std::to_string(world) + " devices but the cluster has " +
        std::to_string(cluster.total_devices()));
  }

  const std::int64_t denom =
      static_cast<std::int64_t>(strategy.dp) * strategy.micro_batch_size;
  if (model.global_batch_size % denom != 0) {
    throw ValidationError(
        "model.global_batch_size: " + std::to_string(model.global_batch_size) +
        " is not divisible by dp * micro_batch_size = " +
        std::to_string(denom));
  }

  if (strategy.mp > 1) {
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
      const LayerSpec& layer = model.layers[i];
      if (!layer.mp_splittable) {
        throw ValidationError("model.layers[" + std::to_string(i) +
                              "] (\"" + layer.name +
                              "\"): not splittable, cannot run with mp = " +
                              std::to_string(strategy.mp));
      }
      if (layer.input_shape.back() % strategy.mp != 0) {
        throw ValidationError(
            "model.layers[" + std::to_string(i) + "] (\"" + layer.name +
            "\"): last input dimension " +
            std::to_string(layer.input_shape.back()) +
            " is not divisible by mp = " + std::to_string(strategy.mp));
      }
    }
  }

  ValidatedPlan plan;
  plan.model = model;
  plan.cluster = cluster;
  plan.strategy = strategy;
  plan.num_micro_batches = model.global_batch_size / denom;
  plan.ranks = rank_placement(strategy, cluster);
  plan.stages = partition_stages(static_cast<int>(model.layers.size()),
                                 strategy.pp);
  return plan;
}

}  // namespace hybridsim
