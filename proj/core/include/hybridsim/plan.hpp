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

#ifndef HYBRIDSIM_PLAN_HPP_
#define HYBRIDSIM_PLAN_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "hybridsim/types.hpp"

namespace hybridsim {

// Where one rank lives in the (dp, pp, mp) grid and on the physical cluster.
struct RankCoord {
  int rank = 0;
  int dp_idx = 0;
  int pp_idx = 0;
  int mp_idx = 0;
  int node_id = 0;
  int local_device_id = 0;
};

// Half-open [begin, end) range of layer indices owned by one stage.
struct StageRange {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
};

// Output of validate_plan: the specs plus every derived placement fact the
// rest of the pipeline needs.
struct ValidatedPlan {
  ModelSpec model;
  ClusterSpec cluster;
  StrategyConfig strategy;

  std::int64_t num_micro_batches = 0;  // global batch / (dp * micro batch)
  std::vector<RankCoord> ranks;        // indexed by rank id
  std::vector<StageRange> stages;      // indexed by pp_idx

  int rank_of(int dp_idx, int pp_idx, int mp_idx) const;
  const RankCoord& coord(int rank) const;
  Bytes stage_param_bytes(int pp_idx) const;
};

// Flattens (dp_idx, pp_idx, mp_idx) to rank ids in row-major order with
// mp fastest, then fills nodes in rank order.
std::vector<RankCoord> rank_placement(const StrategyConfig& strategy,
                                      const ClusterSpec& cluster);

// Contiguous stage partition: every stage gets num_layers / pp layers and
// the first num_layers % pp stages get one extra.
std::vector<StageRange> partition_stages(int num_layers, int pp);

// Cross-checks model, cluster, and strategy and derives placement. Throws
// ValidationError when the combination cannot run.
ValidatedPlan validate_plan(const ModelSpec& model, const ClusterSpec& cluster,
                            const StrategyConfig& strategy);

}  // namespace hybridsim

#endif  // HYBRIDSIM_PLAN_HPP_
