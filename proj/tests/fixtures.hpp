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

#ifndef HYBRIDSIM_TESTS_FIXTURES_HPP_
#define HYBRIDSIM_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "hybridsim/cost.hpp"
#include "hybridsim/event.hpp"
#include "hybridsim/plan.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim::testing {

struct UniformModelOptions {
  std::string op_kind = "block";
  double fwd_flops = 2.0e9;
  double bwd_flops = 4.0e9;
  std::int64_t param_bytes = 1 << 20;
  std::int64_t activation_bytes = 1 << 20;
  std::vector<std::int64_t> input_shape = {8, 64};
  bool mp_splittable = true;
};

// A model of `layers` identical layers named layer0..layerN-1.
ModelSpec uniform_model(int layers, std::int64_t global_batch_size,
                        const UniformModelOptions& options = {});

// Identical layers with zero parameter and activation bytes, so no
// communication events exist at any mp/dp/pp setting.
ModelSpec compute_only_model(int layers, std::int64_t global_batch_size);

ClusterSpec flat_cluster(int num_nodes, int devices_per_node);

StrategyConfig make_strategy(int mp, int pp, int dp,
                             PipelineAlgorithm algorithm,
                             std::int64_t micro_batch_size = 1);

// Strategy with the default algorithm for its pp (Sequential iff pp == 1,
// Dapple otherwise).
StrategyConfig make_strategy(int mp, int pp, int dp,
                             std::int64_t micro_batch_size = 1);

// Builds a cost table covering every event class the plan can resolve:
// the deduplicated event set plus the stage-boundary transfer classes the
// pipeline constructor looks up. `rule` maps each class to its elapsed time.
CostTable table_for_plan(const ValidatedPlan& plan,
                         const std::function<Seconds(const EventKey&)>& rule);

// Deterministic pseudo-random integer-microsecond cost in [1, 10000] us,
// derived from the canonical key and a salt.
Seconds hashed_cost(const EventKey& key, std::uint64_t salt);

CostTable hashed_table(const ValidatedPlan& plan, std::uint64_t salt);

// Forward compute classes cost `t_f`, backward compute classes `t_b`,
// everything else `other`.
CostTable phase_table(const ValidatedPlan& plan, Seconds t_f, Seconds t_b,
                      Seconds other = 1.0e-3);

}  // namespace hybridsim::testing

#endif  // HYBRIDSIM_TESTS_FIXTURES_HPP_
