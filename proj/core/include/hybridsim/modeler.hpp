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

#ifndef HYBRIDSIM_MODELER_HPP_
#define HYBRIDSIM_MODELER_HPP_

#include <array>
#include <memory>
#include <vector>

#include "hybridsim/cost.hpp"
#include "hybridsim/event.hpp"
#include "hybridsim/plan.hpp"
#include "hybridsim/schedule.hpp"
#include "hybridsim/timeline.hpp"

namespace hybridsim {

// A layer shard's compute plus the tensor-parallel all-reduce that follows
// it. Every rank in the mp group runs the pair in lockstep.
struct ComposedEvent {
  std::shared_ptr<const Event> compute;
  std::shared_ptr<const Event> collective;  // null when nothing to merge
};

// What one stage task executes, per stage and direction. Backward lists
// visit the stage's layers in reverse.
struct LayerEventMap {
  // stages[pp_idx][0] = forward sequence, stages[pp_idx][1] = backward.
  std::vector<std::array<std::vector<ComposedEvent>, 2>> stages;
  // Boundary transfer out of stage s toward s+1 (forward) and out of s+1
  // toward s (backward); null when the payload is zero.
  std::vector<std::shared_ptr<const Event>> forward_p2p;   // size pp-1
  std::vector<std::shared_ptr<const Event>> backward_p2p;  // size pp-1
};

// Collapses the tensor-parallel dimension: one lane of composed events per
// stage, shared by the whole mp group of data-parallel replica 0.
LayerEventMap model_mp(const ValidatedPlan& plan);

struct ModelerOptions {
  // When false, a transfer occupies only the sender and the consumer may
  // start at the transfer's end. When true, the receiver also holds a slot
  // of the transfer's length, started no earlier than the send's start.
  bool charge_receiver = false;
};

// Lays out one data-parallel replica (ranks 0 .. pp*mp) by dispatching
// stage tasks in schedule order as their inputs arrive. Ties on ready time
// break toward the lower stage, then the lower micro-batch, then forward
// work. Throws ValidationError if the schedule deadlocks.
Timeline build_pipeline(const Schedule& schedule, const LayerEventMap& map,
                        const ValidatedPlan& plan, const CostResolver& costs,
                        const ModelerOptions& options = {});

// Replicates the replica timeline across dp and appends each device's
// gradient all-reduce at that device's own last end. dp == 1 appends
// nothing and keeps the replica timeline as the full result.
Timeline expand_dp(const Timeline& replica, const ValidatedPlan& plan,
                   const CostResolver& costs);

// model_mp + schedule from the strategy + build_pipeline + expand_dp.
Timeline simulate(const ValidatedPlan& plan, const CostTable& table,
                  CostPolicy policy, const ModelerOptions& options = {});

}  // namespace hybridsim

#endif  // HYBRIDSIM_MODELER_HPP_
