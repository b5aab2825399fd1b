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

#ifndef HYBRIDSIM_EVENT_GEN_HPP_
#define HYBRIDSIM_EVENT_GEN_HPP_

#include <optional>

#include "hybridsim/event.hpp"
#include "hybridsim/plan.hpp"

namespace hybridsim {

// Builders for the event classes a plan produces. They are used both by
// generate_events (which also counts instances) and by the modeler (which
// needs representative events for the replica it lays out).

// Compute work of one layer shard for one micro-batch.
Event make_compute_event(const ValidatedPlan& plan, int layer_idx,
                         Phase phase);

// Tensor-parallel all-reduce that merges the shard outputs of one layer.
// Empty when mp == 1 or the layer produces no activation bytes.
std::optional<Event> make_mp_allreduce_event(const ValidatedPlan& plan,
                                             int layer_idx, Phase phase,
                                             int dp_idx);

// Activation (forward) or activation-gradient (backward) transfer across
// the stage boundary between pp_idx and pp_idx + 1, for the pair at mp_idx.
// Empty when the boundary payload is zero.
std::optional<Event> make_boundary_p2p_event(const ValidatedPlan& plan,
                                             int pp_idx, Phase phase,
                                             int dp_idx, int mp_idx);

// Same transfer, priced for the whole mp group at once: the locality is the
// worst case over the group's sender/receiver pairs, so one timeline lane
// per stage covers ranks that may straddle nodes.
std::optional<Event> make_boundary_p2p_group_event(const ValidatedPlan& plan,
                                                   int pp_idx, Phase phase,
                                                   int dp_idx);

// Data-parallel gradient all-reduce for the stage shard held at (pp_idx,
// mp_idx), spanning the dp replicas. Empty when dp == 1 or the stage holds
// no parameters.
std::optional<Event> make_grad_allreduce_event(const ValidatedPlan& plan,
                                               int pp_idx, int mp_idx);

// Enumerates every event class of one training batch under the plan, with
// exact instance counts. Deterministic for a given plan.
EventSet generate_events(const ValidatedPlan& plan);

}  // namespace hybridsim

#endif  // HYBRIDSIM_EVENT_GEN_HPP_
