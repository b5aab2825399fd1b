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

#include "hybridsim/event_gen.hpp"

#include <array>
#include <cstdint>
#include <vector>

#include "hybridsim/error.hpp"

namespace hybridsim {
namespace {

// Payload of the boundary transfer out of stage `pp_idx` for one
// micro-batch: the activation bytes of the stage's last layer, or of its
// first layer for the gradient flowing backward, which are equal here
// because both are that boundary tensor.
Bytes boundary_payload(const ValidatedPlan& plan, int pp_idx) {
  const StageRange& range = plan.stages.at(pp_idx);
  const LayerSpec& last = plan.model.layers[range.end - 1];
  return last.output_activation_bytes *
         static_cast<Bytes>(plan.strategy.micro_batch_size);
}

std::vector<int> mp_group_ranks(const ValidatedPlan& plan, int dp_idx,
                                int pp_idx) {
  std::vector<int> ranks;
  ranks.reserve(plan.strategy.mp);
  for (int j = 0; j < plan.strategy.mp; ++j) {
    ranks.push_back(plan.rank_of(dp_idx, pp_idx, j));
  }
  return ranks;
}

std::vector<int> dp_group_ranks(const ValidatedPlan& plan, int pp_idx,
                                int mp_idx) {
  std::vector<int> ranks;
  ranks.reserve(plan.strategy.dp);
  for (int k = 0; k < plan.strategy.dp; ++k) {
    ranks.push_back(plan.rank_of(k, pp_idx, mp_idx));
  }
  return ranks;
}

Locality pair_locality(const ValidatedPlan& plan, int rank_a, int rank_b) {
  const std::array<int, 2> pair = {rank_a, rank_b};
  return classify_locality(pair, plan);
}

}  // namespace

Event make_compute_event(const ValidatedPlan& plan, int layer_idx,
                         Phase phase) {
  const LayerSpec& layer = plan.model.layers.at(layer_idx);
  const int mp = plan.strategy.mp;

  Event event;
  event.key.kind = EventKind::kCompute;
  event.key.op_name = layer.op_kind;
  event.key.phase = phase;
  event.key.input_shape =
      shard_shape(layer, mp, plan.strategy.micro_batch_size);
  event.key.payload_bytes = 0;
  event.key.group_size = 0;
  event.key.locality = Locality::kNone;

  const double total_flops =
      phase == Phase::kForward ? layer.fwd_flops : layer.bwd_flops;
  event.flops = total_flops *
                static_cast<double>(plan.strategy.micro_batch_size) / mp;
  event.source_layer = layer_idx;
  event.description = to_string(phase) + " " + layer.op_kind +
                      " (first at layer \"" + layer.name + "\")";
  return event;
}

std::optional<Event> make_mp_allreduce_event(const ValidatedPlan& plan,
                                             int layer_idx, Phase phase,
                                             int dp_idx) {
  const int mp = plan.strategy.mp;
  if (mp <= 1) return std::nullopt;
  const LayerSpec& layer = plan.model.layers.at(layer_idx);
  const Bytes payload =
      layer.output_activation_bytes *
      static_cast<Bytes>(plan.strategy.micro_batch_size);
  if (payload == 0) return std::nullopt;

  int pp_idx = -1;
  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    if (layer_idx >= plan.stages[s].begin && layer_idx < plan.stages[s].end) {
      pp_idx = static_cast<int>(s);
      break;
    }
  }
  if (pp_idx < 0) {
    throw InternalError("layer index outside every stage range");
  }

  Event event;
  event.key.kind = EventKind::kAllReduce;
  event.key.op_name = "allreduce";
  event.key.phase = phase;
  event.key.payload_bytes = payload;
  event.key.group_size = mp;
  const std::vector<int> group = mp_group_ranks(plan, dp_idx, pp_idx);
  event.key.locality = classify_locality(group, plan);
  event.source_layer = layer_idx;
  event.description = "shard merge after " + to_string(phase) + " " +
                      layer.op_kind;
  return event;
}

std::optional<Event> make_boundary_p2p_event(const ValidatedPlan& plan,
                                             int pp_idx, Phase phase,
                                             int dp_idx, int mp_idx) {
  const Bytes payload = boundary_payload(plan, pp_idx);
  if (payload == 0) return std::nullopt;

  const int near_rank = plan.rank_of(dp_idx, pp_idx, mp_idx);
  const int far_rank = plan.rank_of(dp_idx, pp_idx + 1, mp_idx);

  Event event;
  event.key.kind = EventKind::kP2P;
  event.key.op_name = "p2p";
  event.key.phase = phase;
  event.key.payload_bytes = payload;
  event.key.group_size = 2;
  event.key.locality = pair_locality(plan, near_rank, far_rank);
  event.description = to_string(phase) + " boundary transfer, stages " +
                      std::to_string(pp_idx) + "-" +
                      std::to_string(pp_idx + 1);
  return event;
}

std::optional<Event> make_boundary_p2p_group_event(const ValidatedPlan& plan,
                                                   int pp_idx, Phase phase,
                                                   int dp_idx) {
  const Bytes payload = boundary_payload(plan, pp_idx);
  if (payload == 0) return std::nullopt;

  bool any_inter = false;
  for (int j = 0; j < plan.strategy.mp; ++j) {
    const Locality pair = pair_locality(
        plan, plan.rank_of(dp_idx, pp_idx, j),
        plan.rank_of(dp_idx, pp_idx + 1, j));
    if (pair == Locality::kInterNode) any_inter = true;
  }

  Event event;
  event.key.kind = EventKind::kP2P;
  event.key.op_name = "p2p";
  event.key.phase = phase;
  event.key.payload_bytes = payload;
  event.key.group_size = 2;
  event.key.locality =
      any_inter ? Locality::kInterNode : Locality::kIntraNode;
  event.description = to_string(phase) + " boundary transfer, stages " +
                      std::to_string(pp_idx) + "-" +
                      std::to_string(pp_idx + 1);
  return event;
}

std::optional<Event> make_grad_allreduce_event(const ValidatedPlan& plan,
                                               int pp_idx, int mp_idx) {
  const int dp = plan.strategy.dp;
  if (dp <= 1) return std::nullopt;
  const Bytes payload =
      plan.stage_param_bytes(pp_idx) / static_cast<Bytes>(plan.strategy.mp);
  if (payload == 0) return std::nullopt;

  Event event;
  event.key.kind = EventKind::kAllReduce;
  event.key.op_name = "allreduce";
  event.key.phase = Phase::kNone;
  event.key.payload_bytes = payload;
  event.key.group_size = dp;
  const std::vector<int> group = dp_group_ranks(plan, pp_idx, mp_idx);
  event.key.locality = classify_locality(group, plan);
  event.description = "gradient sync, stage " + std::to_string(pp_idx);
  return event;
}

EventSet generate_events(const ValidatedPlan& plan) {
  EventSet out;
  const int mp = plan.strategy.mp;
  const int pp = plan.strategy.pp;
  const int dp = plan.strategy.dp;
  const std::uint64_t batches =
      static_cast<std::uint64_t>(plan.num_micro_batches);
  const std::array<Phase, 2> phases = {Phase::kForward, Phase::kBackward};

  for (int s = 0; s < pp; ++s) {
    const StageRange& range = plan.stages[s];
    for (int l = range.begin; l < range.end; ++l) {
      for (Phase phase : phases) {
        out.add(make_compute_event(plan, l, phase),
                static_cast<std::uint64_t>(mp) * dp * batches);
        for (int k = 0; k < dp; ++k) {
          const auto collective = make_mp_allreduce_event(plan, l, phase, k);
          if (collective.has_value()) {
            out.add(*collective, static_cast<std::uint64_t>(mp) * batches);
          }
        }
      }
    }
  }

  for (int s = 0; s + 1 < pp; ++s) {
    for (Phase phase : phases) {
      for (int k = 0; k < dp; ++k) {
        for (int j = 0; j < mp; ++j) {
          const auto transfer =
              make_boundary_p2p_event(plan, s, phase, k, j);
          if (transfer.has_value()) out.add(*transfer, batches);
        }
      }
    }
  }

  if (dp > 1) {
    for (int s = 0; s < pp; ++s) {
      for (int j = 0; j < mp; ++j) {
        const auto sync = make_grad_allreduce_event(plan, s, j);
        if (sync.has_value()) {
          out.add(*sync, static_cast<std::uint64_t>(dp));
        }
      }
    }
  }

  return out;
}

}  // namespace hybridsim
