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

#include "hybridsim/modeler.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "hybridsim/error.hpp"
#include "hybridsim/event_gen.hpp"

namespace hybridsim {
namespace {

constexpr int kForwardLane = 0;
constexpr int kBackwardLane = 1;

int lane_of(Phase phase) {
  return phase == Phase::kForward ? kForwardLane : kBackwardLane;
}

// Where the output of one stage task lands on the neighbor stage.
struct Arrival {
  bool set = false;
  // Without receiver charging: earliest time the consumer may start.
  // With receiver charging: start of the send, from which the receive slot
  // is laid out on the consumer.
  Seconds when = 0.0;
  Seconds recv_elapsed = 0.0;
  std::shared_ptr<const Event> transfer;
};

struct PendingTask {
  bool ready = false;
  Seconds ready_time = 0.0;
  StageTask task;
  std::string blocked_on;
};

}  // namespace

LayerEventMap model_mp(const ValidatedPlan& plan) {
  const int pp = plan.strategy.pp;
  LayerEventMap map;
  map.stages.resize(pp);

  for (int s = 0; s < pp; ++s) {
    const StageRange& range = plan.stages[s];
    auto& forward = map.stages[s][kForwardLane];
    auto& backward = map.stages[s][kBackwardLane];
    forward.reserve(range.size());
    backward.reserve(range.size());
    for (int l = range.begin; l < range.end; ++l) {
      ComposedEvent composed;
      composed.compute = std::make_shared<Event>(
          make_compute_event(plan, l, Phase::kForward));
      if (auto collective =
              make_mp_allreduce_event(plan, l, Phase::kForward, 0)) {
        composed.collective =
            std::make_shared<Event>(*std::move(collective));
      }
      forward.push_back(std::move(composed));
    }
    for (int l = range.end - 1; l >= range.begin; --l) {
      ComposedEvent composed;
      composed.compute = std::make_shared<Event>(
          make_compute_event(plan, l, Phase::kBackward));
      if (auto collective =
              make_mp_allreduce_event(plan, l, Phase::kBackward, 0)) {
        composed.collective =
            std::make_shared<Event>(*std::move(collective));
      }
      backward.push_back(std::move(composed));
    }
  }

  map.forward_p2p.resize(pp > 0 ? pp - 1 : 0);
  map.backward_p2p.resize(pp > 0 ? pp - 1 : 0);
  for (int s = 0; s + 1 < pp; ++s) {
    if (auto transfer =
            make_boundary_p2p_group_event(plan, s, Phase::kForward, 0)) {
      map.forward_p2p[s] = std::make_shared<Event>(*std::move(transfer));
    }
    if (auto transfer =
            make_boundary_p2p_group_event(plan, s, Phase::kBackward, 0)) {
      map.backward_p2p[s] = std::make_shared<Event>(*std::move(transfer));
    }
  }
  return map;
}

Timeline build_pipeline(const Schedule& schedule, const LayerEventMap& map,
                        const ValidatedPlan& plan, const CostResolver& costs,
                        const ModelerOptions& options) {
  const int pp = plan.strategy.pp;
  const int mp = plan.strategy.mp;
  const std::int64_t m_count = plan.num_micro_batches;

  if (schedule.pp != pp) {
    throw ValidationError("schedule has " + std::to_string(schedule.pp) +
                          " stages but the plan has " + std::to_string(pp));
  }
  if (schedule.num_micro_batches != m_count) {
    throw ValidationError(
        "schedule covers " + std::to_string(schedule.num_micro_batches) +
        " micro-batches but the plan needs " + std::to_string(m_count));
  }
  if (const auto violation = validate_schedule(schedule)) {
    throw ValidationError(
        "invalid schedule: " + violation->constraint + " (stage " +
        std::to_string(violation->pp_idx) + ", micro-batch " +
        std::to_string(violation->task.micro_batch) + ", " +
        to_string(violation->task.phase) + ")");
  }
  if (static_cast<int>(map.stages.size()) != pp) {
    throw InternalError("layer event map does not match the plan");
  }

  // Durations are resolved once per event class so every instance of a
  // class adds the same elapsed value.
  std::vector<std::array<std::vector<std::pair<Seconds, Seconds>>, 2>>
      task_costs(pp);
  for (int s = 0; s < pp; ++s) {
    for (int lane = 0; lane < 2; ++lane) {
      for (const ComposedEvent& composed : map.stages[s][lane]) {
        const Seconds compute = costs.elapsed(*composed.compute);
        const Seconds collective =
            composed.collective ? costs.elapsed(*composed.collective) : 0.0;
        task_costs[s][lane].push_back({compute, collective});
      }
    }
  }
  std::vector<Seconds> forward_send_cost(pp > 1 ? pp - 1 : 0, 0.0);
  std::vector<Seconds> backward_send_cost(pp > 1 ? pp - 1 : 0, 0.0);
  for (int s = 0; s + 1 < pp; ++s) {
    if (map.forward_p2p[s]) {
      forward_send_cost[s] = costs.elapsed(*map.forward_p2p[s]);
    }
    if (map.backward_p2p[s]) {
      backward_send_cost[s] = costs.elapsed(*map.backward_p2p[s]);
    }
  }

  Timeline timeline;
  timeline.plan = plan;
  timeline.per_rank.resize(static_cast<std::size_t>(pp) * mp);

  std::vector<std::size_t> next_index(pp, 0);
  std::vector<Seconds> device_free(pp, 0.0);
  std::vector<std::vector<Arrival>> forward_arrival(
      pp, std::vector<Arrival>(m_count));
  std::vector<std::vector<Arrival>> backward_arrival(
      pp, std::vector<Arrival>(m_count));
  std::vector<std::vector<bool>> forward_done(
      pp, std::vector<bool>(m_count, false));

  const auto emit = [&](int s, const std::shared_ptr<const Event>& event,
                        Seconds start, Seconds end, std::int64_t micro) {
    for (int j = 0; j < mp; ++j) {
      TimedInstance instance;
      instance.event = event;
      instance.start = start;
      instance.end = end;
      instance.micro_batch = micro;
      instance.stage = s;
      instance.rank = s * mp + j;
      timeline.per_rank[instance.rank].push_back(std::move(instance));
    }
  };

  std::size_t remaining = 0;
  for (const auto& order : schedule.per_stage_order) {
    remaining += order.size();
  }

  while (remaining > 0) {
    // One candidate per stage: its next task in schedule order, ready when
    // its inputs have arrived.
    int best_stage = -1;
    Seconds best_time = 0.0;
    std::vector<PendingTask> pending(pp);
    for (int s = 0; s < pp; ++s) {
      if (next_index[s] >= schedule.per_stage_order[s].size()) continue;
      const StageTask task = schedule.per_stage_order[s][next_index[s]];
      PendingTask& entry = pending[s];
      entry.task = task;

      const Arrival* arrival = nullptr;
      if (task.phase == Phase::kForward) {
        if (s > 0) {
          arrival = &forward_arrival[s][task.micro_batch];
          if (!arrival->set) {
            entry.blocked_on = "activations from stage " +
                               std::to_string(s - 1);
            continue;
          }
        }
      } else {
        if (!forward_done[s][task.micro_batch]) {
          entry.blocked_on = "its own forward pass";
          continue;
        }
        if (s + 1 < pp) {
          arrival = &backward_arrival[s][task.micro_batch];
          if (!arrival->set) {
            entry.blocked_on = "gradients from stage " +
                               std::to_string(s + 1);
            continue;
          }
        }
      }

      Seconds ready = device_free[s];
      if (arrival != nullptr) {
        if (options.charge_receiver && arrival->transfer) {
          ready = std::max(ready, arrival->when) + arrival->recv_elapsed;
        } else {
          ready = std::max(ready, arrival->when);
        }
      }
      entry.ready = true;
      entry.ready_time = ready;
      if (best_stage < 0 || ready < best_time ||
          (ready == best_time && s < best_stage)) {
        best_stage = s;
        best_time = ready;
      }
    }

    if (best_stage < 0) {
      std::ostringstream out;
      out << "pipeline deadlock:";
      for (int s = 0; s < pp; ++s) {
        if (next_index[s] >= schedule.per_stage_order[s].size()) continue;
        const PendingTask& entry = pending[s];
        out << " stage " << s << " waits for " << entry.blocked_on
            << " before micro-batch " << entry.task.micro_batch << " "
            << to_string(entry.task.phase) << ";";
      }
      throw ValidationError(out.str());
    }

    const int s = best_stage;
    const StageTask task = schedule.per_stage_order[s][next_index[s]];
    const int lane = lane_of(task.phase);
    Seconds cursor = device_free[s];

    const Arrival* arrival = nullptr;
    if (task.phase == Phase::kForward && s > 0) {
      arrival = &forward_arrival[s][task.micro_batch];
    } else if (task.phase == Phase::kBackward && s + 1 < pp) {
      arrival = &backward_arrival[s][task.micro_batch];
    }
    if (arrival != nullptr) {
      if (options.charge_receiver && arrival->transfer) {
        const Seconds recv_start = std::max(cursor, arrival->when);
        const Seconds recv_end = recv_start + arrival->recv_elapsed;
        emit(s, arrival->transfer, recv_start, recv_end, task.micro_batch);
        cursor = recv_end;
      } else {
        cursor = std::max(cursor, arrival->when);
      }
    }

    const auto& composed_lane = map.stages[s][lane];
    for (std::size_t i = 0; i < composed_lane.size(); ++i) {
      const auto [compute_cost, collective_cost] = task_costs[s][lane][i];
      const Seconds compute_end = cursor + compute_cost;
      emit(s, composed_lane[i].compute, cursor, compute_end,
           task.micro_batch);
      cursor = compute_end;
      if (composed_lane[i].collective) {
        const Seconds collective_end = cursor + collective_cost;
        emit(s, composed_lane[i].collective, cursor, collective_end,
             task.micro_batch);
        cursor = collective_end;
      }
    }

    if (task.phase == Phase::kForward) {
      forward_done[s][task.micro_batch] = true;
      if (s + 1 < pp) {
        Arrival& sink = forward_arrival[s + 1][task.micro_batch];
        sink.set = true;
        sink.transfer = map.forward_p2p[s];
        if (sink.transfer) {
          const Seconds send_start = cursor;
          const Seconds send_end = send_start + forward_send_cost[s];
          emit(s, sink.transfer, send_start, send_end, task.micro_batch);
          sink.when = options.charge_receiver ? send_start : send_end;
          sink.recv_elapsed = forward_send_cost[s];
          cursor = send_end;
        } else {
          sink.when = cursor;
        }
      }
    } else if (s > 0) {
      Arrival& sink = backward_arrival[s - 1][task.micro_batch];
      sink.set = true;
      sink.transfer = map.backward_p2p[s - 1];
      if (sink.transfer) {
        const Seconds send_start = cursor;
        const Seconds send_end = send_start + backward_send_cost[s - 1];
        emit(s, sink.transfer, send_start, send_end, task.micro_batch);
        sink.when = options.charge_receiver ? send_start : send_end;
        sink.recv_elapsed = backward_send_cost[s - 1];
        cursor = send_end;
      } else {
        sink.when = cursor;
      }
    }

    device_free[s] = cursor;
    ++next_index[s];
    --remaining;
  }

  return timeline;
}

Timeline expand_dp(const Timeline& replica, const ValidatedPlan& plan,
                   const CostResolver& costs) {
  const int pp = plan.strategy.pp;
  const int mp = plan.strategy.mp;
  const int dp = plan.strategy.dp;
  const std::size_t replica_ranks = static_cast<std::size_t>(pp) * mp;
  if (replica.per_rank.size() != replica_ranks) {
    throw InternalError("replica timeline does not match the plan");
  }

  Timeline timeline;
  timeline.plan = plan;
  timeline.per_rank.resize(replica_ranks * dp);
  for (int k = 0; k < dp; ++k) {
    for (std::size_t r = 0; r < replica_ranks; ++r) {
      const int global = static_cast<int>(k * replica_ranks + r);
      std::vector<TimedInstance>& lane = timeline.per_rank[global];
      lane = replica.per_rank[r];
      for (TimedInstance& instance : lane) {
        instance.rank = global;
      }
    }
  }

  if (dp > 1) {
    for (int s = 0; s < pp; ++s) {
      for (int j = 0; j < mp; ++j) {
        const auto sync = make_grad_allreduce_event(plan, s, j);
        if (!sync.has_value()) continue;
        const auto event = std::make_shared<Event>(*sync);
        const Seconds elapsed = costs.elapsed(*event);
        for (int k = 0; k < dp; ++k) {
          const int rank = plan.rank_of(k, s, j);
          std::vector<TimedInstance>& lane = timeline.per_rank[rank];
          const Seconds last = lane.empty() ? 0.0 : lane.back().end;
          TimedInstance instance;
          instance.event = event;
          instance.start = last;
          instance.end = last + elapsed;
          instance.micro_batch = -1;
          instance.stage = s;
          instance.rank = rank;
          lane.push_back(std::move(instance));
        }
      }
    }
  }

  return timeline;
}

Timeline simulate(const ValidatedPlan& plan, const CostTable& table,
                  CostPolicy policy, const ModelerOptions& options) {
  const CostResolver costs(table, plan.cluster, policy);
  const LayerEventMap map = model_mp(plan);
  const Schedule schedule =
      make_schedule(plan.strategy.pipeline_algorithm, plan.strategy.pp,
                    plan.num_micro_batches);
  const Timeline replica = build_pipeline(schedule, map, plan, costs, options);
  return expand_dp(replica, plan, costs);
}

}  // namespace hybridsim
