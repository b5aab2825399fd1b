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

#include "hybridsim/schedule.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "hybridsim/error.hpp"

namespace hybridsim {
namespace {

void check_schedule_args(int pp, std::int64_t num_micro_batches) {
  if (pp <= 0) {
    throw ValidationError("schedule: pp must be positive");
  }
  if (num_micro_batches <= 0) {
    throw ValidationError("schedule: micro-batch count must be positive");
  }
}

}  // namespace

std::string Schedule::dump() const {
  std::ostringstream out;
  for (std::size_t s = 0; s < per_stage_order.size(); ++s) {
    out << "stage " << s << ":";
    for (const StageTask& task : per_stage_order[s]) {
      out << ' ' << (task.phase == Phase::kForward ? 'F' : 'B')
          << task.micro_batch;
    }
    out << '\n';
  }
  return out.str();
}

Schedule gpipe_schedule(int pp, std::int64_t num_micro_batches,
                        bool reverse_backward) {
  check_schedule_args(pp, num_micro_batches);
  Schedule schedule;
  schedule.algorithm = PipelineAlgorithm::kGPipe;
  schedule.pp = pp;
  schedule.num_micro_batches = num_micro_batches;
  schedule.per_stage_order.resize(pp);
  for (int s = 0; s < pp; ++s) {
    std::vector<StageTask>& order = schedule.per_stage_order[s];
    order.reserve(2 * num_micro_batches);
    for (std::int64_t m = 0; m < num_micro_batches; ++m) {
      order.push_back(StageTask{m, Phase::kForward});
    }
    if (reverse_backward) {
      for (std::int64_t m = num_micro_batches - 1; m >= 0; --m) {
        order.push_back(StageTask{m, Phase::kBackward});
      }
    } else {
      for (std::int64_t m = 0; m < num_micro_batches; ++m) {
        order.push_back(StageTask{m, Phase::kBackward});
      }
    }
  }
  return schedule;
}

Schedule dapple_schedule(int pp, std::int64_t num_micro_batches) {
  check_schedule_args(pp, num_micro_batches);
  Schedule schedule;
  schedule.algorithm = PipelineAlgorithm::kDapple;
  schedule.pp = pp;
  schedule.num_micro_batches = num_micro_batches;
  schedule.per_stage_order.resize(pp);
  for (int s = 0; s < pp; ++s) {
    std::vector<StageTask>& order = schedule.per_stage_order[s];
    order.reserve(2 * num_micro_batches);
    const std::int64_t warmup =
        std::min<std::int64_t>(num_micro_batches, pp - s);
    std::int64_t next_forward = 0;
    std::int64_t next_backward = 0;
    for (std::int64_t i = 0; i < warmup; ++i) {
      order.push_back(StageTask{next_forward++, Phase::kForward});
    }
    while (next_forward < num_micro_batches) {
      order.push_back(StageTask{next_backward++, Phase::kBackward});
      order.push_back(StageTask{next_forward++, Phase::kForward});
    }
    while (next_backward < num_micro_batches) {
      order.push_back(StageTask{next_backward++, Phase::kBackward});
    }
  }
  return schedule;
}

Schedule sequential_schedule(std::int64_t num_micro_batches) {
  check_schedule_args(1, num_micro_batches);
  Schedule schedule;
  schedule.algorithm = PipelineAlgorithm::kSequential;
  schedule.pp = 1;
  schedule.num_micro_batches = num_micro_batches;
  schedule.per_stage_order.resize(1);
  std::vector<StageTask>& order = schedule.per_stage_order[0];
  order.reserve(2 * num_micro_batches);
  for (std::int64_t m = 0; m < num_micro_batches; ++m) {
    order.push_back(StageTask{m, Phase::kForward});
    order.push_back(StageTask{m, Phase::kBackward});
  }
  return schedule;
}

Schedule make_schedule(PipelineAlgorithm algorithm, int pp,
                       std::int64_t num_micro_batches) {
  switch (algorithm) {
    case PipelineAlgorithm::kGPipe:
      return gpipe_schedule(pp, num_micro_batches);
    case PipelineAlgorithm::kDapple:
      return dapple_schedule(pp, num_micro_batches);
    case PipelineAlgorithm::kSequential:
      if (pp != 1) {
        throw ValidationError(
            "sequential schedules require pp = 1, got pp = " +
            std::to_string(pp));
      }
      return sequential_schedule(num_micro_batches);
  }
  throw InternalError("unhandled PipelineAlgorithm value");
}

std::optional<ScheduleViolation> validate_schedule(const Schedule& schedule) {
  const int pp = schedule.pp;
  const std::int64_t m_count = schedule.num_micro_batches;
  if (pp <= 0 || m_count <= 0 ||
      static_cast<int>(schedule.per_stage_order.size()) != pp) {
    return ScheduleViolation{"stage list does not match pp", 0, StageTask{}};
  }

  for (int s = 0; s < pp; ++s) {
    const std::vector<StageTask>& order = schedule.per_stage_order[s];
    std::set<std::pair<std::int64_t, Phase>> seen;
    std::set<std::int64_t> forward_done;
    for (const StageTask& task : order) {
      if (task.micro_batch < 0 || task.micro_batch >= m_count) {
        return ScheduleViolation{"micro-batch index out of range", s, task};
      }
      if (task.phase == Phase::kNone) {
        return ScheduleViolation{"stage tasks must be forward or backward", s,
                                 task};
      }
      if (!seen.insert({task.micro_batch, task.phase}).second) {
        return ScheduleViolation{"micro-batch scheduled twice", s, task};
      }
      if (task.phase == Phase::kForward) {
        forward_done.insert(task.micro_batch);
      } else if (forward_done.count(task.micro_batch) == 0) {
        return ScheduleViolation{"backward before its forward", s, task};
      }
    }
    if (static_cast<std::int64_t>(order.size()) != 2 * m_count) {
      for (std::int64_t m = 0; m < m_count; ++m) {
        for (Phase phase : {Phase::kForward, Phase::kBackward}) {
          if (seen.count({m, phase}) == 0) {
            return ScheduleViolation{"micro-batch missing from stage order",
                                     s, StageTask{m, phase}};
          }
        }
      }
    }
  }

  // Cross-stage acyclicity over per-stage chains plus forward edges down
  // the pipeline and backward edges up it, checked by Kahn's algorithm.
  const auto node_id = [&](int s, std::int64_t m, Phase phase) {
    return (static_cast<std::int64_t>(s) * m_count + m) * 2 +
           (phase == Phase::kBackward ? 1 : 0);
  };
  const std::int64_t total = static_cast<std::int64_t>(pp) * m_count * 2;
  std::vector<std::vector<std::int64_t>> succ(total);
  std::vector<int> indegree(total, 0);
  const auto add_edge = [&](std::int64_t from, std::int64_t to) {
    succ[from].push_back(to);
    ++indegree[to];
  };
  for (int s = 0; s < pp; ++s) {
    const std::vector<StageTask>& order = schedule.per_stage_order[s];
    for (std::size_t i = 1; i < order.size(); ++i) {
      add_edge(node_id(s, order[i - 1].micro_batch, order[i - 1].phase),
               node_id(s, order[i].micro_batch, order[i].phase));
    }
  }
  for (std::int64_t m = 0; m < m_count; ++m) {
    for (int s = 0; s + 1 < pp; ++s) {
      add_edge(node_id(s, m, Phase::kForward),
               node_id(s + 1, m, Phase::kForward));
      add_edge(node_id(s + 1, m, Phase::kBackward),
               node_id(s, m, Phase::kBackward));
    }
    for (int s = 0; s < pp; ++s) {
      add_edge(node_id(s, m, Phase::kForward),
               node_id(s, m, Phase::kBackward));
    }
  }
  std::deque<std::int64_t> ready;
  for (std::int64_t v = 0; v < total; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::int64_t processed = 0;
  while (!ready.empty()) {
    const std::int64_t v = ready.front();
    ready.pop_front();
    ++processed;
    for (std::int64_t w : succ[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  if (processed != total) {
    for (std::int64_t v = 0; v < total; ++v) {
      if (indegree[v] > 0) {
        const int s = static_cast<int>(v / 2 / m_count);
        const std::int64_t m = (v / 2) % m_count;
        const Phase phase = (v % 2 == 1) ? Phase::kBackward : Phase::kForward;
        return ScheduleViolation{"cyclic cross-stage dependencies", s,
                                 StageTask{m, phase}};
      }
    }
  }
  return std::nullopt;
}

}  // namespace hybridsim
