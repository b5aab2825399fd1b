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

#ifndef HYBRIDSIM_SCHEDULE_HPP_
#define HYBRIDSIM_SCHEDULE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hybridsim/event.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

// One unit of pipeline work: run micro-batch `micro_batch` through the
// local stage in the given direction.
struct StageTask {
  std::int64_t micro_batch = 0;
  Phase phase = Phase::kForward;

  bool operator==(const StageTask& other) const = default;
};

// Per-stage execution orders for one training batch.
struct Schedule {
  PipelineAlgorithm algorithm = PipelineAlgorithm::kSequential;
  int pp = 1;
  std::int64_t num_micro_batches = 0;
  std::vector<std::vector<StageTask>> per_stage_order;  // indexed by pp_idx

  // Human-readable listing, one line per stage: "stage 0: F0 F1 B0 B1".
  std::string dump() const;
};

// All forwards in micro-batch order, then all backwards. `reverse_backward`
// drains backwards in descending micro-batch order instead.
Schedule gpipe_schedule(int pp, std::int64_t num_micro_batches,
                        bool reverse_backward = false);

// One-forward-one-backward: stage s runs min(M, pp - s) warmup forwards,
// then alternates backward/forward until forwards run out, then drains the
// remaining backwards.
Schedule dapple_schedule(int pp, std::int64_t num_micro_batches);

// Single device, no pipelining: F0 B0 F1 B1 ...
Schedule sequential_schedule(std::int64_t num_micro_batches);

Schedule make_schedule(PipelineAlgorithm algorithm, int pp,
                       std::int64_t num_micro_batches);

struct ScheduleViolation {
  std::string constraint;
  int pp_idx = 0;
  StageTask task;
};

// Checks that every stage lists each (micro-batch, phase) exactly once,
// forwards precede their backwards on the same stage, and the cross-stage
// dependency graph is acyclic. Returns the first violation found.
std::optional<ScheduleViolation> validate_schedule(const Schedule& schedule);

}  // namespace hybridsim

#endif  // HYBRIDSIM_SCHEDULE_HPP_
