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

#ifndef HYBRIDSIM_TIMELINE_HPP_
#define HYBRIDSIM_TIMELINE_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hybridsim/event.hpp"
#include "hybridsim/plan.hpp"

namespace hybridsim {

// One scheduled occurrence of an event on one device. The batch's first
// forward starts at time zero.
struct TimedInstance {
  std::shared_ptr<const Event> event;
  Seconds start = 0.0;
  Seconds end = 0.0;
  std::int64_t micro_batch = -1;  // -1 for work outside any micro-batch
  int stage = 0;
  int rank = 0;
};

// Per-device chronological instance lists. A timeline may cover one
// data-parallel replica (ranks 0 .. pp*mp) or the whole plan.
struct Timeline {
  ValidatedPlan plan;
  std::vector<std::vector<TimedInstance>> per_rank;

  Seconds makespan() const;
  std::uint64_t total_instances() const;
};

// File form: {"plan": {model, cluster, strategy}, "timeline": [{rank, key,
// start_us, end_us, micro_batch, stage, phase}, ...]} with integer
// microsecond timestamps, records ordered by rank then start.
std::string timeline_to_json(const Timeline& timeline);
Timeline timeline_from_json(const std::string& text);

}  // namespace hybridsim

#endif  // HYBRIDSIM_TIMELINE_HPP_
