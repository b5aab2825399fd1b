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

#ifndef HYBRIDSIM_ANALYSIS_HPP_
#define HYBRIDSIM_ANALYSIS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hybridsim/timeline.hpp"

namespace hybridsim {

// End of the last instance across all devices, with time zero as the
// batch's first start. Empty timelines have batch time zero.
Seconds batch_time(const Timeline& timeline);

struct DeviceActivity {
  int rank = 0;
  Seconds busy = 0.0;
  Seconds first_start = 0.0;
  Seconds last_end = 0.0;
  // Gaps within [0, makespan] where the device runs nothing.
  std::vector<std::pair<Seconds, Seconds>> idle_spans;
  // busy / makespan of the whole timeline.
  double utilization = 0.0;
};

struct ActivityReport {
  Seconds makespan = 0.0;
  std::vector<DeviceActivity> per_device;
};

ActivityReport activity(const Timeline& timeline);

enum class BubbleKind { kWarmup, kDrain, kInterior };

std::string to_string(BubbleKind kind);

// One idle gap on one device, classified against the pipeline phase
// structure: before the device's first work is warmup, at or after the
// device's own last forward end is drain, anything else is interior.
struct Bubble {
  int rank = 0;
  int stage = 0;
  Seconds start = 0.0;
  Seconds end = 0.0;
  BubbleKind kind = BubbleKind::kInterior;
};

struct BubbleReport {
  Seconds makespan = 0.0;
  std::vector<Bubble> bubbles;
  Seconds total_bubble_time = 0.0;
};

BubbleReport bubble_report(const Timeline& timeline);

// Start/end of one stage task across the mp ranks that ran it in lockstep,
// plus the per-rank instance spans inside it.
struct StageTaskTimes {
  int stage = 0;
  std::int64_t micro_batch = 0;
  Phase phase = Phase::kForward;
  Seconds start = 0.0;
  Seconds end = 0.0;
  std::vector<int> ranks;
};

struct StageReport {
  std::vector<StageTaskTimes> tasks;  // ordered by start, stage, micro-batch
};

StageReport stage_report(const Timeline& timeline);

// Chrome trace event format: a JSON array of complete ("ph":"X") events
// with microsecond ts/dur, pid = node, tid = device slot on the node, and
// the micro-batch, stage, phase, and rank in args. Sorted by ts.
std::string export_trace(const Timeline& timeline);

// Rebuilds a timeline from an exported trace and the plan it came from.
// Event metadata not captured by the canonical key (flops, descriptions) is
// not restored.
Timeline parse_trace(const std::string& text, const ValidatedPlan& plan);

// Structural checks on a trace document: complete events only, integer
// non-negative ts/dur, required args present, globally sorted by ts, and no
// overlap within any (pid, tid) lane. Throws ValidationError.
void validate_trace(const std::string& text);

// JSON forms of the reports above for file output.
std::string activity_to_json(const ActivityReport& report);
std::string bubbles_to_json(const BubbleReport& report);
std::string stage_report_to_json(const StageReport& report);

}  // namespace hybridsim

#endif  // HYBRIDSIM_ANALYSIS_HPP_
