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

#include "hybridsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "hybridsim/error.hpp"
#include "json_util.hpp"

namespace hybridsim {
namespace {

std::int64_t to_micros(Seconds seconds) {
  return static_cast<std::int64_t>(std::llround(seconds * kMicrosPerSecond));
}

Seconds last_forward_end(const std::vector<TimedInstance>& lane) {
  Seconds latest = 0.0;
  for (const TimedInstance& instance : lane) {
    if (instance.event->key.phase == Phase::kForward) {
      latest = std::max(latest, instance.end);
    }
  }
  return latest;
}

// Idle gaps of one device lane within [0, makespan], assuming the lane is
// chronological and non-overlapping.
std::vector<std::pair<Seconds, Seconds>> lane_gaps(
    const std::vector<TimedInstance>& lane, Seconds makespan) {
  std::vector<std::pair<Seconds, Seconds>> gaps;
  Seconds cursor = 0.0;
  for (const TimedInstance& instance : lane) {
    if (instance.start > cursor) {
      gaps.push_back({cursor, instance.start});
    }
    cursor = std::max(cursor, instance.end);
  }
  if (makespan > cursor) {
    gaps.push_back({cursor, makespan});
  }
  return gaps;
}

}  // namespace

std::string to_string(BubbleKind kind) {
  switch (kind) {
    case BubbleKind::kWarmup:
      return "warmup";
    case BubbleKind::kDrain:
      return "drain";
    case BubbleKind::kInterior:
      return "interior";
  }
  throw InternalError("unhandled BubbleKind value");
}

Seconds batch_time(const Timeline& timeline) { return timeline.makespan(); }

ActivityReport activity(const Timeline& timeline) {
  ActivityReport report;
  report.makespan = timeline.makespan();
  report.per_device.reserve(timeline.per_rank.size());
  for (std::size_t rank = 0; rank < timeline.per_rank.size(); ++rank) {
    const auto& lane = timeline.per_rank[rank];
    DeviceActivity device;
    device.rank = static_cast<int>(rank);
    for (const TimedInstance& instance : lane) {
      device.busy += instance.end - instance.start;
    }
    if (!lane.empty()) {
      device.first_start = lane.front().start;
      device.last_end = lane.back().end;
    }
    device.idle_spans = lane_gaps(lane, report.makespan);
    device.utilization =
        report.makespan > 0.0 ? device.busy / report.makespan : 0.0;
    report.per_device.push_back(std::move(device));
  }
  return report;
}

BubbleReport bubble_report(const Timeline& timeline) {
  BubbleReport report;
  report.makespan = timeline.makespan();
  if (timeline.plan.strategy.pp == 1) {
    return report;
  }
  for (std::size_t rank = 0; rank < timeline.per_rank.size(); ++rank) {
    const auto& lane = timeline.per_rank[rank];
    const int stage = timeline.plan.coord(static_cast<int>(rank)).pp_idx;
    const Seconds first_start = lane.empty() ? 0.0 : lane.front().start;
    const Seconds forward_end = last_forward_end(lane);
    for (const auto& [gap_start, gap_end] :
         lane_gaps(lane, report.makespan)) {
      Bubble bubble;
      bubble.rank = static_cast<int>(rank);
      bubble.stage = stage;
      bubble.start = gap_start;
      bubble.end = gap_end;
      if (gap_end <= first_start) {
        bubble.kind = BubbleKind::kWarmup;
      } else if (gap_start >= forward_end) {
        bubble.kind = BubbleKind::kDrain;
      } else {
        bubble.kind = BubbleKind::kInterior;
      }
      report.bubbles.push_back(bubble);
      report.total_bubble_time += gap_end - gap_start;
    }
  }
  return report;
}

StageReport stage_report(const Timeline& timeline) {
  struct Accumulator {
    Seconds start = 0.0;
    Seconds end = 0.0;
    std::vector<int> ranks;
    bool set = false;
  };
  std::map<std::tuple<std::int64_t, int, int>, Accumulator> groups;
  for (const auto& lane : timeline.per_rank) {
    for (const TimedInstance& instance : lane) {
      const int phase_order = static_cast<int>(instance.event->key.phase);
      Accumulator& acc = groups[{instance.micro_batch, instance.stage,
                                 phase_order}];
      if (!acc.set) {
        acc.start = instance.start;
        acc.end = instance.end;
        acc.set = true;
      } else {
        acc.start = std::min(acc.start, instance.start);
        acc.end = std::max(acc.end, instance.end);
      }
      if (acc.ranks.empty() || acc.ranks.back() != instance.rank) {
        acc.ranks.push_back(instance.rank);
      }
    }
  }

  StageReport report;
  report.tasks.reserve(groups.size());
  for (auto& [group_key, acc] : groups) {
    StageTaskTimes task;
    task.micro_batch = std::get<0>(group_key);
    task.stage = std::get<1>(group_key);
    task.phase = static_cast<Phase>(std::get<2>(group_key));
    task.start = acc.start;
    task.end = acc.end;
    std::sort(acc.ranks.begin(), acc.ranks.end());
    acc.ranks.erase(std::unique(acc.ranks.begin(), acc.ranks.end()),
                    acc.ranks.end());
    task.ranks = std::move(acc.ranks);
    report.tasks.push_back(std::move(task));
  }
  std::stable_sort(report.tasks.begin(), report.tasks.end(),
                   [](const StageTaskTimes& a, const StageTaskTimes& b) {
                     return std::tie(a.start, a.stage, a.micro_batch) <
                            std::tie(b.start, b.stage, b.micro_batch);
                   });
  return report;
}

std::string export_trace(const Timeline& timeline) {
  struct Record {
    std::int64_t ts;
    int pid;
    int tid;
    nlohmann::json body;
  };
  std::vector<Record> records;
  records.reserve(timeline.total_instances());
  for (const auto& lane : timeline.per_rank) {
    for (const TimedInstance& instance : lane) {
      const RankCoord& coord = timeline.plan.coord(instance.rank);
      Record record;
      record.ts = to_micros(instance.start);
      record.pid = coord.node_id;
      record.tid = coord.local_device_id;
      record.body["ph"] = "X";
      record.body["name"] = instance.event->key.canonical();
      record.body["cat"] = to_string(instance.event->key.kind);
      record.body["ts"] = record.ts;
      record.body["dur"] = to_micros(instance.end) - record.ts;
      record.body["pid"] = record.pid;
      record.body["tid"] = record.tid;
      record.body["args"]["rank"] = instance.rank;
      record.body["args"]["stage"] = instance.stage;
      record.body["args"]["micro_batch"] = instance.micro_batch;
      record.body["args"]["phase"] = to_string(instance.event->key.phase);
      records.push_back(std::move(record));
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) {
                     return std::tie(a.ts, a.pid, a.tid) <
                            std::tie(b.ts, b.pid, b.tid);
                   });
  nlohmann::json document = nlohmann::json::array();
  for (Record& record : records) {
    document.push_back(std::move(record.body));
  }
  return document.dump(2) + "\n";
}

Timeline parse_trace(const std::string& text, const ValidatedPlan& plan) {
  namespace ju = jsonutil;
  validate_trace(text);
  const ju::json document = ju::parse(text, "trace");

  Timeline timeline;
  timeline.plan = plan;
  timeline.per_rank.resize(plan.ranks.size());
  for (std::size_t i = 0; i < document.size(); ++i) {
    const std::string path = "trace[" + std::to_string(i) + "]";
    const ju::json& record = document[i];
    const ju::json& args = record.at("args");
    const std::string args_path = path + ".args";
    const int rank =
        static_cast<int>(ju::get_integer(args, args_path, "rank"));
    if (rank < 0 || rank >= static_cast<int>(timeline.per_rank.size())) {
      throw ValidationError(path + ".args.rank: out of range");
    }
    const RankCoord& coord = plan.coord(rank);
    if (record.at("pid").get<std::int64_t>() != coord.node_id ||
        record.at("tid").get<std::int64_t>() != coord.local_device_id) {
      throw ValidationError(path + ": pid/tid disagree with the rank");
    }
    TimedInstance instance;
    instance.rank = rank;
    auto event = std::make_shared<Event>();
    event->key = EventKey::from_canonical(
        record.at("name").get<std::string>());
    if (to_string(event->key.phase) != args.at("phase").get<std::string>()) {
      throw ValidationError(path + ".args.phase: disagrees with the key");
    }
    instance.event = std::move(event);
    const std::int64_t ts = record.at("ts").get<std::int64_t>();
    const std::int64_t dur = record.at("dur").get<std::int64_t>();
    instance.start = static_cast<Seconds>(ts) / kMicrosPerSecond;
    instance.end = static_cast<Seconds>(ts + dur) / kMicrosPerSecond;
    instance.micro_batch = ju::get_integer(args, args_path, "micro_batch");
    instance.stage =
        static_cast<int>(ju::get_integer(args, args_path, "stage"));
    timeline.per_rank[rank].push_back(std::move(instance));
  }
  for (auto& lane : timeline.per_rank) {
    std::stable_sort(lane.begin(), lane.end(),
                     [](const TimedInstance& a, const TimedInstance& b) {
                       return a.start < b.start;
                     });
  }
  return timeline;
}

void validate_trace(const std::string& text) {
  namespace ju = jsonutil;
  const ju::json document = ju::parse(text, "trace");
  if (!document.is_array()) {
    throw ValidationError("trace: expected a JSON array of events");
  }
  std::int64_t previous_ts = 0;
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> lane_end;
  for (std::size_t i = 0; i < document.size(); ++i) {
    const std::string path = "trace[" + std::to_string(i) + "]";
    const ju::json& record = ju::require_object(document[i], path);
    ju::reject_unknown_keys(record, path,
                            {"ph", "name", "cat", "ts", "dur", "pid", "tid",
                             "args"});
    if (ju::get_string(record, path, "ph") != "X") {
      throw ValidationError(path + ".ph: only complete (\"X\") events are "
                            "valid");
    }
    if (ju::get_string(record, path, "name").empty()) {
      throw ValidationError(path + ".name: must not be empty");
    }
    const std::int64_t ts = ju::get_integer(record, path, "ts");
    const std::int64_t dur = ju::get_integer(record, path, "dur");
    if (ts < 0) throw ValidationError(path + ".ts: must be non-negative");
    if (dur < 0) throw ValidationError(path + ".dur: must be non-negative");
    const std::int64_t pid = ju::get_integer(record, path, "pid");
    const std::int64_t tid = ju::get_integer(record, path, "tid");
    const ju::json& args =
        ju::require_object(ju::require_key(record, path, "args"),
                           path + ".args");
    ju::reject_unknown_keys(args, path + ".args",
                            {"rank", "stage", "micro_batch", "phase"});
    ju::get_integer(args, path + ".args", "rank");
    ju::get_integer(args, path + ".args", "stage");
    ju::get_integer(args, path + ".args", "micro_batch");
    ju::get_string(args, path + ".args", "phase");

    if (i > 0 && ts < previous_ts) {
      throw ValidationError(path + ".ts: trace must be sorted by ts");
    }
    previous_ts = ts;

    auto& end = lane_end[{pid, tid}];
    if (ts < end) {
      throw ValidationError(path + ": overlaps an earlier event on pid " +
                            std::to_string(pid) + " tid " +
                            std::to_string(tid));
    }
    end = std::max(end, ts + dur);
  }
}

std::string activity_to_json(const ActivityReport& report) {
  nlohmann::json devices = nlohmann::json::array();
  for (const DeviceActivity& device : report.per_device) {
    nlohmann::json entry;
    entry["rank"] = device.rank;
    entry["busy_us"] = to_micros(device.busy);
    entry["first_start_us"] = to_micros(device.first_start);
    entry["last_end_us"] = to_micros(device.last_end);
    entry["utilization"] = device.utilization;
    nlohmann::json idle = nlohmann::json::array();
    for (const auto& [start, end] : device.idle_spans) {
      idle.push_back({{"start_us", to_micros(start)},
                      {"end_us", to_micros(end)}});
    }
    entry["idle_spans"] = std::move(idle);
    devices.push_back(std::move(entry));
  }
  nlohmann::json document;
  document["makespan_us"] = to_micros(report.makespan);
  document["devices"] = std::move(devices);
  return document.dump(2) + "\n";
}

std::string bubbles_to_json(const BubbleReport& report) {
  nlohmann::json bubbles = nlohmann::json::array();
  for (const Bubble& bubble : report.bubbles) {
    nlohmann::json entry;
    entry["rank"] = bubble.rank;
    entry["stage"] = bubble.stage;
    entry["start_us"] = to_micros(bubble.start);
    entry["end_us"] = to_micros(bubble.end);
    entry["kind"] = to_string(bubble.kind);
    bubbles.push_back(std::move(entry));
  }
  nlohmann::json document;
  document["makespan_us"] = to_micros(report.makespan);
  document["total_bubble_us"] = to_micros(report.total_bubble_time);
  document["bubbles"] = std::move(bubbles);
  return document.dump(2) + "\n";
}

std::string stage_report_to_json(const StageReport& report) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const StageTaskTimes& task : report.tasks) {
    nlohmann::json entry;
    entry["stage"] = task.stage;
    entry["micro_batch"] = task.micro_batch;
    entry["phase"] = to_string(task.phase);
    entry["start_us"] = to_micros(task.start);
    entry["end_us"] = to_micros(task.end);
    entry["ranks"] = task.ranks;
    tasks.push_back(std::move(entry));
  }
  nlohmann::json document;
  document["tasks"] = std::move(tasks);
  return document.dump(2) + "\n";
}

}  // namespace hybridsim
