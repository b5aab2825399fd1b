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

#include "hybridsim/timeline.hpp"

#include <algorithm>
#include <cmath>

#include "hybridsim/error.hpp"
#include "json_util.hpp"
#include "spec_json.hpp"

namespace hybridsim {

Seconds Timeline::makespan() const {
  Seconds latest = 0.0;
  for (const auto& lane : per_rank) {
    for (const TimedInstance& instance : lane) {
      latest = std::max(latest, instance.end);
    }
  }
  return latest;
}

std::uint64_t Timeline::total_instances() const {
  std::uint64_t total = 0;
  for (const auto& lane : per_rank) total += lane.size();
  return total;
}

std::string timeline_to_json(const Timeline& timeline) {
  std::vector<const TimedInstance*> ordered;
  ordered.reserve(timeline.total_instances());
  for (const auto& lane : timeline.per_rank) {
    for (const TimedInstance& instance : lane) {
      ordered.push_back(&instance);
    }
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TimedInstance* a, const TimedInstance* b) {
                     if (a->rank != b->rank) return a->rank < b->rank;
                     if (a->start != b->start) return a->start < b->start;
                     return a->event->key.canonical() <
                            b->event->key.canonical();
                   });
  nlohmann::json records = nlohmann::json::array();
  for (const TimedInstance* instance : ordered) {
    nlohmann::json record;
    record["rank"] = instance->rank;
    record["key"] = instance->event->key.canonical();
    record["start_us"] = static_cast<std::int64_t>(
        std::llround(instance->start * kMicrosPerSecond));
    record["end_us"] = static_cast<std::int64_t>(
        std::llround(instance->end * kMicrosPerSecond));
    record["micro_batch"] = instance->micro_batch;
    record["stage"] = instance->stage;
    record["phase"] = to_string(instance->event->key.phase);
    records.push_back(std::move(record));
  }
  nlohmann::json plan;
  plan["model"] = model_to_json_obj(timeline.plan.model);
  plan["cluster"] = cluster_to_json_obj(timeline.plan.cluster);
  plan["strategy"] = strategy_to_json_obj(timeline.plan.strategy);
  nlohmann::json document;
  document["plan"] = std::move(plan);
  document["timeline"] = std::move(records);
  return document.dump(2) + "\n";
}

Timeline timeline_from_json(const std::string& text) {
  namespace ju = jsonutil;
  const ju::json document = ju::parse(text, "timeline");
  ju::require_object(document, "timeline");
  ju::reject_unknown_keys(document, "timeline document",
                          {"plan", "timeline"});
  const ju::json& plan_obj =
      ju::require_object(ju::require_key(document, "timeline", "plan"),
                         "plan");
  ju::reject_unknown_keys(plan_obj, "plan", {"model", "cluster", "strategy"});

  const ModelSpec model = model_from_json_obj(
      ju::require_key(plan_obj, "plan", "model"), "plan.model");
  const ClusterSpec cluster = cluster_from_json_obj(
      ju::require_key(plan_obj, "plan", "cluster"), "plan.cluster", nullptr);
  const StrategyConfig strategy = strategy_from_json_obj(
      ju::require_key(plan_obj, "plan", "strategy"), "plan.strategy");

  Timeline timeline;
  timeline.plan = validate_plan(model, cluster, strategy);
  timeline.per_rank.resize(timeline.plan.ranks.size());

  const ju::json& records = ju::require_array(
      ju::require_key(document, "timeline", "timeline"), "timeline");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "timeline[" + std::to_string(i) + "]";
    const ju::json& record = ju::require_object(records[i], path);
    ju::reject_unknown_keys(record, path,
                            {"rank", "key", "start_us", "end_us",
                             "micro_batch", "stage", "phase"});
    TimedInstance instance;
    instance.rank = static_cast<int>(ju::get_integer(record, path, "rank"));
    if (instance.rank < 0 ||
        instance.rank >= static_cast<int>(timeline.per_rank.size())) {
      throw ValidationError(path + ".rank: out of range");
    }
    auto event = std::make_shared<Event>();
    event->key =
        EventKey::from_canonical(ju::get_string(record, path, "key"));
    const std::string phase = ju::get_string(record, path, "phase");
    if (to_string(event->key.phase) != phase) {
      throw ValidationError(path + ".phase: \"" + phase +
                            "\" disagrees with the key");
    }
    instance.event = std::move(event);
    const std::int64_t start_us = ju::get_integer(record, path, "start_us");
    const std::int64_t end_us = ju::get_integer(record, path, "end_us");
    if (start_us < 0 || end_us < start_us) {
      throw ValidationError(path + ": start_us/end_us out of order");
    }
    instance.start = static_cast<Seconds>(start_us) / kMicrosPerSecond;
    instance.end = static_cast<Seconds>(end_us) / kMicrosPerSecond;
    instance.micro_batch = ju::get_integer(record, path, "micro_batch");
    instance.stage = static_cast<int>(ju::get_integer(record, path, "stage"));
    timeline.per_rank[instance.rank].push_back(std::move(instance));
  }
  for (auto& lane : timeline.per_rank) {
    std::stable_sort(lane.begin(), lane.end(),
                     [](const TimedInstance& a, const TimedInstance& b) {
                       return a.start < b.start;
                     });
  }
  return timeline;
}

}  // namespace hybridsim
