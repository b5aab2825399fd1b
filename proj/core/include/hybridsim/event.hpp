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

#ifndef HYBRIDSIM_EVENT_HPP_
#define HYBRIDSIM_EVENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsim/plan.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

enum class EventKind { kCompute, kP2P, kAllReduce };
enum class Phase { kForward, kBackward, kNone };
enum class Locality { kIntraNode, kInterNode, kMixed, kNone };

std::string to_string(EventKind kind);
std::string to_string(Phase phase);
std::string to_string(Locality locality);

// The deduplication identity of an event. Two runtime instances with equal
// keys are charged the same elapsed time, so a key carries exactly the
// attributes that determine cost: what runs, on what shape or payload, over
// how many participants, and across which interconnect.
struct EventKey {
  EventKind kind = EventKind::kCompute;
  std::string op_name;
  Phase phase = Phase::kNone;
  std::vector<std::int64_t> input_shape;  // compute only; empty otherwise
  Bytes payload_bytes = 0;                // communication only; 0 otherwise
  int group_size = 0;  // participants; 2 for p2p, 0 for compute
  Locality locality = Locality::kNone;

  bool operator==(const EventKey& other) const = default;

  // Lossless text form "kind|op|phase|shape|bytes|group|locality", e.g.
  // "compute|transformer_block|fwd|4x512x1024|0|0|none". The op name must
  // not contain '|'.
  std::string canonical() const;
  static EventKey from_canonical(std::string_view text);
};

// Event class plus the metadata needed to price it analytically and to
// explain it in reports. `flops` is per instance, already divided across
// tensor-parallel shards.
struct Event {
  EventKey key;
  double flops = 0.0;
  std::optional<int> source_layer;
  std::string description;
};

// Deduplicated events of one plan together with how many runtime instances
// each class stands for. Multiplicities count the device-side slots the
// default timeline materializes: senders hold p2p slots, receivers do not.
class EventSet {
 public:
  // Inserts or merges. Equal keys must agree on flops; source_layer keeps
  // the first layer encountered.
  void add(const Event& event, std::uint64_t count);

  const Event* find(const EventKey& key) const;
  std::uint64_t multiplicity(const EventKey& key) const;
  std::uint64_t total_instances() const;
  std::size_t size() const { return events_.size(); }

  // Deterministic: ordered by canonical key string.
  const std::map<std::string, Event>& events() const { return events_; }
  const std::map<std::string, std::uint64_t>& multiplicities() const {
    return multiplicities_;
  }

 private:
  std::map<std::string, Event> events_;
  std::map<std::string, std::uint64_t> multiplicities_;
};

// Shape one tensor-parallel shard of a layer sees for one micro-batch: the
// micro-batch size is prepended and the last dimension is divided by mp.
// Throws ValidationError when the layer cannot split that way.
std::vector<std::int64_t> shard_shape(const LayerSpec& layer, int mp,
                                      std::int64_t micro_batch_size);

// IntraNode when every rank in the group shares one node, InterNode when no
// two ranks do, Mixed otherwise. Empty and single-rank groups are kNone.
Locality classify_locality(std::span<const int> ranks,
                           const ValidatedPlan& plan);

}  // namespace hybridsim

#endif  // HYBRIDSIM_EVENT_HPP_
