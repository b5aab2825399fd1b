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

#include "hybridsim/event.hpp"

#include <charconv>
#include <sstream>

#include "hybridsim/error.hpp"

namespace hybridsim {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("event key: bad " + what + " \"" +
                          std::string(text) + "\"");
  }
  return value;
}

EventKind kind_from_string(std::string_view text) {
  if (text == "compute") return EventKind::kCompute;
  if (text == "p2p") return EventKind::kP2P;
  if (text == "allreduce") return EventKind::kAllReduce;
  throw ValidationError("event key: unknown kind \"" + std::string(text) +
                        "\"");
}

Phase phase_from_string(std::string_view text) {
  if (text == "fwd") return Phase::kForward;
  if (text == "bwd") return Phase::kBackward;
  if (text == "none") return Phase::kNone;
  throw ValidationError("event key: unknown phase \"" + std::string(text) +
                        "\"");
}

Locality locality_from_string(std::string_view text) {
  if (text == "intra") return Locality::kIntraNode;
  if (text == "inter") return Locality::kInterNode;
  if (text == "mixed") return Locality::kMixed;
  if (text == "none") return Locality::kNone;
  throw ValidationError("event key: unknown locality \"" + std::string(text) +
                        "\"");
}

std::string shape_to_string(const std::vector<std::int64_t>& shape) {
  if (shape.empty()) return "-";
  std::ostringstream out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << 'x';
    out << shape[i];
  }
  return out.str();
}

std::vector<std::int64_t> shape_from_string(std::string_view text) {
  if (text == "-") return {};
  std::vector<std::int64_t> shape;
  for (std::string_view dim : split(text, 'x')) {
    shape.push_back(parse_number<std::int64_t>(dim, "shape dimension"));
  }
  return shape;
}

}  // namespace

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kCompute:
      return "compute";
    case EventKind::kP2P:
      return "p2p";
    case EventKind::kAllReduce:
      return "allreduce";
  }
  throw InternalError("unhandled EventKind value");
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::kForward:
      return "fwd";
    case Phase::kBackward:
      return "bwd";
    case Phase::kNone:
      return "none";
  }
  throw InternalError("unhandled Phase value");
}

std::string to_string(Locality locality) {
  switch (locality) {
    case Locality::kIntraNode:
      return "intra";
    case Locality::kInterNode:
      return "inter";
    case Locality::kMixed:
      return "mixed";
    case Locality::kNone:
      return "none";
  }
  throw InternalError("unhandled Locality value");
}

std::string EventKey::canonical() const {
  std::ostringstream out;
  out << to_string(kind) << '|' << op_name << '|' << to_string(phase) << '|'
      << shape_to_string(input_shape) << '|' << payload_bytes << '|'
      << group_size << '|' << to_string(locality);
  return out.str();
}

EventKey EventKey::from_canonical(std::string_view text) {
  const std::vector<std::string_view> parts = split(text, '|');
  if (parts.size() != 7) {
    throw ValidationError("event key \"" + std::string(text) +
                          "\": expected 7 '|'-separated fields, got " +
                          std::to_string(parts.size()));
  }
  EventKey key;
  key.kind = kind_from_string(parts[0]);
  key.op_name = std::string(parts[1]);
  if (key.op_name.empty()) {
    throw ValidationError("event key \"" + std::string(text) +
                          "\": empty op name");
  }
  key.phase = phase_from_string(parts[2]);
  key.input_shape = shape_from_string(parts[3]);
  key.payload_bytes = parse_number<Bytes>(parts[4], "payload bytes");
  key.group_size = parse_number<int>(parts[5], "group size");
  key.locality = locality_from_string(parts[6]);
  return key;
}

void EventSet::add(const Event& event, std::uint64_t count) {
  if (event.key.op_name.find('|') != std::string::npos) {
    throw ValidationError("event op name \"" + event.key.op_name +
                          "\" must not contain '|'");
  }
  const std::string canon = event.key.canonical();
  auto it = events_.find(canon);
  if (it == events_.end()) {
    events_.emplace(canon, event);
  } else if (it->second.flops != event.flops) {
    throw ValidationError(
        "event \"" + canon +
        "\" generated twice with conflicting flops; give the layers "
        "distinct op kinds");
  }
  multiplicities_[canon] += count;
}

const Event* EventSet::find(const EventKey& key) const {
  const auto it = events_.find(key.canonical());
  return it == events_.end() ? nullptr : &it->second;
}

std::uint64_t EventSet::multiplicity(const EventKey& key) const {
  const auto it = multiplicities_.find(key.canonical());
  return it == multiplicities_.end() ? 0 : it->second;
}

std::uint64_t EventSet::total_instances() const {
  std::uint64_t total = 0;
  for (const auto& [canon, count] : multiplicities_) total += count;
  return total;
}

std::vector<std::int64_t> shard_shape(const LayerSpec& layer, int mp,
                                      std::int64_t micro_batch_size) {
  if (mp > 1 && !layer.mp_splittable) {
    throw ValidationError("layer \"" + layer.name +
                          "\": not splittable, cannot shard across mp = " +
                          std::to_string(mp));
  }
  if (layer.input_shape.empty()) {
    throw ValidationError("layer \"" + layer.name + "\": empty input shape");
  }
  if (layer.input_shape.back() % mp != 0) {
    throw ValidationError("layer \"" + layer.name +
                          "\": last input dimension " +
                          std::to_string(layer.input_shape.back()) +
                          " is not divisible by mp = " + std::to_string(mp));
  }
  std::vector<std::int64_t> out;
  out.reserve(layer.input_shape.size() + 1);
  out.push_back(micro_batch_size);
  out.insert(out.end(), layer.input_shape.begin(), layer.input_shape.end());
  out.back() /= mp;
  return out;
}

Locality classify_locality(std::span<const int> ranks,
                           const ValidatedPlan& plan) {
  if (ranks.size() < 2) return Locality::kNone;
  bool any_shared = false;
  bool any_split = false;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    for (std::size_t j = i + 1; j < ranks.size(); ++j) {
      if (plan.coord(ranks[i]).node_id == plan.coord(ranks[j]).node_id) {
        any_shared = true;
      } else {
        any_split = true;
      }
    }
  }
  if (any_shared && any_split) return Locality::kMixed;
  return any_split ? Locality::kInterNode : Locality::kIntraNode;
}

}  // namespace hybridsim
