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

#include "hybridsim/cost.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hybridsim/error.hpp"
#include "json_util.hpp"

namespace hybridsim {

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::kMeasured:
      return "measured";
    case Provenance::kExtrapolated:
      return "extrapolated";
    case Provenance::kAnalytical:
      return "analytical";
  }
  throw InternalError("unhandled Provenance value");
}

Provenance provenance_from_string(const std::string& text) {
  if (text == "measured") return Provenance::kMeasured;
  if (text == "extrapolated") return Provenance::kExtrapolated;
  if (text == "analytical") return Provenance::kAnalytical;
  throw ValidationError("unknown provenance \"" + text + "\"");
}

std::string to_string(MeasurementRole role) {
  switch (role) {
    case MeasurementRole::kSender:
      return "sender";
    case MeasurementRole::kReceiver:
      return "receiver";
    case MeasurementRole::kSingle:
      return "single";
  }
  throw InternalError("unhandled MeasurementRole value");
}

MeasurementRole measurement_role_from_string(const std::string& text) {
  if (text == "sender") return MeasurementRole::kSender;
  if (text == "receiver") return MeasurementRole::kReceiver;
  if (text == "single") return MeasurementRole::kSingle;
  throw ValidationError("unknown measurement role \"" + text + "\"");
}

void CostTable::insert(const EventKey& key, const CostEntry& entry) {
  if (!(entry.elapsed > 0.0)) {
    throw ValidationError("cost for \"" + key.canonical() +
                          "\" must be positive");
  }
  entries_[key.canonical()] = entry;
}

const CostEntry* CostTable::find(const EventKey& key) const {
  const auto it = entries_.find(key.canonical());
  return it == entries_.end() ? nullptr : &it->second;
}

std::string CostTable::to_json() const {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [canon, entry] : entries_) {
    nlohmann::json record;
    record["key"] = canon;
    record["elapsed_us"] =
        static_cast<std::int64_t>(std::llround(entry.elapsed *
                                               kMicrosPerSecond));
    record["provenance"] = to_string(entry.provenance);
    if (entry.base_group_size != 0) {
      record["base_group_size"] = entry.base_group_size;
    }
    records.push_back(std::move(record));
  }
  nlohmann::json document;
  document["cost_table"] = std::move(records);
  return document.dump(2) + "\n";
}

CostTable CostTable::from_json(const std::string& text) {
  namespace ju = jsonutil;
  const ju::json document = ju::parse(text, "cost table");
  ju::require_object(document, "cost table");
  ju::reject_unknown_keys(document, "cost table", {"cost_table"});
  const ju::json& records =
      ju::require_array(ju::require_key(document, "cost table", "cost_table"),
                        "cost_table");

  CostTable table;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "cost_table[" + std::to_string(i) + "]";
    const ju::json& record = ju::require_object(records[i], path);
    ju::reject_unknown_keys(record, path,
                            {"key", "elapsed_us", "provenance",
                             "base_group_size"});
    const EventKey key =
        EventKey::from_canonical(ju::get_string(record, path, "key"));
    CostEntry entry;
    const std::int64_t micros = ju::get_integer(record, path, "elapsed_us");
    if (micros <= 0) {
      throw ValidationError(path + ".elapsed_us: must be positive");
    }
    entry.elapsed = static_cast<Seconds>(micros) / kMicrosPerSecond;
    entry.provenance =
        provenance_from_string(ju::get_string(record, path, "provenance"));
    if (record.contains("base_group_size")) {
      const std::int64_t base =
          ju::get_integer(record, path, "base_group_size");
      if (base < 0) {
        throw ValidationError(path + ".base_group_size: must be non-negative");
      }
      entry.base_group_size = static_cast<int>(base);
    }
    table.insert(key, entry);
  }
  return table;
}

Seconds aggregate_samples(std::span<const Seconds> samples,
                          SampleAggregate aggregate) {
  if (samples.empty()) {
    throw ValidationError("cannot aggregate an empty sample list");
  }
  std::vector<Seconds> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  switch (aggregate) {
    case SampleAggregate::kMedian:
      if (n % 2 == 1) return sorted[n / 2];
      return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
    case SampleAggregate::kMean: {
      Seconds sum = 0.0;
      for (Seconds s : sorted) sum += s;
      return sum / static_cast<Seconds>(n);
    }
    case SampleAggregate::kP95: {
      const std::size_t rank = static_cast<std::size_t>(
          std::ceil(0.95 * static_cast<double>(n)));
      return sorted[rank - 1];
    }
  }
  throw InternalError("unhandled SampleAggregate value");
}

Seconds ingest_p2p(const RawMeasurement& send, const RawMeasurement& recv,
                   SampleAggregate aggregate) {
  if (send.key != recv.key) {
    throw ValidationError("p2p sender and receiver measurements disagree: \"" +
                          send.key.canonical() + "\" vs \"" +
                          recv.key.canonical() + "\"");
  }
  if (send.role != MeasurementRole::kSender) {
    throw ValidationError("p2p ingest: first argument must have role sender");
  }
  if (recv.role != MeasurementRole::kReceiver) {
    throw ValidationError(
        "p2p ingest: second argument must have role receiver");
  }
  const Seconds sent = aggregate_samples(send.samples, aggregate);
  const Seconds received = aggregate_samples(recv.samples, aggregate);
  return std::min(sent, received);
}

double ring_transfer_factor(int n) {
  if (n < 2) {
    throw ValidationError("all-reduce group size must be at least 2, got " +
                          std::to_string(n));
  }
  return 2.0 * (n - 1) / n;
}

Seconds extrapolate_allreduce(Seconds measured, int n0, int n) {
  if (n0 < 2 || n0 > 8) {
    throw ValidationError("extrapolation base group size must be in [2, 8], "
                          "got n0 = " + std::to_string(n0));
  }
  if (n <= 8) {
    throw ValidationError("direct measurement required for all-reduce groups "
                          "of 8 or fewer, got n = " + std::to_string(n));
  }
  if (!(measured > 0.0)) {
    throw ValidationError("extrapolation base elapsed must be positive");
  }
  return measured * (ring_transfer_factor(n) / ring_transfer_factor(n0));
}

Seconds analytical_cost(const Event& event, const ClusterSpec& cluster) {
  const EventKey& key = event.key;
  switch (key.kind) {
    case EventKind::kCompute:
      return event.flops /
             (cluster.device_peak_flops * cluster.device_efficiency);
    case EventKind::kP2P:
    case EventKind::kAllReduce: {
      double bandwidth = 0.0;
      Seconds latency = 0.0;
      switch (key.locality) {
        case Locality::kIntraNode:
          bandwidth = cluster.intra_node_bandwidth;
          latency = cluster.intra_node_latency;
          break;
        case Locality::kInterNode:
        case Locality::kMixed:
          // A collective straddling nodes is gated by the slower link.
          bandwidth = cluster.inter_node_bandwidth;
          latency = cluster.inter_node_latency;
          break;
        case Locality::kNone:
          throw ValidationError("communication event \"" + key.canonical() +
                                "\" has no locality");
      }
      const double payload = static_cast<double>(key.payload_bytes);
      if (key.kind == EventKind::kP2P) {
        return latency + payload / bandwidth;
      }
      return latency +
             ring_transfer_factor(key.group_size) * payload / bandwidth;
    }
  }
  throw InternalError("unhandled EventKind value");
}

CostResolver::CostResolver(const CostTable& table, const ClusterSpec& cluster,
                           CostPolicy policy)
    : table_(&table), cluster_(cluster), policy_(policy) {}

ResolvedCost CostResolver::resolve(const Event& event) const {
  if (const CostEntry* entry = table_->find(event.key)) {
    return ResolvedCost{entry->elapsed, entry->provenance};
  }

  if (event.key.kind == EventKind::kAllReduce && event.key.group_size > 8) {
    for (int base = 8; base >= 2; --base) {
      EventKey base_key = event.key;
      base_key.group_size = base;
      if (const CostEntry* entry = table_->find(base_key)) {
        return ResolvedCost{
            extrapolate_allreduce(entry->elapsed, base, event.key.group_size),
            Provenance::kExtrapolated};
      }
    }
  }

  if (policy_ == CostPolicy::kAnalyticalFallback) {
    return ResolvedCost{analytical_cost(event, cluster_),
                        Provenance::kAnalytical};
  }

  throw ValidationError(
      "no cost for event \"" + event.key.canonical() +
      "\"; measure it or run with the analytical fallback enabled");
}

CostTable ingest_measurements(const std::vector<RawMeasurement>& measurements,
                              SampleAggregate aggregate) {
  struct Bucket {
    std::vector<Seconds> sender;
    std::vector<Seconds> receiver;
    std::vector<Seconds> single;
    EventKey key;
  };
  std::map<std::string, Bucket> buckets;

  for (std::size_t i = 0; i < measurements.size(); ++i) {
    const RawMeasurement& m = measurements[i];
    const std::string path = "measurements[" + std::to_string(i) + "]";
    if (m.samples.empty()) {
      throw ValidationError(path + ": no samples for \"" +
                            m.key.canonical() + "\"");
    }
    for (Seconds s : m.samples) {
      if (!(s > 0.0)) {
        throw ValidationError(path + ": samples must be positive");
      }
    }
    const bool is_p2p = m.key.kind == EventKind::kP2P;
    if (is_p2p && m.role == MeasurementRole::kSingle) {
      throw ValidationError(path + ": p2p samples need role sender or "
                            "receiver");
    }
    if (!is_p2p && m.role != MeasurementRole::kSingle) {
      throw ValidationError(path + ": only p2p samples carry sender or "
                            "receiver roles");
    }
    Bucket& bucket = buckets[m.key.canonical()];
    bucket.key = m.key;
    switch (m.role) {
      case MeasurementRole::kSender:
        bucket.sender.insert(bucket.sender.end(), m.samples.begin(),
                             m.samples.end());
        break;
      case MeasurementRole::kReceiver:
        bucket.receiver.insert(bucket.receiver.end(), m.samples.begin(),
                               m.samples.end());
        break;
      case MeasurementRole::kSingle:
        bucket.single.insert(bucket.single.end(), m.samples.begin(),
                             m.samples.end());
        break;
    }
  }

  CostTable table;
  for (const auto& [canon, bucket] : buckets) {
    CostEntry entry;
    entry.provenance = Provenance::kMeasured;
    if (bucket.key.kind == EventKind::kP2P) {
      if (bucket.sender.empty()) {
        throw ValidationError("p2p \"" + canon +
                              "\": sender measurement required");
      }
      if (bucket.receiver.empty()) {
        throw ValidationError("p2p \"" + canon +
                              "\": receiver measurement required");
      }
      RawMeasurement send{bucket.key, MeasurementRole::kSender,
                          bucket.sender};
      RawMeasurement recv{bucket.key, MeasurementRole::kReceiver,
                          bucket.receiver};
      entry.elapsed = ingest_p2p(send, recv, aggregate);
    } else {
      entry.elapsed = aggregate_samples(bucket.single, aggregate);
    }
    if (bucket.key.kind == EventKind::kAllReduce &&
        bucket.key.group_size <= 8) {
      entry.base_group_size = bucket.key.group_size;
    }
    table.insert(bucket.key, entry);
  }
  return table;
}

std::vector<RawMeasurement> measurements_from_json(const std::string& text) {
  namespace ju = jsonutil;
  const ju::json document = ju::parse(text, "measurements");
  ju::require_object(document, "measurements");
  ju::reject_unknown_keys(document, "measurements", {"measurements"});
  const ju::json& records = ju::require_array(
      ju::require_key(document, "measurements", "measurements"),
      "measurements");

  std::vector<RawMeasurement> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "measurements[" + std::to_string(i) + "]";
    const ju::json& record = ju::require_object(records[i], path);
    ju::reject_unknown_keys(record, path, {"key", "role", "samples_us"});
    RawMeasurement m;
    m.key = EventKey::from_canonical(ju::get_string(record, path, "key"));
    m.role =
        measurement_role_from_string(ju::get_string(record, path, "role"));
    const ju::json& samples = ju::require_array(
        ju::require_key(record, path, "samples_us"), path + ".samples_us");
    for (std::size_t s = 0; s < samples.size(); ++s) {
      if (!samples[s].is_number_integer()) {
        throw ValidationError(path + ".samples_us[" + std::to_string(s) +
                              "]: expected an integer");
      }
      m.samples.push_back(
          static_cast<Seconds>(samples[s].get<std::int64_t>()) /
          kMicrosPerSecond);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string measurements_to_json(const std::vector<RawMeasurement>& list) {
  nlohmann::json records = nlohmann::json::array();
  for (const RawMeasurement& m : list) {
    nlohmann::json record;
    record["key"] = m.key.canonical();
    record["role"] = to_string(m.role);
    nlohmann::json samples = nlohmann::json::array();
    for (Seconds s : m.samples) {
      samples.push_back(
          static_cast<std::int64_t>(std::llround(s * kMicrosPerSecond)));
    }
    record["samples_us"] = std::move(samples);
    records.push_back(std::move(record));
  }
  nlohmann::json document;
  document["measurements"] = std::move(records);
  return document.dump(2) + "\n";
}

}  // namespace hybridsim
