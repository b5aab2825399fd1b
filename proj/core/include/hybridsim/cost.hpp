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

#ifndef HYBRIDSIM_COST_HPP_
#define HYBRIDSIM_COST_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hybridsim/event.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

enum class Provenance { kMeasured, kExtrapolated, kAnalytical };

std::string to_string(Provenance provenance);
Provenance provenance_from_string(const std::string& text);

struct CostEntry {
  Seconds elapsed = 0.0;
  Provenance provenance = Provenance::kMeasured;
  // For all-reduce entries: group size the measurement was taken at. Zero
  // means the entry applies to its key's group size directly.
  int base_group_size = 0;
};

// Canonical-key-indexed elapsed times. Entries must be positive.
class CostTable {
 public:
  void insert(const EventKey& key, const CostEntry& entry);
  const CostEntry* find(const EventKey& key) const;
  std::size_t size() const { return entries_.size(); }

  const std::map<std::string, CostEntry>& entries() const { return entries_; }

  // File form: {"cost_table": [{key, elapsed_us, provenance,
  // base_group_size?}, ...]}, microseconds as integers.
  std::string to_json() const;
  static CostTable from_json(const std::string& text);

 private:
  std::map<std::string, CostEntry> entries_;
};

enum class MeasurementRole { kSender, kReceiver, kSingle };

std::string to_string(MeasurementRole role);
MeasurementRole measurement_role_from_string(const std::string& text);

// Raw profiler samples for one event class, as one side of the transfer
// for p2p and as the lone participant otherwise.
struct RawMeasurement {
  EventKey key;
  MeasurementRole role = MeasurementRole::kSingle;
  std::vector<Seconds> samples;
};

enum class SampleAggregate { kMedian, kMean, kP95 };

Seconds aggregate_samples(std::span<const Seconds> samples,
                          SampleAggregate aggregate);

// Elapsed time of a p2p transfer: the smaller of the aggregated sender and
// receiver times, which drops the side inflated by waiting on its peer.
Seconds ingest_p2p(const RawMeasurement& send, const RawMeasurement& recv,
                   SampleAggregate aggregate = SampleAggregate::kMedian);

// Fraction of the payload each rank moves in a ring all-reduce of n ranks.
double ring_transfer_factor(int n);

// Scales an all-reduce measured at group size n0 to group size n of equal
// payload by the ratio of ring transfer factors. Requires 2 <= n0 <= 8 < n;
// groups of 8 or fewer must be measured directly.
Seconds extrapolate_allreduce(Seconds measured, int n0, int n);

// Roofline-style estimate used when no measurement exists. Mixed-locality
// collectives are priced at the slower, inter-node link.
Seconds analytical_cost(const Event& event, const ClusterSpec& cluster);

enum class CostPolicy { kStrict, kAnalyticalFallback };

struct ResolvedCost {
  Seconds elapsed = 0.0;
  Provenance provenance = Provenance::kMeasured;
};

// Answers "how long does this event take" from the table, extrapolating
// large all-reduces from a measured base entry, and falling back to the
// analytical estimate only under kAnalyticalFallback. Unresolvable events
// raise ValidationError naming the canonical key.
class CostResolver {
 public:
  CostResolver(const CostTable& table, const ClusterSpec& cluster,
               CostPolicy policy);

  ResolvedCost resolve(const Event& event) const;
  Seconds elapsed(const Event& event) const { return resolve(event).elapsed; }

 private:
  const CostTable* table_;
  ClusterSpec cluster_;
  CostPolicy policy_;
};

// Builds a table from raw samples: aggregates each class, pairs p2p sender
// and receiver sides, and records all-reduce group sizes for extrapolation.
CostTable ingest_measurements(const std::vector<RawMeasurement>& measurements,
                              SampleAggregate aggregate);

// File form of raw samples: {"measurements": [{key, role, samples_us}, ...]}.
std::vector<RawMeasurement> measurements_from_json(const std::string& text);
std::string measurements_to_json(const std::vector<RawMeasurement>& list);

}  // namespace hybridsim

#endif  // HYBRIDSIM_COST_HPP_
