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

#include <gtest/gtest.h>

#include <vector>

#include "fixtures.hpp"
#include "hybridsim/error.hpp"

namespace hybridsim {
namespace {

using testing::flat_cluster;

EventKey allreduce_key(int group, Locality locality = Locality::kIntraNode,
                       Bytes payload = 1 << 20) {
  EventKey key;
  key.kind = EventKind::kAllReduce;
  key.op_name = "allreduce";
  key.phase = Phase::kForward;
  key.input_shape = {1, 8, 64};
  key.payload_bytes = payload;
  key.group_size = group;
  key.locality = locality;
  return key;
}

EventKey p2p_key(Locality locality = Locality::kIntraNode,
                 Bytes payload = 1 << 20) {
  EventKey key;
  key.kind = EventKind::kP2P;
  key.op_name = "p2p";
  key.phase = Phase::kForward;
  key.input_shape = {1, 8, 64};
  key.payload_bytes = payload;
  key.group_size = 2;
  key.locality = locality;
  return key;
}

TEST(AggregateSamples, MedianOfOddAndEvenCounts) {
  const std::vector<Seconds> odd = {3.0, 1.0, 2.0};
  EXPECT_DOUBLE_EQ(aggregate_samples(odd, SampleAggregate::kMedian), 2.0);
  const std::vector<Seconds> even = {4.0, 1.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(aggregate_samples(even, SampleAggregate::kMedian), 2.5);
}

TEST(AggregateSamples, MeanAndTailPercentile) {
  const std::vector<Seconds> samples = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(aggregate_samples(samples, SampleAggregate::kMean), 2.5);
  EXPECT_DOUBLE_EQ(aggregate_samples(samples, SampleAggregate::kP95), 4.0);
  EXPECT_THROW(aggregate_samples({}, SampleAggregate::kMedian),
               ValidationError);
}

TEST(IngestP2p, TakesTheSmallerAggregatedSide) {
  const EventKey key = p2p_key();
  const RawMeasurement send{key, MeasurementRole::kSender,
                            {4.0e-3, 5.0e-3, 6.0e-3}};
  const RawMeasurement recv{key, MeasurementRole::kReceiver,
                            {2.0e-3, 3.0e-3, 10.0e-3}};
  EXPECT_DOUBLE_EQ(ingest_p2p(send, recv, SampleAggregate::kMedian), 3.0e-3);
}

TEST(IngestP2p, SymmetricAndReversedSides) {
  const EventKey key = p2p_key();
  const RawMeasurement send{key, MeasurementRole::kSender, {2.0e-3}};
  const RawMeasurement recv{key, MeasurementRole::kReceiver, {2.0e-3}};
  EXPECT_DOUBLE_EQ(ingest_p2p(send, recv), 2.0e-3);

  const RawMeasurement slow_recv{key, MeasurementRole::kReceiver, {4.0e-3}};
  const RawMeasurement fast_send{key, MeasurementRole::kSender, {1.0e-3}};
  EXPECT_DOUBLE_EQ(ingest_p2p(fast_send, slow_recv), 1.0e-3);
}

TEST(RingTransferFactor, KnownValues) {
  EXPECT_DOUBLE_EQ(ring_transfer_factor(2), 1.0);
  EXPECT_DOUBLE_EQ(ring_transfer_factor(4), 1.5);
  EXPECT_DOUBLE_EQ(ring_transfer_factor(8), 1.75);
  EXPECT_THROW(ring_transfer_factor(1), ValidationError);
}

TEST(ExtrapolateAllReduce, DoublesTheGroupFromEight) {
  EXPECT_DOUBLE_EQ(extrapolate_allreduce(7.0e-3, 8, 16), 7.5e-3);
}

TEST(ExtrapolateAllReduce, SmallGroupsDemandDirectMeasurement) {
  try {
    extrapolate_allreduce(7.0e-3, 8, 8);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& error) {
    EXPECT_NE(std::string(error.what()).find("direct measurement required"),
              std::string::npos);
  }
  EXPECT_THROW(extrapolate_allreduce(7.0e-3, 1, 16), ValidationError);
  EXPECT_THROW(extrapolate_allreduce(7.0e-3, 16, 32), ValidationError);
  EXPECT_THROW(extrapolate_allreduce(0.0, 8, 16), ValidationError);
}

TEST(AnalyticalCost, ComputeUsesDeratedPeak) {
  Event event;
  event.key.kind = EventKind::kCompute;
  event.key.op_name = "matmul";
  event.key.phase = Phase::kForward;
  event.key.input_shape = {1, 8};
  event.flops = 1.0e10;
  const ClusterSpec cluster = flat_cluster(1, 1);
  EXPECT_DOUBLE_EQ(analytical_cost(event, cluster), 2.0e-4);
}

TEST(AnalyticalCost, TransferUsesLatencyPlusBandwidth) {
  Event event;
  event.key = p2p_key(Locality::kInterNode, 100000000);
  const ClusterSpec cluster = flat_cluster(2, 1);
  EXPECT_DOUBLE_EQ(analytical_cost(event, cluster), 10.01e-3);
}

TEST(AnalyticalCost, CollectiveUsesRingFactor) {
  Event event;
  event.key = allreduce_key(8, Locality::kIntraNode, 64000000);
  const ClusterSpec cluster = flat_cluster(1, 8);
  EXPECT_DOUBLE_EQ(analytical_cost(event, cluster), 2.245e-3);
}

TEST(AnalyticalCost, MixedLocalityPricedAtInterNodeLink) {
  Event event;
  event.key = allreduce_key(8, Locality::kMixed, 64000000);
  const ClusterSpec cluster = flat_cluster(2, 4);
  Event inter = event;
  inter.key.locality = Locality::kInterNode;
  EXPECT_DOUBLE_EQ(analytical_cost(event, cluster),
                   analytical_cost(inter, cluster));
}

TEST(CostResolver, TableHitWinsOverEverything) {
  CostTable table;
  CostEntry entry;
  entry.elapsed = 4.0e-3;
  table.insert(allreduce_key(32), entry);

  const CostResolver resolver(table, flat_cluster(4, 8), CostPolicy::kStrict);
  Event event;
  event.key = allreduce_key(32);
  const ResolvedCost resolved = resolver.resolve(event);
  EXPECT_DOUBLE_EQ(resolved.elapsed, 4.0e-3);
  EXPECT_EQ(resolved.provenance, Provenance::kMeasured);
}

TEST(CostResolver, ExtrapolatesLargeCollectiveFromMeasuredBase) {
  CostTable table;
  CostEntry entry;
  entry.elapsed = 4.0e-3;
  entry.base_group_size = 8;
  table.insert(allreduce_key(8), entry);

  const CostResolver resolver(table, flat_cluster(4, 8), CostPolicy::kStrict);
  Event event;
  event.key = allreduce_key(32);
  const ResolvedCost resolved = resolver.resolve(event);
  EXPECT_EQ(resolved.provenance, Provenance::kExtrapolated);
  EXPECT_DOUBLE_EQ(resolved.elapsed,
                   4.0e-3 * ((62.0 / 32.0) / (14.0 / 8.0)));
}

TEST(CostResolver, ScansBasesFromEightDownToTwo) {
  CostTable table;
  CostEntry entry;
  entry.elapsed = 3.0e-3;
  table.insert(allreduce_key(4), entry);

  const CostResolver resolver(table, flat_cluster(4, 8), CostPolicy::kStrict);
  Event event;
  event.key = allreduce_key(16);
  const ResolvedCost resolved = resolver.resolve(event);
  EXPECT_EQ(resolved.provenance, Provenance::kExtrapolated);
  EXPECT_DOUBLE_EQ(resolved.elapsed, extrapolate_allreduce(3.0e-3, 4, 16));
}

TEST(CostResolver, StrictPolicyNamesTheMissingKey) {
  const CostTable table;
  const CostResolver resolver(table, flat_cluster(1, 2), CostPolicy::kStrict);
  Event event;
  event.key = p2p_key();
  try {
    resolver.resolve(event);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& error) {
    EXPECT_NE(std::string(error.what()).find(event.key.canonical()),
              std::string::npos);
  }
}

TEST(CostResolver, FallbackPolicyUsesAnalyticalEstimate) {
  const CostTable table;
  const ClusterSpec cluster = flat_cluster(1, 2);
  const CostResolver resolver(table, cluster,
                              CostPolicy::kAnalyticalFallback);
  Event event;
  event.key = p2p_key();
  const ResolvedCost resolved = resolver.resolve(event);
  EXPECT_EQ(resolved.provenance, Provenance::kAnalytical);
  EXPECT_DOUBLE_EQ(resolved.elapsed, analytical_cost(event, cluster));
}

TEST(IngestMeasurements, PairsTransferSidesAndMarksCollectiveBases) {
  std::vector<RawMeasurement> measurements;
  measurements.push_back({p2p_key(), MeasurementRole::kSender,
                          {5.0e-3, 5.0e-3, 5.0e-3}});
  measurements.push_back({p2p_key(), MeasurementRole::kReceiver,
                          {3.0e-3, 3.0e-3, 3.0e-3}});
  measurements.push_back({allreduce_key(8), MeasurementRole::kSingle,
                          {4.0e-3}});

  const CostTable table =
      ingest_measurements(measurements, SampleAggregate::kMedian);
  ASSERT_EQ(table.size(), 2u);
  const CostEntry* transfer = table.find(p2p_key());
  ASSERT_NE(transfer, nullptr);
  EXPECT_DOUBLE_EQ(transfer->elapsed, 3.0e-3);
  const CostEntry* collective = table.find(allreduce_key(8));
  ASSERT_NE(collective, nullptr);
  EXPECT_EQ(collective->base_group_size, 8);
}

TEST(IngestMeasurements, TransferNeedsBothSides) {
  std::vector<RawMeasurement> measurements;
  measurements.push_back({p2p_key(), MeasurementRole::kSender, {5.0e-3}});
  EXPECT_THROW(ingest_measurements(measurements, SampleAggregate::kMedian),
               ValidationError);
}

TEST(CostTable, JsonRoundTripKeepsEntries) {
  CostTable table;
  CostEntry entry;
  entry.elapsed = 4.0e-3;
  entry.base_group_size = 8;
  table.insert(allreduce_key(8), entry);
  CostEntry other;
  other.elapsed = 2.5e-4;
  EventKey compute;
  compute.kind = EventKind::kCompute;
  compute.op_name = "matmul";
  compute.phase = Phase::kBackward;
  compute.input_shape = {1, 8, 64};
  table.insert(compute, other);

  const CostTable parsed = CostTable::from_json(table.to_json());
  ASSERT_EQ(parsed.size(), 2u);
  const CostEntry* collective = parsed.find(allreduce_key(8));
  ASSERT_NE(collective, nullptr);
  EXPECT_DOUBLE_EQ(collective->elapsed, 4.0e-3);
  EXPECT_EQ(collective->base_group_size, 8);
  ASSERT_NE(parsed.find(compute), nullptr);
  EXPECT_DOUBLE_EQ(parsed.find(compute)->elapsed, 2.5e-4);
}

TEST(Measurements, JsonRoundTripKeepsSamples) {
  std::vector<RawMeasurement> measurements;
  measurements.push_back({p2p_key(), MeasurementRole::kSender,
                          {5.0e-3, 4.0e-3}});
  measurements.push_back({allreduce_key(8), MeasurementRole::kSingle,
                          {4.0e-3}});
  const std::vector<RawMeasurement> parsed =
      measurements_from_json(measurements_to_json(measurements));
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0].role, MeasurementRole::kSender);
  ASSERT_EQ(parsed[0].samples.size(), 2u);
  EXPECT_DOUBLE_EQ(parsed[0].samples[0], 5.0e-3);
  EXPECT_EQ(parsed[1].key.canonical(), allreduce_key(8).canonical());
}

}  // namespace
}  // namespace hybridsim
