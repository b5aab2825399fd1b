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

#ifndef HYBRIDSIM_SEARCH_HPP_
#define HYBRIDSIM_SEARCH_HPP_

#include <cstdint>
#include <vector>

#include "hybridsim/cost.hpp"
#include "hybridsim/types.hpp"

namespace hybridsim {

struct SearchSpace {
  // Degrees each axis may take; the grid keeps triples whose product is
  // exactly total_devices.
  std::vector<int> allowed_sizes = {1, 2, 4, 8, 16};
  std::int64_t micro_batch_size = 1;
  PipelineAlgorithm pipeline_algorithm = PipelineAlgorithm::kDapple;
};

struct Candidate {
  int mp = 1;
  int pp = 1;
  int dp = 1;

  bool operator==(const Candidate& other) const = default;
};

// All (mp, pp, dp) triples from allowed_sizes with mp*pp*dp equal to the
// cluster size, pp at most the layer count, and the global batch divisible
// by dp * micro_batch_size. Ordered by mp, then pp. Throws ValidationError
// when no candidate survives.
std::vector<Candidate> enumerate_candidates(const ModelSpec& model,
                                            const ClusterSpec& cluster,
                                            const SearchSpace& space);

struct RankedStrategy {
  StrategyConfig strategy;
  Seconds batch_time = 0.0;
  double throughput = 0.0;  // batches per second
};

struct SearchResult {
  // Sorted by throughput descending; ties prefer smaller mp, then smaller
  // pp. ranked.front() is the recommendation.
  std::vector<RankedStrategy> ranked;
  // Best throughput over worst throughput.
  double speedup = 0.0;
};

// Simulates every candidate and ranks them. Candidates are independent, so
// they run on `num_threads` workers; results are deterministic regardless
// of thread count. num_threads <= 0 picks the hardware concurrency.
SearchResult grid_search(const ModelSpec& model, const ClusterSpec& cluster,
                         const CostTable& table, CostPolicy policy,
                         const SearchSpace& space, int num_threads = 0);

}  // namespace hybridsim

#endif  // HYBRIDSIM_SEARCH_HPP_
