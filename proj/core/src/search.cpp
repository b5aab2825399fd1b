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

#include "hybridsim/search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "hybridsim/analysis.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/modeler.hpp"
#include "hybridsim/plan.hpp"

namespace hybridsim {

std::vector<Candidate> enumerate_candidates(const ModelSpec& model,
                                            const ClusterSpec& cluster,
                                            const SearchSpace& space) {
  check_model(model);
  check_cluster(cluster);
  if (space.allowed_sizes.empty()) {
    throw ValidationError("search space: allowed_sizes must not be empty");
  }
  if (space.micro_batch_size <= 0) {
    throw ValidationError("search space: micro_batch_size must be positive");
  }
  std::set<int> sizes;
  for (int size : space.allowed_sizes) {
    if (size <= 0) {
      throw ValidationError("search space: allowed sizes must be positive");
    }
    sizes.insert(size);
  }

  const std::int64_t total = cluster.total_devices();
  const int max_pp = static_cast<int>(model.layers.size());
  std::vector<Candidate> candidates;
  for (int mp : sizes) {
    for (int pp : sizes) {
      for (int dp : sizes) {
        if (static_cast<std::int64_t>(mp) * pp * dp != total) continue;
        if (pp > max_pp) continue;
        if (model.global_batch_size %
                (static_cast<std::int64_t>(dp) * space.micro_batch_size) !=
            0) {
          continue;
        }
        candidates.push_back(Candidate{mp, pp, dp});
      }
    }
  }
  if (candidates.empty()) {
    throw ValidationError(
        "search space: no (mp, pp, dp) combination fits " +
        std::to_string(total) + " devices with the given sizes");
  }
  return candidates;
}

SearchResult grid_search(const ModelSpec& model, const ClusterSpec& cluster,
                         const CostTable& table, CostPolicy policy,
                         const SearchSpace& space, int num_threads) {
  const std::vector<Candidate> candidates =
      enumerate_candidates(model, cluster, space);

  std::vector<RankedStrategy> evaluated(candidates.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = candidates.size();

  const auto worker = [&]() {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= candidates.size()) return;
      {
        std::lock_guard<std::mutex> hold(error_mutex);
        if (first_error) return;
      }
      StrategyConfig strategy;
      const Candidate& candidate = candidates[index];
      strategy.mp = candidate.mp;
      strategy.pp = candidate.pp;
      strategy.dp = candidate.dp;
      strategy.micro_batch_size = space.micro_batch_size;
      strategy.pipeline_algorithm =
          candidate.pp == 1 ? PipelineAlgorithm::kSequential
                            : space.pipeline_algorithm;
      try {
        const ValidatedPlan plan = validate_plan(model, cluster, strategy);
        const Timeline timeline = simulate(plan, table, policy);
        RankedStrategy& slot = evaluated[index];
        slot.strategy = strategy;
        slot.batch_time = batch_time(timeline);
        slot.throughput = 1.0 / slot.batch_time;
      } catch (const ValidationError& error) {
        std::lock_guard<std::mutex> hold(error_mutex);
        if (index < first_error_index) {
          first_error = std::make_exception_ptr(ValidationError(
              "candidate " + format_strategy(strategy) + ": " +
              error.what()));
          first_error_index = index;
        }
        return;
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_mutex);
        if (index < first_error_index) {
          first_error = std::current_exception();
          first_error_index = index;
        }
        return;
      }
    }
  };

  int workers = num_threads > 0
                    ? num_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 0) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(candidates.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& thread : pool) thread.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SearchResult result;
  result.ranked = std::move(evaluated);
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const RankedStrategy& a, const RankedStrategy& b) {
              if (a.throughput != b.throughput) {
                return a.throughput > b.throughput;
              }
              return std::tie(a.strategy.mp, a.strategy.pp) <
                     std::tie(b.strategy.mp, b.strategy.pp);
            });
  result.speedup =
      result.ranked.front().throughput / result.ranked.back().throughput;
  return result;
}

}  // namespace hybridsim
