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

#ifndef HYBRIDSIM_TYPES_HPP_
#define HYBRIDSIM_TYPES_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace hybridsim {

// All elapsed times and timestamps are seconds. Serialized files store
// integer microseconds; the conversion happens only at the file boundary.
using Seconds = double;
using Bytes = std::uint64_t;

constexpr double kMicrosPerSecond = 1e6;

// One operator in the training graph. Shapes are per sample; the batch
// dimension is prepended when events are generated.
struct LayerSpec {
  std::string name;
  std::string op_kind;
  Bytes param_bytes = 0;
  double fwd_flops = 0.0;
  double bwd_flops = 0.0;
  // Bytes of activation output per sample, which is also the payload a
  // tensor-parallel all-reduce for this layer moves per sample.
  Bytes output_activation_bytes = 0;
  std::vector<std::int64_t> input_shape;
  bool mp_splittable = false;
};

struct ModelSpec {
  std::string name;
  std::int64_t global_batch_size = 0;
  std::vector<LayerSpec> layers;

  Bytes total_param_bytes() const;
};

struct ClusterSpec {
  int num_nodes = 0;
  int devices_per_node = 0;
  double intra_node_bandwidth = 0.0;  // bytes per second
  double inter_node_bandwidth = 0.0;  // bytes per second
  Seconds intra_node_latency = 0.0;
  Seconds inter_node_latency = 0.0;
  double device_peak_flops = 0.0;  // flops per second
  double device_efficiency = 1.0;  // fraction of peak reached by compute

  int total_devices() const { return num_nodes * devices_per_node; }
};

enum class PipelineAlgorithm { kGPipe, kDapple, kSequential };

std::string to_string(PipelineAlgorithm algorithm);
PipelineAlgorithm pipeline_algorithm_from_string(const std::string& text);

// One point in the parallelization grid: mp-way tensor splitting, pp
// pipeline stages, dp data-parallel replicas.
struct StrategyConfig {
  int mp = 1;
  int pp = 1;
  int dp = 1;
  PipelineAlgorithm pipeline_algorithm = PipelineAlgorithm::kSequential;
  std::int64_t micro_batch_size = 1;
};

// Compact form, e.g. mp=2 pp=2 dp=4 prints as "2M2P4D".
std::string format_strategy(const StrategyConfig& strategy);

// Throw ValidationError on malformed specs. The message names the field.
void check_model(const ModelSpec& model);
void check_cluster(const ClusterSpec& cluster,
                   std::vector<std::string>* warnings = nullptr);
void check_strategy(const StrategyConfig& strategy);

}  // namespace hybridsim

#endif  // HYBRIDSIM_TYPES_HPP_
