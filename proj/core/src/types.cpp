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

#include "hybridsim/types.hpp"

#include <set>
#include <sstream>

#include "hybridsim/error.hpp"

namespace hybridsim {

Bytes ModelSpec::total_param_bytes() const {
  Bytes total = 0;
  for (const LayerSpec& layer : layers) total += layer.param_bytes;
  return total;
}

std::string to_string(PipelineAlgorithm algorithm) {
  switch (algorithm) {
    case PipelineAlgorithm::kGPipe:
      return "gpipe";
    case PipelineAlgorithm::kDapple:
      return "dapple";
    case PipelineAlgorithm::kSequential:
      return "sequential";
  }
  throw InternalError("unhandled PipelineAlgorithm value");
}

PipelineAlgorithm pipeline_algorithm_from_string(const std::string& text) {
  if (text == "gpipe") return PipelineAlgorithm::kGPipe;
  if (text == "dapple") return PipelineAlgorithm::kDapple;
  if (text == "sequential") return PipelineAlgorithm::kSequential;
  throw ValidationError("unknown pipeline algorithm \"" + text +
                        "\"; expected gpipe, dapple, or sequential");
}

std::string format_strategy(const StrategyConfig& strategy) {
  std::ostringstream out;
  out << strategy.mp << "M" << strategy.pp << "P" << strategy.dp << "D";
  return out.str();
}

void check_model(const ModelSpec& model) {
  if (model.name.empty()) {
    throw ValidationError("model.name: must not be empty");
  }
  if (model.global_batch_size <= 0) {
    throw ValidationError("model.global_batch_size: must be positive");
  }
  if (model.layers.empty()) {
    throw ValidationError("model.layers: must contain at least one layer");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const LayerSpec& layer = model.layers[i];
    const std::string prefix = "model.layers[" + std::to_string(i) + "].";
    if (layer.name.empty()) {
      throw ValidationError(prefix + "name: must not be empty");
    }
    if (!names.insert(layer.name).second) {
      throw ValidationError(prefix + "name: duplicate layer name \"" +
                            layer.name + "\"");
    }
    if (layer.op_kind.empty()) {
      throw ValidationError(prefix + "op_kind: must not be empty");
    }
    if (layer.op_kind.find('|') != std::string::npos) {
      throw ValidationError(prefix + "op_kind: must not contain '|'");
    }
    if (layer.fwd_flops < 0.0) {
      throw ValidationError(prefix + "fwd_flops: must be non-negative");
    }
    if (layer.bwd_flops < 0.0) {
      throw ValidationError(prefix + "bwd_flops: must be non-negative");
    }
    if (layer.input_shape.empty()) {
      throw ValidationError(prefix + "input_shape: must not be empty");
    }
    for (std::size_t d = 0; d < layer.input_shape.size(); ++d) {
      if (layer.input_shape[d] <= 0) {
        throw ValidationError(prefix + "input_shape[" + std::to_string(d) +
                              "]: dimensions must be positive");
      }
    }
  }
}

void check_cluster(const ClusterSpec& cluster,
                   std::vector<std::string>* warnings) {
  if (cluster.num_nodes <= 0) {
    throw ValidationError("cluster.num_nodes: must be positive");
  }
  if (cluster.devices_per_node <= 0) {
    throw ValidationError("cluster.devices_per_node: must be positive");
  }
  if (cluster.intra_node_bandwidth <= 0.0) {
    throw ValidationError("cluster.intra_node_bandwidth: must be positive");
  }
  if (cluster.inter_node_bandwidth <= 0.0) {
    throw ValidationError("cluster.inter_node_bandwidth: must be positive");
  }
  if (cluster.intra_node_latency < 0.0) {
    throw ValidationError("cluster.intra_node_latency: must be non-negative");
  }
  if (cluster.inter_node_latency < 0.0) {
    throw ValidationError("cluster.inter_node_latency: must be non-negative");
  }
  if (cluster.device_peak_flops <= 0.0) {
    throw ValidationError("cluster.device_peak_flops: must be positive");
  }
  if (cluster.device_efficiency <= 0.0 || cluster.device_efficiency > 1.0) {
    throw ValidationError("cluster.device_efficiency: must be in (0, 1]");
  }
  if (warnings != nullptr &&
      cluster.inter_node_bandwidth > cluster.intra_node_bandwidth) {
    warnings->push_back(
        "cluster: inter-node bandwidth exceeds intra-node bandwidth; nodes "
        "are usually faster inside than across");
  }
}

void check_strategy(const StrategyConfig& strategy) {
  if (strategy.mp <= 0) {
    throw ValidationError("strategy.mp: must be positive");
  }
  if (strategy.pp <= 0) {
    throw ValidationError("strategy.pp: must be positive");
  }
  if (strategy.dp <= 0) {
    throw ValidationError("strategy.dp: must be positive");
  }
  if (strategy.micro_batch_size <= 0) {
    throw ValidationError("strategy.micro_batch_size: must be positive");
  }
  const bool sequential =
      strategy.pipeline_algorithm == PipelineAlgorithm::kSequential;
  if (sequential != (strategy.pp == 1)) {
    throw ValidationError(
        "strategy.pipeline_algorithm: sequential execution and pp == 1 "
        "imply each other; got " +
        to_string(strategy.pipeline_algorithm) + " with pp = " +
        std::to_string(strategy.pp));
  }
}

}  // namespace hybridsim
