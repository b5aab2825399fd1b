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

#include "hybridsim/spec_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "hybridsim/error.hpp"
#include "json_util.hpp"
#include "spec_json.hpp"

namespace hybridsim {
namespace {

namespace ju = jsonutil;

constexpr const char* kTopLevelKeys[] = {"model", "cluster", "strategy"};

// Input documents may bundle any subset of the known sections; a reader
// pulls out its own and ignores the siblings.
const ju::json& top_level_section(const ju::json& document,
                                  const char* section) {
  ju::require_object(document, "document");
  for (const auto& [key, value] : document.items()) {
    bool known = false;
    for (const char* name : kTopLevelKeys) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError("document: unknown key \"" + key + "\"");
    }
  }
  const auto it = document.find(section);
  if (it == document.end()) {
    throw ValidationError("document: missing section \"" +
                          std::string(section) + "\"");
  }
  return *it;
}

Bytes get_bytes(const ju::json& object, const std::string& path,
                const char* key) {
  const std::int64_t value = ju::get_integer(object, path, key);
  if (value < 0) {
    throw ValidationError(path + "." + key + ": must be non-negative");
  }
  return static_cast<Bytes>(value);
}

double get_non_negative_number(const ju::json& object, const std::string& path,
                               const char* key) {
  const double value = ju::get_number(object, path, key);
  if (value < 0.0) {
    throw ValidationError(path + "." + key + ": must be non-negative");
  }
  return value;
}

}  // namespace

nlohmann::json model_to_json_obj(const ModelSpec& model) {
  nlohmann::json layers = nlohmann::json::array();
  for (const LayerSpec& layer : model.layers) {
    nlohmann::json entry;
    entry["name"] = layer.name;
    entry["op_kind"] = layer.op_kind;
    entry["param_bytes"] = layer.param_bytes;
    entry["fwd_flops"] = layer.fwd_flops;
    entry["bwd_flops"] = layer.bwd_flops;
    entry["output_activation_bytes"] = layer.output_activation_bytes;
    entry["input_shape"] = layer.input_shape;
    entry["mp_splittable"] = layer.mp_splittable;
    layers.push_back(std::move(entry));
  }
  nlohmann::json object;
  object["name"] = model.name;
  object["global_batch_size"] = model.global_batch_size;
  object["layers"] = std::move(layers);
  return object;
}

ModelSpec model_from_json_obj(const nlohmann::json& object,
                              const std::string& path) {
  ju::require_object(object, path);
  ju::reject_unknown_keys(object, path,
                          {"name", "global_batch_size", "layers"});
  ModelSpec model;
  model.name = ju::get_string(object, path, "name");
  model.global_batch_size = ju::get_integer(object, path, "global_batch_size");
  const ju::json& layers = ju::require_array(
      ju::require_key(object, path, "layers"), path + ".layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string layer_path =
        path + ".layers[" + std::to_string(i) + "]";
    const ju::json& entry = ju::require_object(layers[i], layer_path);
    ju::reject_unknown_keys(entry, layer_path,
                            {"name", "op_kind", "param_bytes", "fwd_flops",
                             "bwd_flops", "output_activation_bytes",
                             "input_shape", "mp_splittable"});
    LayerSpec layer;
    layer.name = ju::get_string(entry, layer_path, "name");
    layer.op_kind = ju::get_string(entry, layer_path, "op_kind");
    layer.param_bytes = get_bytes(entry, layer_path, "param_bytes");
    layer.fwd_flops = get_non_negative_number(entry, layer_path, "fwd_flops");
    layer.bwd_flops = get_non_negative_number(entry, layer_path, "bwd_flops");
    layer.output_activation_bytes =
        get_bytes(entry, layer_path, "output_activation_bytes");
    const ju::json& shape =
        ju::require_array(ju::require_key(entry, layer_path, "input_shape"),
                          layer_path + ".input_shape");
    for (std::size_t d = 0; d < shape.size(); ++d) {
      if (!shape[d].is_number_integer()) {
        throw ValidationError(layer_path + ".input_shape[" +
                              std::to_string(d) + "]: expected an integer");
      }
      layer.input_shape.push_back(shape[d].get<std::int64_t>());
    }
    if (entry.contains("mp_splittable")) {
      layer.mp_splittable = ju::get_bool(entry, layer_path, "mp_splittable");
    }
    model.layers.push_back(std::move(layer));
  }
  check_model(model);
  return model;
}

nlohmann::json cluster_to_json_obj(const ClusterSpec& cluster) {
  nlohmann::json object;
  object["num_nodes"] = cluster.num_nodes;
  object["devices_per_node"] = cluster.devices_per_node;
  object["intra_node_bandwidth"] = cluster.intra_node_bandwidth;
  object["inter_node_bandwidth"] = cluster.inter_node_bandwidth;
  object["intra_node_latency"] = cluster.intra_node_latency;
  object["inter_node_latency"] = cluster.inter_node_latency;
  object["device_peak_flops"] = cluster.device_peak_flops;
  object["device_efficiency"] = cluster.device_efficiency;
  return object;
}

ClusterSpec cluster_from_json_obj(const nlohmann::json& object,
                                  const std::string& path,
                                  std::vector<std::string>* warnings) {
  ju::require_object(object, path);
  ju::reject_unknown_keys(object, path,
                          {"num_nodes", "devices_per_node",
                           "intra_node_bandwidth", "inter_node_bandwidth",
                           "intra_node_latency", "inter_node_latency",
                           "device_peak_flops", "device_efficiency"});
  ClusterSpec cluster;
  cluster.num_nodes =
      static_cast<int>(ju::get_integer(object, path, "num_nodes"));
  cluster.devices_per_node =
      static_cast<int>(ju::get_integer(object, path, "devices_per_node"));
  cluster.intra_node_bandwidth =
      ju::get_number(object, path, "intra_node_bandwidth");
  cluster.inter_node_bandwidth =
      ju::get_number(object, path, "inter_node_bandwidth");
  cluster.intra_node_latency =
      ju::get_number(object, path, "intra_node_latency");
  cluster.inter_node_latency =
      ju::get_number(object, path, "inter_node_latency");
  cluster.device_peak_flops =
      ju::get_number(object, path, "device_peak_flops");
  cluster.device_efficiency =
      ju::get_number(object, path, "device_efficiency");
  check_cluster(cluster, warnings);
  return cluster;
}

nlohmann::json strategy_to_json_obj(const StrategyConfig& strategy) {
  nlohmann::json object;
  object["mp"] = strategy.mp;
  object["pp"] = strategy.pp;
  object["dp"] = strategy.dp;
  object["pipeline_algorithm"] = to_string(strategy.pipeline_algorithm);
  object["micro_batch_size"] = strategy.micro_batch_size;
  return object;
}

StrategyConfig strategy_from_json_obj(const nlohmann::json& object,
                                      const std::string& path) {
  ju::require_object(object, path);
  ju::reject_unknown_keys(object, path,
                          {"mp", "pp", "dp", "pipeline_algorithm",
                           "micro_batch_size"});
  StrategyConfig strategy;
  strategy.mp = static_cast<int>(ju::get_integer(object, path, "mp"));
  strategy.pp = static_cast<int>(ju::get_integer(object, path, "pp"));
  strategy.dp = static_cast<int>(ju::get_integer(object, path, "dp"));
  if (object.contains("pipeline_algorithm")) {
    strategy.pipeline_algorithm = pipeline_algorithm_from_string(
        ju::get_string(object, path, "pipeline_algorithm"));
  } else {
    strategy.pipeline_algorithm = strategy.pp == 1
                                      ? PipelineAlgorithm::kSequential
                                      : PipelineAlgorithm::kDapple;
  }
  if (object.contains("micro_batch_size")) {
    strategy.micro_batch_size =
        ju::get_integer(object, path, "micro_batch_size");
  }
  check_strategy(strategy);
  return strategy;
}

ModelSpec parse_model_spec(const std::string& text) {
  const ju::json document = ju::parse(text, "model document");
  return model_from_json_obj(top_level_section(document, "model"), "model");
}

ClusterSpec parse_cluster_spec(const std::string& text,
                               std::vector<std::string>* warnings) {
  const ju::json document = ju::parse(text, "cluster document");
  return cluster_from_json_obj(top_level_section(document, "cluster"),
                               "cluster", warnings);
}

StrategyConfig parse_strategy_spec(const std::string& text) {
  const ju::json document = ju::parse(text, "strategy document");
  return strategy_from_json_obj(top_level_section(document, "strategy"),
                                "strategy");
}

ModelSpec load_model_file(const std::string& path) {
  return parse_model_spec(read_file(path));
}

ClusterSpec load_cluster_file(const std::string& path,
                              std::vector<std::string>* warnings) {
  return parse_cluster_spec(read_file(path), warnings);
}

StrategyConfig load_strategy_file(const std::string& path) {
  return parse_strategy_spec(read_file(path));
}

std::string model_to_json(const ModelSpec& model) {
  nlohmann::json document;
  document["model"] = model_to_json_obj(model);
  return document.dump(2) + "\n";
}

std::string cluster_to_json(const ClusterSpec& cluster) {
  nlohmann::json document;
  document["cluster"] = cluster_to_json_obj(cluster);
  return document.dump(2) + "\n";
}

std::string strategy_to_json(const StrategyConfig& strategy) {
  nlohmann::json document;
  document["strategy"] = strategy_to_json_obj(strategy);
  return document.dump(2) + "\n";
}

bool looks_like_compact_strategy(std::string_view text) {
  bool saw_m = false;
  bool saw_p = false;
  bool saw_d = false;
  bool digits = false;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = true;
      continue;
    }
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'M':
        if (saw_m || saw_p || saw_d || !digits) return false;
        saw_m = true;
        digits = false;
        break;
      case 'P':
        if (!saw_m || saw_p || saw_d || !digits) return false;
        saw_p = true;
        digits = false;
        break;
      case 'D':
        if (!saw_p || saw_d || !digits) return false;
        saw_d = true;
        digits = false;
        break;
      default:
        return false;
    }
  }
  return saw_d && !digits;
}

StrategyConfig parse_compact_strategy(std::string_view text,
                                      std::int64_t micro_batch_size) {
  if (!looks_like_compact_strategy(text)) {
    throw ValidationError("strategy \"" + std::string(text) +
                          "\": expected the form <mp>M<pp>P<dp>D, e.g. "
                          "2M2P4D");
  }
  StrategyConfig strategy;
  strategy.micro_batch_size = micro_batch_size;
  int values[3] = {0, 0, 0};
  std::size_t field = 0;
  long current = 0;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      current = current * 10 + (c - '0');
      if (current > 1 << 20) {
        throw ValidationError("strategy \"" + std::string(text) +
                              "\": degree too large");
      }
    } else {
      values[field++] = static_cast<int>(current);
      current = 0;
    }
  }
  strategy.mp = values[0];
  strategy.pp = values[1];
  strategy.dp = values[2];
  strategy.pipeline_algorithm = strategy.pp == 1
                                    ? PipelineAlgorithm::kSequential
                                    : PipelineAlgorithm::kDapple;
  check_strategy(strategy);
  return strategy;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open file \"" + path + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ValidationError("cannot write file \"" + path + "\"");
  }
  out << content;
  if (!out) {
    throw ValidationError("failed writing file \"" + path + "\"");
  }
}

}  // namespace hybridsim
