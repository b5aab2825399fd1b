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

#ifndef HYBRIDSIM_SRC_SPEC_JSON_HPP_
#define HYBRIDSIM_SRC_SPEC_JSON_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsim/types.hpp"

namespace hybridsim {

// Object-level converters shared by the file readers and the timeline
// serializer. The *_from_json_obj readers reject unknown keys and validate.

nlohmann::json model_to_json_obj(const ModelSpec& model);
ModelSpec model_from_json_obj(const nlohmann::json& object,
                              const std::string& path);

nlohmann::json cluster_to_json_obj(const ClusterSpec& cluster);
ClusterSpec cluster_from_json_obj(const nlohmann::json& object,
                                  const std::string& path,
                                  std::vector<std::string>* warnings);

nlohmann::json strategy_to_json_obj(const StrategyConfig& strategy);
StrategyConfig strategy_from_json_obj(const nlohmann::json& object,
                                      const std::string& path);

}  // namespace hybridsim

#endif  // HYBRIDSIM_SRC_SPEC_JSON_HPP_
