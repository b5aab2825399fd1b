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

#ifndef HYBRIDSIM_SPEC_IO_HPP_
#define HYBRIDSIM_SPEC_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "hybridsim/types.hpp"

namespace hybridsim {

// JSON readers for the input documents. A document is an object holding any
// subset of the top-level sections "model", "cluster", and "strategy"; each
// reader requires its own section. Unknown keys anywhere are rejected, and
// error messages name the offending field by path. All readers validate
// what they return.

ModelSpec parse_model_spec(const std::string& text);
ClusterSpec parse_cluster_spec(const std::string& text,
                               std::vector<std::string>* warnings = nullptr);
StrategyConfig parse_strategy_spec(const std::string& text);

ModelSpec load_model_file(const std::string& path);
ClusterSpec load_cluster_file(const std::string& path,
                              std::vector<std::string>* warnings = nullptr);
StrategyConfig load_strategy_file(const std::string& path);

std::string model_to_json(const ModelSpec& model);
std::string cluster_to_json(const ClusterSpec& cluster);
std::string strategy_to_json(const StrategyConfig& strategy);

// True when the text looks like the compact "2M2P4D" form rather than a
// file path.
bool looks_like_compact_strategy(std::string_view text);

// Parses "2M2P4D" (case-insensitive letters). The pipeline algorithm
// defaults by pp and the micro-batch size is supplied by the caller.
StrategyConfig parse_compact_strategy(std::string_view text,
                                      std::int64_t micro_batch_size = 1);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hybridsim

#endif  // HYBRIDSIM_SPEC_IO_HPP_
