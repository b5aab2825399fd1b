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

#ifndef HYBRIDSIM_SRC_JSON_UTIL_HPP_
#define HYBRIDSIM_SRC_JSON_UTIL_HPP_

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridsim/error.hpp"

namespace hybridsim {
namespace jsonutil {

using nlohmann::json;

inline json parse(const std::string& text, const std::string& what) {
  json document = json::parse(text, nullptr, false);
  if (document.is_discarded()) {
    throw ValidationError(what + ": not valid JSON");
  }
  return document;
}

inline const json& require_object(const json& value, const std::string& path) {
  if (!value.is_object()) {
    throw ValidationError(path + ": expected an object");
  }
  return value;
}

inline const json& require_array(const json& value, const std::string& path) {
  if (!value.is_array()) {
    throw ValidationError(path + ": expected an array");
  }
  return value;
}

inline void reject_unknown_keys(const json& object, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(path + ": unknown key \"" + key + "\"");
    }
  }
}

inline const json& require_key(const json& object, const std::string& path,
                               const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(path + "." + key + ": missing");
  }
  return *it;
}

inline std::string get_string(const json& object, const std::string& path,
                              const char* key) {
  const json& value = require_key(object, path, key);
  if (!value.is_string()) {
    throw ValidationError(path + "." + key + ": expected a string");
  }
  return value.get<std::string>();
}

inline double get_number(const json& object, const std::string& path,
                         const char* key) {
  const json& value = require_key(object, path, key);
  if (!value.is_number()) {
    throw ValidationError(path + "." + key + ": expected a number");
  }
  return value.get<double>();
}

inline std::int64_t get_integer(const json& object, const std::string& path,
                                const char* key) {
  const json& value = require_key(object, path, key);
  if (!value.is_number_integer()) {
    throw ValidationError(path + "." + key + ": expected an integer");
  }
  return value.get<std::int64_t>();
}

inline bool get_bool(const json& object, const std::string& path,
                     const char* key) {
  const json& value = require_key(object, path, key);
  if (!value.is_boolean()) {
    throw ValidationError(path + "." + key + ": expected a boolean");
  }
  return value.get<bool>();
}

}  // namespace jsonutil
}  // namespace hybridsim

#endif  // HYBRIDSIM_SRC_JSON_UTIL_HPP_
