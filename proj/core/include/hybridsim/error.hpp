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

#ifndef HYBRIDSIM_ERROR_HPP_
#define HYBRIDSIM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hybridsim {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Raised when user-supplied input (specs, files, flags, measurements) is
// malformed, inconsistent, or cannot be resolved into a runnable simulation.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message) : Error(message) {}
};

// Raised when an internal invariant breaks. Seeing one is a bug.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& message) : Error(message) {}
};

}  // namespace hybridsim

#endif  // HYBRIDSIM_ERROR_HPP_
