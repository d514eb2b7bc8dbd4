// Copyright 2026 The fedsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSEL_CONFIG_HPP_
#define FEDSEL_CONFIG_HPP_

#include <string>

#include "fedsel/engine.hpp"

namespace fedsel {

/// Raised for malformed files and invalid values; the message carries the
/// offending key and, when known, its line number.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parses a flat key = value file (`#` comments, blank lines allowed) into a
/// fully validated config. Missing keys keep the small-network defaults;
/// unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// The effective config with every default resolved, in the same format
/// parse_config reads; loading it back reproduces the run.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace fedsel

#endif  // FEDSEL_CONFIG_HPP_
