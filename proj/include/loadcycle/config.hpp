/*
 * Copyright (C) 2026 The loadcycle Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "loadcycle/sim.hpp"

namespace loadcycle::config {

/// The built-in reference machine and task. Every configuration key has its
/// default here; a user file overrides a subset.
const nlohmann::json& reference_document();

struct LoadedConfig {
    nlohmann::json resolved;               // reference merged with the user document
    std::vector<std::string> defaulted;    // dotted paths filled from the reference
    sim::SimConfig config;
};

/// Merges, checks and builds. Throws ConfigError with the offending key path
/// for unknown keys, wrong types, or violated model invariants. Keys starting
/// with '_' are comments and ignored.
LoadedConfig resolve(const nlohmann::json& user);

/// Reads and resolves a JSON file. Unreadable or malformed input is reported
/// as a ConfigError on the path "<file>".
LoadedConfig load_file(const std::filesystem::path& path);

sim::SimConfig reference_config();

/// Builds a SimConfig from a fully resolved document.
sim::SimConfig build(const nlohmann::json& resolved);

}  // namespace loadcycle::config
