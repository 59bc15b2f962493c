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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loadcycle {

/// Gearbox positions. Forward and reverse gears are selected by the operator;
/// N is the unloaded state used at shift interlocks.
enum class Gear : std::uint8_t { N, F1, F2, R1, R2 };

std::string_view gear_name(Gear g);
std::optional<Gear> parse_gear(std::string_view name);
bool is_reverse(Gear g);

/// Loading-cycle phases in visiting order.
enum class Phase : std::uint8_t {
    ApproachPile,
    Fill,
    LeavePileReverse,
    HaulToReceiver,
    Dump,
    ReverseFromReceiver,
    ReturnOrStop,
};

inline constexpr int kPhaseCount = 7;

std::string_view phase_name(Phase p);
std::optional<Phase> parse_phase(std::string_view name);

/// Configuration rejected. path names the offending key, dotted from the root.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path))
    {
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Unrecoverable simulation condition (non-finite state, accounting residual,
/// stuck phase).
class SimulationFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace loadcycle
