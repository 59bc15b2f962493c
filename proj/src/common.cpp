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

#include "loadcycle/common.hpp"

#include <array>

namespace loadcycle {

namespace {

constexpr std::array<std::string_view, 5> kGearNames = {"N", "F1", "F2", "R1", "R2"};
constexpr std::array<std::string_view, kPhaseCount> kPhaseNames = {
    "ApproachPile", "Fill", "LeavePileReverse", "HaulToReceiver", "Dump", "ReverseFromReceiver", "ReturnOrStop",
};

}  // namespace

std::string_view gear_name(Gear g) { return kGearNames.at(static_cast<std::size_t>(g)); }

std::optional<Gear> parse_gear(std::string_view name)
{
    for (std::size_t i = 0; i < kGearNames.size(); ++i) {
        if (kGearNames[i] == name) {
            return static_cast<Gear>(i);
        }
    }
    return std::nullopt;
}

bool is_reverse(Gear g) { return g == Gear::R1 || g == Gear::R2; }

std::string_view phase_name(Phase p) { return kPhaseNames.at(static_cast<std::size_t>(p)); }

std::optional<Phase> parse_phase(std::string_view name)
{
    for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
        if (kPhaseNames[i] == name) {
            return static_cast<Phase>(i);
        }
    }
    return std::nullopt;
}

}  // namespace loadcycle
