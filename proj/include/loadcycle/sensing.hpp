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

// The cab's window onto the plant. This is the only place where machine
// state is turned into operator input.

#include "loadcycle/environment.hpp"
#include "loadcycle/machine.hpp"
#include "loadcycle/operator_model.hpp"

namespace loadcycle::operator_model {

struct SensingContext {
    const machine::LinkageModel& linkage;
    const machine::DrivelineModel& driveline;
    const environment::PileModel& pile;
    const TaskDescription& task;
};

/// Tolerance for perceiving the bucket as fully rolled back.
inline constexpr double kFullTiltTolerance = 0.01;

/// Edge velocity in the machine's vertical plane (forward, up), from chassis
/// speed and the last linkage rates.
std::array<double, 2> edge_velocity(const machine::MachineState& state, const machine::LinkageModel& linkage);

SensedState sense(const machine::MachineState& state, const SensingContext& ctx, double previous_bearing);

}  // namespace loadcycle::operator_model
