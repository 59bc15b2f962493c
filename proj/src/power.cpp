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

#include <algorithm>
#include <cmath>

#include "loadcycle/machine.hpp"

namespace loadcycle::machine {

PowerSplit power_split(double omega_engine, double indicated_torque, double pump_torque, double hydraulic_torque)
{
    PowerSplit p;
    p.engine = indicated_torque * omega_engine;
    p.driveline = pump_torque * omega_engine;
    p.hydraulics = hydraulic_torque * omega_engine;
    // Friction and engine inertia power.
    p.loss = p.engine - p.driveline - p.hydraulics;
    if (!std::isfinite(p.engine) || !std::isfinite(p.driveline) || !std::isfinite(p.hydraulics)) {
        throw SimulationFault("power split: non-finite component");
    }
    if (power_residual(p) > kPowerIdentityTol * std::max(1.0, std::abs(p.engine))) {
        throw SimulationFault("power split: accounting residual exceeds tolerance");
    }
    return p;
}

double power_residual(const PowerSplit& p) { return std::abs(p.engine - (p.driveline + p.hydraulics + p.loss)); }

}  // namespace loadcycle::machine
