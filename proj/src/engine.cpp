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

void EngineModel::validate() const
{
    if (!(idle_speed > 0.0 && idle_speed < rated_speed)) {
        throw std::invalid_argument("idle speed must be positive and below rated speed");
    }
    if (!(high_idle_speed >= rated_speed && high_idle_speed <= max_speed())) {
        throw std::invalid_argument("high idle speed must lie in [rated, 1.15 * rated]");
    }
    if (!(inertia > 0.0) || !(governor_gain > 0.0) || !(rated_torque > 0.0)) {
        throw std::invalid_argument("inertia, governor gain and rated torque must be positive");
    }
    // Full-load torque must be available across the working range.
    if (!(max_torque(idle_speed) > 0.0) || !(max_torque(rated_speed) > 0.0)) {
        throw std::invalid_argument("full-load torque must be positive on [idle, rated]");
    }
    for (std::size_t i = 0; i < max_torque.knots().size(); ++i) {
        const double w = max_torque.knots()[i];
        if (w >= idle_speed && w <= rated_speed && !(max_torque.values()[i] > 0.0)) {
            throw std::invalid_argument("full-load torque must be positive on [idle, rated]");
        }
    }
    if (friction_torque.min_value() < 0.0) {
        throw std::invalid_argument("friction torque must be non-negative");
    }
    for (double b : bsfc.values()) {
        if (!(b > 0.0)) {
            throw std::invalid_argument("fuel map must be positive");
        }
    }
}

double engine_torque(double throttle, double omega, const EngineModel& model)
{
    const double t_max = model.max_torque(omega);
    const double friction = model.friction_torque(omega);
    const double stiffness = model.governor_gain * model.inertia;
    const double set_point = model.idle_speed + throttle * (model.high_idle_speed - model.idle_speed);
    const double demand = std::min(throttle * t_max, friction + stiffness * (set_point - omega));
    const double idle_hold = friction + stiffness * (model.idle_speed - omega);
    return std::clamp(std::max(demand, idle_hold), 0.0, std::max(t_max, 0.0));
}

double fuel_rate(double omega, double indicated_torque, const EngineModel& model)
{
    const double power_w = indicated_torque * omega;
    if (power_w <= 0.0) {
        return 0.0;
    }
    return model.bsfc(omega, indicated_torque) * power_w / 3.6e6;
}

EngineStep engine_step(double throttle, double load_torque, double omega, const EngineModel& model, double dt)
{
    if (!std::isfinite(throttle) || !std::isfinite(load_torque) || !std::isfinite(omega) || !std::isfinite(dt)) {
        throw SimulationFault("engine: non-finite input");
    }
    throttle = kernel::clamp_unit(throttle);
    EngineStep out;
    out.indicated_torque = engine_torque(throttle, omega, model);
    out.friction_torque = model.friction_torque(omega);
    out.fuel_rate = fuel_rate(omega, out.indicated_torque, model);
    const double accel = (out.indicated_torque - out.friction_torque - load_torque) / model.inertia;
    out.omega = std::clamp(omega + dt * accel, model.min_speed(), model.max_speed());
    return out;
}

}  // namespace loadcycle::machine
