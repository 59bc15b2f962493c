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

void HydraulicsModel::validate() const
{
    if (!(pump_displacement > 0.0 && relief_pressure > 0.0 && parasitic_power >= 0.0)) {
        throw std::invalid_argument("pump displacement and relief pressure must be positive");
    }
    for (const HydraulicFunction* f : {&lift, &tilt}) {
        if (!(f->max_flow > 0.0 && f->angle_per_volume > 0.0)) {
            throw std::invalid_argument("function flow and angle gain must be positive");
        }
        if (f->lever_to_valve.h0() < 0.0 || f->lever_to_valve.h1() > 1.0) {
            throw std::invalid_argument("valve opening must stay within [0, 1]");
        }
    }
}

HydraulicsStep hydraulics_step(double lift_cmd, double tilt_cmd, double omega_engine,
                               const HydraulicLoadFunction& loads, const HydraulicsModel& model, double dt,
                               const EndStops& stops)
{
    struct Function {
        double direction = 0.0;
        double flow = 0.0;       // m^3/s delivered to the function branch
        double full_rate = 0.0;  // rad/s if all of it reached the actuator
        double share = 1.0;      // fraction reaching the actuator
        double pressure = 0.0;
    };

    const auto prepare = [](double cmd, const HydraulicFunction& f) {
        Function out;
        const double lever = kernel::clamp_signed_unit(cmd);
        out.direction = lever > 0.0 ? 1.0 : (lever < 0.0 ? -1.0 : 0.0);
        out.flow = f.lever_to_valve(std::abs(lever)) * f.max_flow;
        return out;
    };

    Function lift = prepare(lift_cmd, model.lift);
    Function tilt = prepare(tilt_cmd, model.tilt);

    HydraulicsStep out;
    const double supply = model.pump_displacement * std::max(omega_engine, 0.0);
    const double demand = lift.flow + tilt.flow;
    out.flow_scale = demand > supply ? supply / demand : 1.0;

    const auto setup = [&](Function& fn, const HydraulicFunction& f, bool stop_low, bool stop_high) {
        fn.flow *= out.flow_scale;
        const bool at_stop = (fn.direction > 0.0 && stop_high) || (fn.direction < 0.0 && stop_low);
        fn.full_rate = fn.flow > 0.0 ? fn.direction * fn.flow * f.angle_per_volume : 0.0;
        fn.share = at_stop ? 0.0 : 1.0;
    };
    setup(lift, model.lift, stops.lift_low, stops.lift_high);
    setup(tilt, model.tilt, stops.tilt_low, stops.tilt_high);

    // Energy balance p * q = T * dtheta/dt gives p = T * (rad per m^3).
    const auto pressure = [&](const Function& fn, const HydraulicFunction& f, double torque) {
        return std::max(0.0, fn.direction * torque * f.angle_per_volume);
    };
    const auto evaluate = [&] { return loads(lift.share * lift.full_rate, tilt.share * tilt.full_rate); };

    // Largest actuator share keeping the load pressure at or below relief,
    // one function at a time with the other held.
    const auto relieve = [&](Function& fn, const HydraulicFunction& f, int index) {
        if (fn.flow <= 0.0 || fn.share <= 0.0) {
            return;
        }
        const double keep = fn.share;
        if (pressure(fn, f, evaluate()[index]) <= model.relief_pressure) {
            return;
        }
        fn.share = 0.0;
        if (pressure(fn, f, evaluate()[index]) > model.relief_pressure) {
            return;  // stalled
        }
        double lo = 0.0;
        double hi = keep;
        for (int i = 0; i < 48; ++i) {
            fn.share = 0.5 * (lo + hi);
            (pressure(fn, f, evaluate()[index]) > model.relief_pressure ? hi : lo) = fn.share;
        }
        fn.share = lo;
    };
    for (int sweep = 0; sweep < 3; ++sweep) {
        relieve(lift, model.lift, 0);
        relieve(tilt, model.tilt, 1);
    }

    const std::array<double, 2> torque = evaluate();
    const auto finish = [&](Function& fn, const HydraulicFunction& f, double load) {
        if (fn.flow <= 0.0) {
            return;
        }
        // Flow not reaching the actuator crosses the relief valve at relief pressure.
        fn.pressure = fn.share < 1.0 ? model.relief_pressure
                                     : std::min(pressure(fn, f, load), model.relief_pressure);
    };
    finish(lift, model.lift, torque[0]);
    finish(tilt, model.tilt, torque[1]);

    out.lift_rate = lift.share * lift.full_rate;
    out.tilt_rate = tilt.share * tilt.full_rate;
    out.d_lift = out.lift_rate * dt;
    out.d_tilt = out.tilt_rate * dt;
    out.lift_pressure = lift.pressure;
    out.tilt_pressure = tilt.pressure;
    out.power = lift.pressure * lift.flow + tilt.pressure * tilt.flow + model.parasitic_power;
    out.torque_on_engine = omega_engine > 0.0 ? out.power / omega_engine : 0.0;
    return out;
}

HydraulicsStep hydraulics_step(double lift_cmd, double tilt_cmd, double omega_engine, double load_torque_lift,
                               double load_torque_tilt, const HydraulicsModel& model, double dt,
                               const EndStops& stops)
{
    const std::array<double, 2> constant{load_torque_lift, load_torque_tilt};
    return hydraulics_step(
        lift_cmd, tilt_cmd, omega_engine, [&](double, double) { return constant; }, model, dt, stops);
}

}  // namespace loadcycle::machine
