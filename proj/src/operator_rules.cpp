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

#include "loadcycle/operator_model.hpp"

namespace loadcycle::operator_model {

OperatorCommand clamp_command(OperatorCommand cmd)
{
    cmd.throttle = kernel::clamp_unit(cmd.throttle);
    cmd.brake = kernel::clamp_unit(cmd.brake);
    cmd.steer = kernel::clamp_signed_unit(cmd.steer);
    cmd.lift = kernel::clamp_signed_unit(cmd.lift);
    cmd.tilt = kernel::clamp_signed_unit(cmd.tilt);
    return cmd;
}

bool command_in_range(const OperatorCommand& cmd)
{
    const auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    const auto signed_unit = [](double x) { return x >= -1.0 && x <= 1.0; };
    return unit(cmd.throttle) && unit(cmd.brake) && signed_unit(cmd.steer) && signed_unit(cmd.lift) &&
           signed_unit(cmd.tilt);
}

FillGeometry fill_geometry(double edge_angle, double edge_v_forward, double edge_v_up, double slope,
                           double previous_bearing)
{
    FillGeometry g;
    g.slope = slope;
    g.bearing = std::hypot(edge_v_forward, edge_v_up) > kBearingSpeedEps ? std::atan2(edge_v_up, edge_v_forward)
                                                                           : previous_bearing;
    g.attack = edge_angle - g.bearing;
    g.clearance = edge_angle - slope;
    return g;
}

kernel::SmoothStep OperatorParams::tc1_step() const
{
    return {slip_threshold_1, 1.0, slip_threshold_1_full, throttle_cap_floor};
}

kernel::SmoothStep OperatorParams::tc2_step() const
{
    return {slip_integral_limit, 0.0, slip_integral_limit_full, lift_boost_max};
}

void OperatorParams::validate() const
{
    // Construction checks knot order.
    (void)tc1_step();
    (void)tc2_step();
    if (!(throttle_cap_floor >= 0.0 && throttle_cap_floor <= 1.0)) {
        throw ConfigError("operator.throttle_cap_floor", "must lie in [0, 1]");
    }
    if (!(lift_boost_max >= 0.0 && lift_boost_max <= 1.0)) {
        throw ConfigError("operator.lift_boost_max", "must lie in [0, 1]");
    }
    if (!(bvv_max >= 0.0 && bvv_max <= 1.0) || !(bvv_ramp_rate >= 0.0)) {
        throw ConfigError("operator.bvv_max", "must lie in [0, 1] with a non-negative ramp rate");
    }
    if (!(slip_integral_max > 0.0)) {
        throw ConfigError("operator.slip_integral_max", "must be positive");
    }
    for (double rate : {rate_throttle, rate_brake, rate_steer, rate_lift, rate_tilt}) {
        if (!(rate > 0.0)) {
            throw ConfigError("operator.command_rates", "rates must be positive");
        }
    }
    for (int i = 0; i < kPhaseCount; ++i) {
        if (!(phase_timeout[static_cast<std::size_t>(i)] > 0.0)) {
            throw ConfigError("operator.phase_timeout." + std::string(phase_name(static_cast<Phase>(i))),
                              "must be positive");
        }
    }
}

double tc1_throttle_cap(double slip, const OperatorParams& p) { return kernel::step3(slip, p.tc1_step()); }

double tc2_lift_boost(double slip_integral, const OperatorParams& p)
{
    return kernel::step3(slip_integral, p.tc2_step());
}

double bvv_throttle(double bearing, double slope, const OperatorParams& p, double prev, double dt)
{
    // One-sided: only a bucket climbing too shallowly calls for more throttle.
    const double target = (slope - bearing) > p.bearing_deviation_threshold ? p.bvv_max : 0.0;
    return std::clamp(kernel::rate_limit(prev, target, p.bvv_ramp_rate, dt), 0.0, p.bvv_max);
}

double attitude_tilt(double clearance, double attack, const OperatorParams& p)
{
    return kernel::clamp_unit(p.clearance_gain * (p.target_clearance - clearance) +
                              p.attack_gain * (p.target_attack - attack));
}

kernel::Latch exit_triggers(double bucket_angle_rel_slope, double lift_angle, kernel::Latch latch,
                            const OperatorParams& p)
{
    const bool set = bucket_angle_rel_slope > p.exit_bucket_angle || lift_angle > p.exit_lift_angle;
    return kernel::latch_update(latch, set, false);
}

OperatorCommand ramp_command(const OperatorCommand& prev, const OperatorCommand& target, const OperatorParams& p,
                             double dt)
{
    OperatorCommand out;
    out.throttle = kernel::rate_limit(prev.throttle, target.throttle, p.rate_throttle, dt);
    out.brake = kernel::rate_limit(prev.brake, target.brake, p.rate_brake, dt);
    out.steer = kernel::rate_limit(prev.steer, target.steer, p.rate_steer, dt);
    out.lift = kernel::rate_limit(prev.lift, target.lift, p.rate_lift, dt);
    out.tilt = kernel::rate_limit(prev.tilt, target.tilt, p.rate_tilt, dt);
    out.gear = target.gear;
    return clamp_command(out);
}

std::pair<OperatorCommand, OperatorState> fill_step(const SensedState& sensed, OperatorState state,
                                                    const OperatorParams& p, double dt)
{
    state.slip_integral =
        kernel::clamped_integrate(state.slip_integral, std::max(0.0, sensed.wheel_slip), dt, 0.0,
                                  p.slip_integral_max);
    state.bvv_term = bvv_throttle(sensed.bearing, sensed.slope, p, state.bvv_term, dt);
    state.exit_latch = exit_triggers(sensed.clearance, sensed.lift_angle, state.exit_latch, p);

    OperatorCommand target;
    target.gear = Gear::F1;
    // Throttle: slip cap multiplies the nominal pedal, the bearing term adds.
    target.throttle = p.fill_base_throttle * tc1_throttle_cap(sensed.wheel_slip, p) + state.bvv_term;
    target.lift = p.fill_base_lift + tc2_lift_boost(state.slip_integral, p);
    const double exit_tilt = state.exit_latch.state && !sensed.bucket_fully_back ? 1.0 : 0.0;
    target.tilt = std::max(attitude_tilt(sensed.clearance, sensed.attack, p), exit_tilt);
    target.brake = 0.0;
    target.steer = 0.0;

    const OperatorCommand cmd = ramp_command(state.last, clamp_command(target), p, dt);
    state.last = cmd;
    return {cmd, state};
}

}  // namespace loadcycle::operator_model
