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
#include <numbers>
#include <string>

#include "loadcycle/operator_model.hpp"

namespace loadcycle::operator_model {

namespace {

struct Pedals {
    double throttle = 0.0;
    double brake = 0.0;
};

// Pedal work to hold a travel speed in the direction of the selected gear.
Pedals regulate_speed(double speed_in_gear_direction, double target, const OperatorParams& p)
{
    const double error = target - speed_in_gear_direction;
    Pedals out;
    out.throttle = kernel::clamp_unit(p.cruise_throttle + p.speed_gain * error);
    out.brake = kernel::clamp_unit(p.brake_gain * (-error - 0.2));
    return out;
}

Pedals hold_still() { return {0.0, 1.0}; }

// Steering toward a ground point, driving forward or backing up.
double pursue(const SensedState& s, double tx, double ty, bool reverse, const OperatorParams& p)
{
    const double to_target = std::atan2(ty - s.y, tx - s.x);
    if (!reverse) {
        return kernel::clamp_signed_unit(p.steer_gain * kernel::wrap_angle(to_target - s.heading));
    }
    const double rear_error = kernel::wrap_angle(to_target - s.heading - std::numbers::pi);
    return kernel::clamp_signed_unit(-p.steer_gain * rear_error);
}

void enter(OperatorState& state, Phase next, const SensedState& s)
{
    state.phase = next;
    state.phase_time = 0.0;
    state.stopping = false;
    state.anchor_x = s.x;
    state.anchor_y = s.y;
}

bool stopped(const SensedState& s, const OperatorParams& p) { return std::abs(s.speed) < p.stop_speed; }

}  // namespace

bool is_phase_edge(Phase from, Phase to)
{
    if (from == to) {
        return true;
    }
    return static_cast<int>(to) == static_cast<int>(from) + 1;
}

OperatorState initial_operator_state(const TaskDescription& task, Gear start_gear)
{
    OperatorState state;
    state.anchor_x = task.start_x;
    state.anchor_y = task.start_y;
    state.last.gear = start_gear;
    return state;
}

std::pair<OperatorCommand, OperatorState> phase_step(const SensedState& sensed, OperatorState state,
                                                     const OperatorParams& p, const TaskDescription& task, double dt)
{
    if (state.phase_time > p.phase_timeout[static_cast<std::size_t>(state.phase)]) {
        throw SimulationFault("phase " + std::string(phase_name(state.phase)) + " exceeded its timeout");
    }

    // Transitions, evaluated on this step's snapshot.
    switch (state.phase) {
    case Phase::ApproachPile:
        if (sensed.penetrating) {
            enter(state, Phase::Fill, sensed);
            state.exit_latch = kernel::latch_update(state.exit_latch, false, true);
            state.slip_integral = 0.0;
            state.bvv_term = 0.0;
            ++state.fill_entries;
        }
        break;
    case Phase::Fill:
        if (!sensed.penetrating && state.exit_latch.state && sensed.bucket_fully_back) {
            enter(state, Phase::LeavePileReverse, sensed);
        }
        break;
    case Phase::LeavePileReverse:
        if (state.stopping && stopped(sensed, p)) {
            enter(state, Phase::HaulToReceiver, sensed);
        }
        break;
    case Phase::HaulToReceiver:
        if (state.stopping && stopped(sensed, p) && sensed.edge_z >= task.dump_height) {
            enter(state, Phase::Dump, sensed);
        }
        break;
    case Phase::Dump:
        if (sensed.tilt_angle <= p.dump_tilt_angle) {
            enter(state, Phase::ReverseFromReceiver, sensed);
        }
        break;
    case Phase::ReverseFromReceiver:
        if (state.stopping && stopped(sensed, p)) {
            enter(state, Phase::ReturnOrStop, sensed);
        }
        break;
    case Phase::ReturnOrStop:
        break;
    }

    state.phase_time += dt;
    if (state.phase == Phase::Fill) {
        return fill_step(sensed, state, p, dt);
    }

    OperatorCommand target;
    target.gear = state.last.gear;
    switch (state.phase) {
    case Phase::ApproachPile: {
        target.gear = Gear::F2;
        const Pedals pedals = regulate_speed(sensed.speed, p.approach_speed, p);
        target.throttle = pedals.throttle;
        target.brake = pedals.brake;
        target.steer = pursue(sensed, task.pile_toe_x, task.start_y, false, p);
        break;
    }
    case Phase::LeavePileReverse: {
        target.gear = Gear::R2;
        // Boom goes up on the way out until the bucket clears the receiver.
        target.lift = sensed.edge_z < task.dump_height ? 1.0 : 0.0;
        const double dx = task.reverse_point_x - sensed.x;
        const double dy = task.reverse_point_y - sensed.y;
        const double behind = -(dx * std::cos(sensed.heading) + dy * std::sin(sensed.heading));
        if (std::hypot(dx, dy) < p.arrive_tolerance || behind <= 0.0) {
            state.stopping = true;
        }
        if (state.stopping) {
            const Pedals pedals = hold_still();
            target.throttle = pedals.throttle;
            target.brake = pedals.brake;
        }
        else {
            const Pedals pedals = regulate_speed(-sensed.speed, p.reverse_speed, p);
            target.throttle = pedals.throttle;
            target.brake = pedals.brake;
            target.steer = pursue(sensed, task.reverse_point_x, task.reverse_point_y, true, p);
        }
        break;
    }
    case Phase::HaulToReceiver: {
        target.gear = Gear::F2;
        target.lift = sensed.edge_z < task.dump_height ? 1.0 : 0.0;
        const double dx = task.receiver_x - sensed.edge_x;
        const double dy = task.receiver_y - sensed.edge_y;
        const double ahead = dx * std::cos(sensed.heading) + dy * std::sin(sensed.heading);
        if (sensed.distance_to_receiver < p.arrive_tolerance || ahead <= 0.0) {
            state.stopping = true;
        }
        if (state.stopping) {
            const Pedals pedals = hold_still();
            target.throttle = pedals.throttle;
            target.brake = pedals.brake;
        }
        else {
            const double speed = std::min(p.haul_speed, p.slowdown_gain * sensed.distance_to_receiver);
            const Pedals pedals = regulate_speed(sensed.speed, speed, p);
            target.throttle = pedals.throttle;
            target.brake = pedals.brake;
            target.steer = pursue(sensed, task.receiver_x, task.receiver_y, false, p);
        }
        break;
    }
    case Phase::Dump:
        target.brake = 1.0;
        target.throttle = p.dump_throttle;
        target.tilt = -1.0;
        break;
    case Phase::ReverseFromReceiver: {
        target.gear = Gear::R2;
        target.lift = sensed.lift_angle > p.carry_lift_angle ? -1.0 : 0.0;
        target.tilt = sensed.tilt_angle < p.carry_tilt_angle ? 1.0 : 0.0;
        const double backed = std::hypot(sensed.x - state.anchor_x, sensed.y - state.anchor_y);
        if (backed >= task.return_distance) {
            state.stopping = true;
        }
        const Pedals pedals = state.stopping ? hold_still() : regulate_speed(-sensed.speed, p.reverse_speed, p);
        target.throttle = pedals.throttle;
        target.brake = pedals.brake;
        break;
    }
    case Phase::ReturnOrStop:
        target.brake = 1.0;
        break;
    case Phase::Fill:
        break;
    }

    const OperatorCommand cmd = ramp_command(state.last, clamp_command(target), p, dt);
    state.last = cmd;
    return {cmd, state};
}

}  // namespace loadcycle::operator_model
