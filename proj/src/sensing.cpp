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

#include "loadcycle/sensing.hpp"

#include <cmath>

namespace loadcycle::operator_model {

std::array<double, 2> edge_velocity(const machine::MachineState& state, const machine::LinkageModel& linkage)
{
    const auto jac = machine::edge_jacobian(state.lift, state.tilt, linkage);
    return {state.v + jac[0][0] * state.lift_rate + jac[0][1] * state.tilt_rate,
            jac[1][0] * state.lift_rate + jac[1][1] * state.tilt_rate};
}

SensedState sense(const machine::MachineState& state, const SensingContext& ctx, double previous_bearing)
{
    SensedState s;
    s.x = state.x;
    s.y = state.y;
    s.heading = state.heading;
    s.speed = state.v;
    s.engine_speed = state.omega_engine;

    const machine::EdgePose edge = machine::linkage_fk(state.lift, state.tilt, state.pose(), ctx.linkage);
    const auto local = machine::edge_local(state.lift, state.tilt, ctx.linkage);
    s.edge_x = edge.x;
    s.edge_y = state.y + std::sin(state.heading) * local[0];
    s.edge_z = edge.z;
    s.edge_angle = edge.angle;
    s.lift_angle = state.lift;
    s.tilt_angle = state.tilt;
    s.bucket_fully_back = state.tilt >= ctx.linkage.tilt_max - kFullTiltTolerance;

    const auto vel = edge_velocity(state, ctx.linkage);
    const FillGeometry g = fill_geometry(edge.angle, vel[0], vel[1], ctx.pile.slope, previous_bearing);
    s.bearing = g.bearing;
    s.slope = g.slope;
    s.attack = g.attack;
    s.clearance = g.clearance;

    s.wheel_slip = machine::wheel_slip(state.omega_wheel, ctx.driveline.wheel_radius, state.v);
    s.penetrating = environment::dig_contact(edge.x, edge.z, ctx.pile).in_contact;
    s.distance_to_pile = ctx.task.pile_toe_x - edge.x;
    s.distance_to_receiver = std::hypot(ctx.task.receiver_x - s.edge_x, ctx.task.receiver_y - s.edge_y);
    return s;
}

}  // namespace loadcycle::operator_model
