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

// Rule-based operator. Everything here sees the machine only through
// SensedState, and acts on it only through OperatorCommand. This header must
// not include machine or environment headers.

#include <array>
#include <string_view>
#include <utility>

#include "loadcycle/common.hpp"
#include "loadcycle/kernel.hpp"

namespace loadcycle::operator_model {

/// The operator's controls: pedals, steering wheel, two hydraulic levers and
/// the gear selector.
struct OperatorCommand {
    double throttle = 0.0;  // [0, 1]
    double brake = 0.0;     // [0, 1]
    double steer = 0.0;     // [-1, 1], positive turns left
    double lift = 0.0;      // [-1, 1], positive raises the boom
    double tilt = 0.0;      // [-1, 1], positive tilts the bucket back
    Gear gear = Gear::N;
};

OperatorCommand clamp_command(OperatorCommand cmd);
bool command_in_range(const OperatorCommand& cmd);

/// What a person in the cab can see, hear and feel. Converter slip, pump
/// displacement and hydraulic pressures are deliberately absent.
struct SensedState {
    double x = 0.0;  // machine position and heading as seen from the cab
    double y = 0.0;
    double heading = 0.0;
    double speed = 0.0;         // m/s along heading
    double engine_speed = 0.0;  // rad/s, by ear
    double edge_x = 0.0;        // cutting edge, world frame
    double edge_y = 0.0;
    double edge_z = 0.0;
    double edge_angle = 0.0;    // bucket floor angle above horizontal
    double lift_angle = 0.0;
    double tilt_angle = 0.0;
    bool bucket_fully_back = false;  // bucket rolled back against its stop
    double bearing = 0.0;       // delta: direction of edge travel above horizontal
    double slope = 0.0;         // epsilon: pile face inclination
    double attack = 0.0;        // gamma: floor angle relative to edge travel
    double clearance = 0.0;     // alpha: floor angle relative to the pile face
    double wheel_slip = 0.0;    // relative, from wheel spin vs. ground motion
    bool penetrating = false;   // edge below the pile surface
    double distance_to_pile = 0.0;      // m from edge to toe along x, positive before it
    double distance_to_receiver = 0.0;  // m from edge to the dump point
};

/// Field names of SensedState in declaration order.
inline constexpr std::array<std::string_view, 20> kSensedFields = {
    "x",          "y",          "heading",       "speed",      "engine_speed",
    "edge_x",     "edge_y",     "edge_z",        "edge_angle", "lift_angle",
    "tilt_angle", "bucket_fully_back", "bearing", "slope",     "attack",
    "clearance",  "wheel_slip", "penetrating",   "distance_to_pile", "distance_to_receiver",
};

/// The bucket-filling angles: delta, epsilon, gamma, alpha.
struct FillGeometry {
    double bearing = 0.0;
    double slope = 0.0;
    double attack = 0.0;
    double clearance = 0.0;
};

/// Edge speed below which the travel direction is not perceivable and the
/// previous bearing is kept.
inline constexpr double kBearingSpeedEps = 0.01;

/// Geometry from the floor angle and the edge velocity in the machine's
/// vertical plane (forward, up).
FillGeometry fill_geometry(double edge_angle, double edge_v_forward, double edge_v_up, double slope,
                           double previous_bearing);

/// Working task: where things are. Goals only, no rules.
struct TaskDescription {
    double start_x = 0.0;
    double start_y = 0.0;
    double start_heading = 0.0;
    double pile_toe_x = 0.0;
    double reverse_point_x = 0.0;  // chassis target when backing out of the pile
    double reverse_point_y = 0.0;
    double receiver_x = 0.0;       // where the bucket is emptied
    double receiver_y = 0.0;
    double dump_height = 0.0;      // m, edge height needed over the receiver
    double return_distance = 0.0;  // m backed away from the receiver
};

struct OperatorParams {
    // Traction control 1: throttle cap from wheel slip.
    double slip_threshold_1 = 0.0;
    double slip_threshold_1_full = 0.0;
    double throttle_cap_floor = 0.0;
    // Traction control 2: lift boost from integrated slip.
    double slip_integral_limit = 0.0;
    double slip_integral_limit_full = 0.0;
    double slip_integral_max = 0.0;
    double lift_boost_max = 0.0;
    // Bucket velocity vector control.
    double bearing_deviation_threshold = 0.0;
    double bvv_ramp_rate = 0.0;
    double bvv_max = 0.0;
    // Bucket attitude control.
    double target_clearance = 0.0;
    double target_attack = 0.0;
    double clearance_gain = 0.0;
    double attack_gain = 0.0;
    // Exit triggers.
    double exit_bucket_angle = 0.0;  // relative to the pile face
    double exit_lift_angle = 0.0;
    // Nominal fill operating point the rules modulate.
    double fill_base_throttle = 0.0;
    double fill_base_lift = 0.0;
    // Driving.
    double approach_speed = 0.0;
    double haul_speed = 0.0;
    double reverse_speed = 0.0;
    double cruise_throttle = 0.0;
    double speed_gain = 0.0;   // throttle per m/s of speed deficit
    double brake_gain = 0.0;   // brake per m/s of excess speed
    double slowdown_gain = 0.0;  // 1/s, target speed per m to go
    double steer_gain = 0.0;   // steering per rad of heading error
    double arrive_tolerance = 0.0;
    double stop_speed = 0.0;
    // Dumping and return.
    double dump_tilt_angle = 0.0;
    double dump_throttle = 0.0;
    double carry_lift_angle = 0.0;
    double carry_tilt_angle = 0.0;
    // Human actuation speed, full scale per second.
    double rate_throttle = 0.0;
    double rate_brake = 0.0;
    double rate_steer = 0.0;
    double rate_lift = 0.0;
    double rate_tilt = 0.0;
    std::array<double, kPhaseCount> phase_timeout{};

    kernel::SmoothStep tc1_step() const;
    kernel::SmoothStep tc2_step() const;
    void validate() const;
};

struct OperatorState {
    Phase phase = Phase::ApproachPile;
    double phase_time = 0.0;
    double slip_integral = 0.0;
    kernel::Latch exit_latch;
    double bvv_term = 0.0;
    OperatorCommand last;  // ramp memory per channel
    bool stopping = false;
    double anchor_x = 0.0;  // chassis position when the phase began
    double anchor_y = 0.0;
    int fill_entries = 0;
};

// Bucket-filling rules.
double tc1_throttle_cap(double slip, const OperatorParams& p);
double tc2_lift_boost(double slip_integral, const OperatorParams& p);
double bvv_throttle(double bearing, double slope, const OperatorParams& p, double prev, double dt);
double attitude_tilt(double clearance, double attack, const OperatorParams& p);
kernel::Latch exit_triggers(double bucket_angle_rel_slope, double lift_angle, kernel::Latch latch,
                            const OperatorParams& p);

/// Per-channel human rate limit toward target.
OperatorCommand ramp_command(const OperatorCommand& prev, const OperatorCommand& target, const OperatorParams& p,
                             double dt);

/// One step of the bucket-filling phase: all six rules on the same snapshot,
/// combined per channel.
std::pair<OperatorCommand, OperatorState> fill_step(const SensedState& sensed, OperatorState state,
                                                    const OperatorParams& p, double dt);

/// One step of the loading-cycle state machine.
std::pair<OperatorCommand, OperatorState> phase_step(const SensedState& sensed, OperatorState state,
                                                     const OperatorParams& p, const TaskDescription& task, double dt);

/// Whether the state machine declares an edge from `from` to `to`.
bool is_phase_edge(Phase from, Phase to);

OperatorState initial_operator_state(const TaskDescription& task, Gear start_gear);

}  // namespace loadcycle::operator_model
