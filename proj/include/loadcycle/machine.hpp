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

#include <array>
#include <functional>

#include "loadcycle/common.hpp"
#include "loadcycle/kernel.hpp"

namespace loadcycle::machine {

inline constexpr double kGravity = 9.81;

// ---------------------------------------------------------------------------
// Engine

struct EngineModel {
    kernel::Table1D max_torque;       // rad/s -> N*m, full-load curve
    kernel::Table1D friction_torque;  // rad/s -> N*m, internal losses
    kernel::Table2D bsfc;             // (rad/s, N*m indicated) -> g/kWh
    double idle_speed = 0.0;          // rad/s
    double rated_speed = 0.0;         // rad/s
    double high_idle_speed = 0.0;     // rad/s, full-throttle no-load set point
    double rated_torque = 0.0;        // N*m, normalization for load duty
    double inertia = 0.0;             // kg*m^2, engine and converter pump
    double governor_gain = 0.0;       // 1/s

    double min_speed() const { return 0.9 * idle_speed; }
    double max_speed() const { return 1.15 * rated_speed; }

    /// Throws std::invalid_argument on a violated model invariant.
    void validate() const;
};

struct EngineStep {
    double omega = 0.0;             // rad/s after the step
    double fuel_rate = 0.0;         // g/s
    double indicated_torque = 0.0;  // N*m
    double friction_torque = 0.0;   // N*m
};

/// Indicated torque the engine produces at throttle and speed. The pedal both
/// scales the available full-load torque and sets the all-speed governor
/// point; an idle governor keeps the engine alive at zero pedal.
double engine_torque(double throttle, double omega, const EngineModel& model);

double fuel_rate(double omega, double indicated_torque, const EngineModel& model);

EngineStep engine_step(double throttle, double load_torque, double omega, const EngineModel& model, double dt);

// ---------------------------------------------------------------------------
// Torque converter

/// Hydrodynamic converter: pump torque = C(nu) * w_pump^2, turbine torque =
/// mu(nu) * pump torque, with nu the turbine/pump speed ratio.
class ConverterMap {
public:
    ConverterMap(std::vector<double> speed_ratio, std::vector<double> capacity, std::vector<double> torque_ratio);

    double capacity(double nu) const { return capacity_(nu); }
    double torque_ratio(double nu) const { return torque_ratio_(nu); }

    const kernel::Table1D& capacity_table() const { return capacity_; }
    const kernel::Table1D& torque_ratio_table() const { return torque_ratio_; }

    /// Smallest speed ratio from which mu stays at 1.
    double coupling_ratio() const;

private:
    kernel::Table1D capacity_;
    kernel::Table1D torque_ratio_;
};

struct ConverterTorques {
    double pump = 0.0;
    double turbine = 0.0;
    double speed_ratio = 0.0;
};

ConverterTorques converter_torques(double omega_pump, double omega_turbine, const ConverterMap& map);

/// Capacity factor scaled by capacity_scale, torque ratio unchanged.
ConverterMap scale_converter(const ConverterMap& map, double capacity_scale);

// ---------------------------------------------------------------------------
// Driveline and traction

struct GearSpec {
    double ratio = 0.0;       // turbine speed / wheel speed, negative in reverse
    double efficiency = 1.0;
};

struct DrivelineModel {
    std::array<GearSpec, 5> gears{};  // indexed by Gear
    double wheel_radius = 0.0;        // m
    double wheel_inertia = 0.0;       // kg*m^2, wheels plus reflected driveline
    double vehicle_mass = 0.0;        // kg, empty machine
    double rolling_resistance = 0.0;  // coefficient
    kernel::Table1D traction_curve{{0.0, 1.0}, {0.0, 0.0}};  // |slip| -> adhesion coefficient
    double static_load_split = 1.0;   // share of weight on the driving wheels
    double lift_load_transfer = 0.0;  // extra share per unit lift command
    double brake_torque = 0.0;        // N*m at full pedal, all wheels
    double shift_interlock = 0.3;     // s without torque after a gear change
    double wheelbase = 0.0;           // m, for yaw kinematics
    double max_steer_angle = 0.0;     // rad

    const GearSpec& gear(Gear g) const { return gears[static_cast<std::size_t>(g)]; }
    void validate() const;
};

inline constexpr double kSlipSpeedEps = 0.1;  // m/s

/// Relative wheel slip: (w*r - v) / max(|w*r|, 0.1 m/s).
double wheel_slip(double omega_wheel, double radius, double v);

double traction_force(double slip, double normal_load, const kernel::Table1D& curve);

/// Load on the driving wheels from the machine weight, raised by lift
/// command (boom lifting presses the front axle down).
double driving_normal_load(double total_mass, double lift_cmd, const DrivelineModel& model);

/// Longitudinal loads for one driveline step. Each provider is evaluated at
/// trial states inside the step, so it must be a pure function.
struct DrivelineLoads {
    std::function<double(double omega_turbine)> turbine_torque;  // N*m
    std::function<double(double v)> external_force;              // N along heading
    double normal_load = 0.0;                                     // N
    double brake = 0.0;                                           // pedal [0,1]
    double mass = 0.0;                                            // kg
};

struct DrivelineStep {
    double v = 0.0;
    double omega_wheel = 0.0;
    double omega_turbine = 0.0;
    double turbine_torque = 0.0;
    double traction = 0.0;
    double slip = 0.0;
};

/// Advances wheel speed and chassis speed by one step. The tire coupling is
/// stiff at low speed, so the pair is integrated with linearly implicit Euler.
/// engaged = false models neutral or a shift interlock: the turbine is unloaded.
DrivelineStep driveline_step(const DrivelineLoads& loads, Gear gear, bool engaged, double v, double omega_wheel,
                             const DrivelineModel& model, double dt);

/// Constant-load convenience form.
DrivelineStep driveline_step(double turbine_torque, Gear gear, double v, double omega_wheel, double external_force,
                             const DrivelineModel& model, double dt);

// ---------------------------------------------------------------------------
// Lift and tilt linkage

struct LinkageModel {
    double pivot_x = 0.0;      // m, chassis frame, forward of the chassis origin
    double pivot_z = 0.0;      // m above ground
    double boom_length = 0.0;  // m
    double lift_min = 0.0;
    double lift_max = 0.0;     // rad, boom angle above horizontal
    double tilt_min = 0.0;
    double tilt_max = 0.0;     // rad, bucket relative to boom, positive = tilted back
    double edge_offset = 0.0;  // m, bucket pivot to cutting edge
    double lift_ref = 0.0;     // boom angle with the bucket flat on the ground
    double tilt_ref = 0.0;
    double bucket_capacity = 0.0;  // m^3
    double boom_mass = 0.0;        // kg
    double bucket_mass = 0.0;      // kg

    /// Direction of the pivot-to-edge vector relative to boom + bucket angle.
    double edge_direction_offset() const;
    /// Constant making the floor angle zero in the reference pose.
    double edge_angle_offset() const { return -(lift_ref + tilt_ref); }

    double max_reach() const { return boom_length + edge_offset; }

    void validate() const;
};

struct ChassisPose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
};

struct EdgePose {
    double x = 0.0;      // m, world x
    double z = 0.0;      // m above ground
    double angle = 0.0;  // rad, floor angle above horizontal
    bool clamped = false;
};

/// Edge position in the chassis frame (forward, up), no clamping.
std::array<double, 2> edge_local(double lift, double tilt, const LinkageModel& model);

/// d(edge_local)/d(lift, tilt) as {{dx/dl, dx/dt}, {dz/dl, dz/dt}}.
std::array<std::array<double, 2>, 2> edge_jacobian(double lift, double tilt, const LinkageModel& model);

EdgePose linkage_fk(double lift, double tilt, const ChassisPose& pose, const LinkageModel& model);

/// Boom tip (bucket pivot) in the chassis frame.
std::array<double, 2> boom_tip(double lift, const LinkageModel& model);

struct LinkageLoads {
    double lift = 0.0;  // N*m resisting a boom raise
    double tilt = 0.0;  // N*m resisting a tilt-back
};

/// Gravity of boom, bucket and payload plus the digging force at the edge
/// (chassis-plane components), expressed as torques opposing positive motion.
LinkageLoads linkage_loads(double lift, double tilt, double payload_mass, double dig_fx, double dig_fz,
                           const LinkageModel& model);

// ---------------------------------------------------------------------------
// Hydraulics

struct HydraulicFunction {
    kernel::SmoothStep lever_to_valve{0.0, 0.0, 1.0, 1.0};  // |lever| -> valve opening
    double max_flow = 0.0;          // m^3/s at full opening
    double angle_per_volume = 0.0;  // rad/m^3
};

struct HydraulicsModel {
    double pump_displacement = 0.0;  // m^3/rad
    double relief_pressure = 0.0;    // Pa
    double parasitic_power = 0.0;    // W
    HydraulicFunction lift;
    HydraulicFunction tilt;

    void validate() const;
};

/// Which ends of travel the cylinders currently sit at.
struct EndStops {
    bool lift_low = false;
    bool lift_high = false;
    bool tilt_low = false;
    bool tilt_high = false;
};

struct HydraulicsStep {
    double lift_rate = 0.0;  // rad/s
    double tilt_rate = 0.0;  // rad/s
    double d_lift = 0.0;     // rad over dt
    double d_tilt = 0.0;
    double lift_pressure = 0.0;  // Pa
    double tilt_pressure = 0.0;
    double flow_scale = 1.0;     // rationing factor applied to both functions
    double power = 0.0;          // W drawn from the engine
    double torque_on_engine = 0.0;
};

/// Load torques on (lift, tilt) as a function of the function rates, so a
/// velocity-dependent load such as the digging force can be resolved.
using HydraulicLoadFunction = std::function<std::array<double, 2>(double lift_rate, double tilt_rate)>;

/// Flow-limited hydraulics: lever -> valve opening -> flow
/// demand, proportionally rationed when the pump flow D*w is exceeded.
/// Function pressure follows the load torque. A function whose load would
/// exceed relief moves at the largest flow fraction that holds its pressure
/// at relief; the rest of its flow crosses the relief valve. A function
/// driven into its end stop does not move.
HydraulicsStep hydraulics_step(double lift_cmd, double tilt_cmd, double omega_engine,
                               const HydraulicLoadFunction& loads, const HydraulicsModel& model, double dt,
                               const EndStops& stops = {});

/// Constant-load form.
HydraulicsStep hydraulics_step(double lift_cmd, double tilt_cmd, double omega_engine, double load_torque_lift,
                               double load_torque_tilt, const HydraulicsModel& model, double dt,
                               const EndStops& stops = {});

// ---------------------------------------------------------------------------
// Power accounting

struct PowerSplit {
    double engine = 0.0;
    double driveline = 0.0;
    double hydraulics = 0.0;
    double loss = 0.0;
};

inline constexpr double kPowerIdentityTol = 1e-9;

/// Splits indicated engine power into the converter (driveline) path, the
/// hydraulic path, and the remainder (friction and engine inertia).
PowerSplit power_split(double omega_engine, double indicated_torque, double pump_torque, double hydraulic_torque);

double power_residual(const PowerSplit& p);

// ---------------------------------------------------------------------------
// State

struct MachineState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double v = 0.0;  // m/s along heading
    double omega_engine = 0.0;
    Gear gear = Gear::N;
    double shift_timer = 0.0;  // s of interlock remaining
    double lift = 0.0;         // rad
    double tilt = 0.0;         // rad
    double lift_rate = 0.0;    // rad/s over the last step
    double tilt_rate = 0.0;
    double omega_wheel = 0.0;
    double bucket_fill = 0.0;  // fraction of capacity
    double fuel_used = 0.0;    // g

    ChassisPose pose() const { return {x, y, heading}; }
};

}  // namespace loadcycle::machine
