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

namespace {

constexpr double kBrakeOmegaReg = 0.2;   // rad/s, brake torque ramps in below this wheel speed
constexpr double kRollingSpeedReg = 0.05;  // m/s

}  // namespace

void DrivelineModel::validate() const
{
    const auto check_gear = [this](Gear g, bool reverse) {
        const GearSpec& s = gear(g);
        if (reverse ? !(s.ratio < 0.0) : !(s.ratio > 0.0)) {
            throw std::invalid_argument(std::string("gear ") + std::string(gear_name(g)) +
                                        (reverse ? ": reverse ratios must be negative"
                                                 : ": forward ratios must be positive"));
        }
        if (!(s.efficiency > 0.0 && s.efficiency <= 1.0)) {
            throw std::invalid_argument(std::string("gear ") + std::string(gear_name(g)) +
                                        ": efficiency must lie in (0, 1]");
        }
    };
    check_gear(Gear::F1, false);
    check_gear(Gear::F2, false);
    check_gear(Gear::R1, true);
    check_gear(Gear::R2, true);
    if (!(std::abs(gear(Gear::F1).ratio) > std::abs(gear(Gear::F2).ratio))) {
        throw std::invalid_argument("first gear must be lower (numerically larger ratio) than second");
    }
    if (!(wheel_radius > 0.0 && wheel_inertia > 0.0 && vehicle_mass > 0.0)) {
        throw std::invalid_argument("wheel radius, wheel inertia and vehicle mass must be positive");
    }
    if (!(rolling_resistance >= 0.0 && brake_torque >= 0.0 && shift_interlock >= 0.0)) {
        throw std::invalid_argument("rolling resistance, brake torque and interlock must be non-negative");
    }
    if (!(static_load_split > 0.0 && static_load_split <= 1.0) || !(lift_load_transfer >= 0.0)) {
        throw std::invalid_argument("load split must lie in (0, 1] and transfer must be non-negative");
    }
    if (traction_curve(0.0) != 0.0 || traction_curve.min_value() < 0.0) {
        throw std::invalid_argument("traction curve must start at 0 and stay non-negative");
    }
    if (!(wheelbase > 0.0 && max_steer_angle > 0.0 && max_steer_angle < 1.5)) {
        throw std::invalid_argument("wheelbase and steering angle must be positive");
    }
}

double wheel_slip(double omega_wheel, double radius, double v)
{
    const double rim = omega_wheel * radius;
    return (rim - v) / std::max(std::abs(rim), kSlipSpeedEps);
}

double traction_force(double slip, double normal_load, const kernel::Table1D& curve)
{
    if (slip == 0.0) {
        return 0.0;
    }
    const double force = curve(std::abs(slip)) * normal_load;
    return slip > 0.0 ? force : -force;
}

double driving_normal_load(double total_mass, double lift_cmd, const DrivelineModel& model)
{
    const double share = model.static_load_split + model.lift_load_transfer * std::max(0.0, lift_cmd);
    return total_mass * kGravity * std::min(share, 1.0);
}

DrivelineStep driveline_step(const DrivelineLoads& loads, Gear gear, bool engaged, double v, double omega_wheel,
                             const DrivelineModel& model, double dt)
{
    engaged = engaged && gear != Gear::N;
    const GearSpec spec = model.gear(gear);
    const double r = model.wheel_radius;

    const auto turbine_at = [&](double omega) { return engaged ? loads.turbine_torque(omega * spec.ratio) : 0.0; };

    // Time derivatives of (wheel speed, chassis speed).
    const auto rhs = [&](double omega, double speed) {
        const double wheel_torque = turbine_at(omega) * spec.ratio * spec.efficiency;
        const double traction = traction_force(wheel_slip(omega, r, speed), loads.normal_load, model.traction_curve);
        const double brake = loads.brake * model.brake_torque * std::clamp(omega / kBrakeOmegaReg, -1.0, 1.0);
        const double rolling = model.rolling_resistance * loads.mass * kGravity *
                               std::clamp(speed / kRollingSpeedReg, -1.0, 1.0);
        const double external = loads.external_force ? loads.external_force(speed) : 0.0;
        return std::array<double, 2>{(wheel_torque - traction * r - brake) / model.wheel_inertia,
                                     (traction - rolling + external) / loads.mass};
    };

    const auto f0 = rhs(omega_wheel, v);
    const double h_w = 1e-6 * std::max(1.0, std::abs(omega_wheel));
    const double h_v = 1e-6 * std::max(1.0, std::abs(v));
    const auto fw = rhs(omega_wheel + h_w, v);
    const auto fv = rhs(omega_wheel, v + h_v);
    const double j00 = (fw[0] - f0[0]) / h_w;
    const double j10 = (fw[1] - f0[1]) / h_w;
    const double j01 = (fv[0] - f0[0]) / h_v;
    const double j11 = (fv[1] - f0[1]) / h_v;

    // (I - dt*J) * delta = dt * f0
    const double a = 1.0 - dt * j00;
    const double b = -dt * j01;
    const double c = -dt * j10;
    const double d = 1.0 - dt * j11;
    const double det = a * d - b * c;
    double d_omega = dt * f0[0];
    double d_v = dt * f0[1];
    if (std::abs(det) > 1e-12) {
        const double rw = d_omega;
        const double rv = d_v;
        d_omega = (d * rw - b * rv) / det;
        d_v = (a * rv - c * rw) / det;
    }

    DrivelineStep out;
    out.omega_wheel = omega_wheel + d_omega;
    out.v = v + d_v;
    if (!std::isfinite(out.omega_wheel) || !std::isfinite(out.v)) {
        throw SimulationFault("driveline: non-finite state");
    }
    out.omega_turbine = engaged ? out.omega_wheel * spec.ratio : 0.0;
    out.turbine_torque = turbine_at(out.omega_wheel);
    out.slip = wheel_slip(out.omega_wheel, r, out.v);
    out.traction = traction_force(out.slip, loads.normal_load, model.traction_curve);
    return out;
}

DrivelineStep driveline_step(double turbine_torque, Gear gear, double v, double omega_wheel, double external_force,
                             const DrivelineModel& model, double dt)
{
    DrivelineLoads loads;
    loads.turbine_torque = [turbine_torque](double) { return turbine_torque; };
    loads.external_force = [external_force](double) { return external_force; };
    loads.mass = model.vehicle_mass;
    loads.normal_load = driving_normal_load(model.vehicle_mass, 0.0, model);
    return driveline_step(loads, gear, gear != Gear::N, v, omega_wheel, model, dt);
}

}  // namespace loadcycle::machine
