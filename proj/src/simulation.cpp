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

#include "loadcycle/sim.hpp"

#include <algorithm>
#include <cmath>

#include "loadcycle/sensing.hpp"

namespace loadcycle::sim {

namespace {

std::string where(std::uint64_t step, Phase phase)
{
    return "step " + std::to_string(step) + ", phase " + std::string(phase_name(phase)) + ": ";
}

bool finite_state(const machine::MachineState& s)
{
    for (double x : {s.x, s.y, s.heading, s.v, s.omega_engine, s.lift, s.tilt, s.lift_rate, s.tilt_rate,
                     s.omega_wheel, s.bucket_fill, s.fuel_used}) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

template <class F>
void wrap_invalid(const std::string& path, F&& f)
{
    try {
        f();
    }
    catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace

void SimConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("sim.dt", "must be positive");
    }
    if (log_decimation < 1) {
        throw ConfigError("sim.log_decimation", "must be at least 1");
    }
    if (!(max_sim_time >= 0.0)) {
        throw ConfigError("sim.max_sim_time", "must be non-negative");
    }
    const double markers = marker_interval / log_interval();
    if (!(marker_interval > 0.0) || std::abs(markers - std::round(markers)) > 1e-9 * std::max(1.0, markers)) {
        throw ConfigError("sim.marker_interval", "must be a positive multiple of dt * log_decimation");
    }
    wrap_invalid("engine", [&] { plant.engine.validate(); });
    wrap_invalid("driveline", [&] { plant.driveline.validate(); });
    wrap_invalid("linkage", [&] { plant.linkage.validate(); });
    wrap_invalid("hydraulics", [&] { plant.hydraulics.validate(); });
    wrap_invalid("pile", [&] { plant.pile.validate(); });
    wrap_invalid("operator", [&] { op.validate(); });
    if (!(task.dump_height > 0.0) || !(task.return_distance > 0.0)) {
        throw ConfigError("task", "dump height and return distance must be positive");
    }
}

machine::MachineState initial_state(const SimConfig& config)
{
    machine::MachineState s;
    s.x = config.task.start_x;
    s.y = config.task.start_y;
    s.heading = config.task.start_heading;
    s.omega_engine = config.plant.engine.idle_speed;
    s.gear = Gear::F2;
    s.lift = config.plant.linkage.lift_ref;
    s.tilt = config.plant.linkage.tilt_ref;
    return s;
}

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)), state_(initial_state(config_)),
      op_(operator_model::initial_operator_state(config_.task, state_.gear))
{
}

bool Simulation::step()
{
    if (finished_) {
        return false;
    }
    const Phase before = op_.phase;
    try {
        const operator_model::SensingContext ctx{config_.plant.linkage, config_.plant.driveline, config_.plant.pile,
                                                 config_.task};
        const operator_model::SensedState sensed = operator_model::sense(state_, ctx, bearing_memory_);
        bearing_memory_ = sensed.bearing;

        auto [cmd, next] = operator_model::phase_step(sensed, op_, config_.op, config_.task, config_.dt);
        op_ = next;
        if (!operator_model::is_phase_edge(before, op_.phase)) {
            throw SimulationFault("undeclared phase transition");
        }

        LogRow row = advance_plant(cmd);
        ++steps_;
        row.t = time();
        row.phase = op_.phase;
        row.geometry = operator_model::FillGeometry{sensed.bearing, sensed.slope, sensed.attack, sensed.clearance};
        last_ = row;

        finished_ = op_.phase == Phase::ReturnOrStop;
        if (steps_ % static_cast<std::uint64_t>(config_.log_decimation) == 0 || finished_) {
            log_.rows.push_back(row);
        }
    }
    catch (const CycleFault&) {
        throw;
    }
    catch (const SimulationFault& e) {
        throw CycleFault(where(steps_, op_.phase) + e.what(), std::move(log_));
    }
    return !finished_;
}

LogRow Simulation::advance_plant(const operator_model::OperatorCommand& cmd)
{
    const PlantModels& m = config_.plant;
    const double dt = config_.dt;
    machine::MachineState& s = state_;
    LogRow row;
    row.cmd = cmd;

    if (cmd.gear != s.gear) {
        s.gear = cmd.gear;
        s.shift_timer = m.driveline.shift_interlock;
    }
    const bool engaged = s.shift_timer <= 0.0 && s.gear != Gear::N;
    row.interlock = s.shift_timer > 0.0;
    s.shift_timer = std::max(0.0, s.shift_timer - dt);

    // Bucket geometry at the start of the step. The digging force depends on
    // the edge velocity, so the linkage loads are a function of the rates.
    const machine::EdgePose edge = machine::linkage_fk(s.lift, s.tilt, s.pose(), m.linkage);
    const double cos_h = std::cos(s.heading);
    const auto jac = machine::edge_jacobian(s.lift, s.tilt, m.linkage);
    const environment::DigContact contact = environment::dig_contact(edge.x, edge.z, m.pile);
    const auto dig_at = [&](double v, double lift_rate, double tilt_rate) {
        const double link_vx = jac[0][0] * lift_rate + jac[0][1] * tilt_rate;
        const double link_vz = jac[1][0] * lift_rate + jac[1][1] * tilt_rate;
        return environment::dig_force(contact, cos_h * (v + link_vx), link_vz, edge.angle, s.bucket_fill, m.pile);
    };

    // Hydraulics against gravity and the digging force.
    const double payload = environment::payload_mass(s.bucket_fill, m.linkage.bucket_capacity, m.pile);
    const auto linkage_loads = [&](double lift_rate, double tilt_rate) -> std::array<double, 2> {
        const environment::DigForce f = dig_at(s.v, lift_rate, tilt_rate);
        const machine::LinkageLoads l = machine::linkage_loads(s.lift, s.tilt, payload, f.fx * cos_h, f.fz, m.linkage);
        return {l.lift, l.tilt};
    };
    machine::EndStops stops;
    stops.lift_low = s.lift <= m.linkage.lift_min;
    stops.lift_high = s.lift >= m.linkage.lift_max;
    stops.tilt_low = s.tilt <= m.linkage.tilt_min;
    stops.tilt_high = s.tilt >= m.linkage.tilt_max;
    const machine::HydraulicsStep hyd =
        machine::hydraulics_step(cmd.lift, cmd.tilt, s.omega_engine, linkage_loads, m.hydraulics, dt, stops);
    const environment::DigForce dig = dig_at(s.v, hyd.lift_rate, hyd.tilt_rate);

    // Converter and engine.
    const machine::GearSpec gear = m.driveline.gear(s.gear);
    const double omega_pump = s.omega_engine;
    const machine::ConverterTorques conv =
        engaged ? machine::converter_torques(omega_pump, s.omega_wheel * gear.ratio, m.converter)
                : machine::ConverterTorques{};
    const machine::EngineStep eng =
        machine::engine_step(cmd.throttle, conv.pump + hyd.torque_on_engine, omega_pump, m.engine, dt);

    // Wheels and chassis.
    machine::DrivelineLoads dl;
    dl.turbine_torque = [&](double omega_turbine) {
        return machine::converter_torques(omega_pump, omega_turbine, m.converter).turbine;
    };
    dl.external_force = [&](double v) { return dig_at(v, hyd.lift_rate, hyd.tilt_rate).fx * cos_h; };
    dl.mass = m.driveline.vehicle_mass + payload;
    dl.normal_load = machine::driving_normal_load(dl.mass, cmd.lift, m.driveline);
    dl.brake = cmd.brake;
    const machine::DrivelineStep drv =
        machine::driveline_step(dl, s.gear, engaged, s.v, s.omega_wheel, m.driveline, dt);

    row.power = machine::power_split(omega_pump, eng.indicated_torque, conv.pump, hyd.torque_on_engine);

    // Integrate.
    s.v = drv.v;
    s.omega_wheel = drv.omega_wheel;
    const double steer_angle = cmd.steer * m.driveline.max_steer_angle;
    s.heading = kernel::wrap_angle(s.heading + s.v * std::tan(steer_angle) / m.driveline.wheelbase * dt);
    s.x += s.v * std::cos(s.heading) * dt;
    s.y += s.v * std::sin(s.heading) * dt;
    const double lift = std::clamp(s.lift + hyd.d_lift, m.linkage.lift_min, m.linkage.lift_max);
    const double tilt = std::clamp(s.tilt + hyd.d_tilt, m.linkage.tilt_min, m.linkage.tilt_max);
    s.lift_rate = (lift - s.lift) / dt;
    s.tilt_rate = (tilt - s.tilt) / dt;
    s.lift = lift;
    s.tilt = tilt;
    s.omega_engine = eng.omega;
    s.fuel_used += eng.fuel_rate * dt;

    // Bucket fill from the section swept by the edge, spill when tipped.
    const machine::EdgePose edge_new = machine::linkage_fk(s.lift, s.tilt, s.pose(), m.linkage);
    const auto jac_new = machine::edge_jacobian(s.lift, s.tilt, m.linkage);
    const double vx_new = std::cos(s.heading) * (s.v + jac_new[0][0] * s.lift_rate + jac_new[0][1] * s.tilt_rate);
    const double vz_new = jac_new[1][0] * s.lift_rate + jac_new[1][1] * s.tilt_rate;
    const environment::DigContact contact_new = environment::dig_contact(edge_new.x, edge_new.z, m.pile);
    const double swept = environment::swept_area_rate(contact_new, vx_new, vz_new, m.pile);
    s.bucket_fill = environment::fill_update(s.bucket_fill, swept, contact_new, m.pile, dt);
    s.bucket_fill = environment::spill_update(s.bucket_fill, edge_new.angle, m.pile, dt);

    if (!finite_state(s)) {
        throw SimulationFault("non-finite machine state");
    }

    row.gear = s.gear;
    row.state = s;
    row.omega_pump = omega_pump;
    row.omega_turbine = drv.omega_turbine;
    row.speed_ratio = conv.speed_ratio;
    row.engine_torque = eng.indicated_torque;
    row.pump_torque = conv.pump;
    row.hydraulic_torque = hyd.torque_on_engine;
    row.fuel_rate = eng.fuel_rate;
    row.edge = edge_new;
    row.slip = drv.slip;
    row.penetration = contact_new.penetration;
    row.dig = dig;
    row.lift_pressure = hyd.lift_pressure;
    row.tilt_pressure = hyd.tilt_pressure;
    row.traction = drv.traction;
    return row;
}

RunResult run_cycle(const SimConfig& config)
{
    config.validate();
    Simulation sim(config);
    const auto max_steps = static_cast<std::uint64_t>(std::floor(config.max_sim_time / config.dt + 1e-9));
    while (sim.steps() < max_steps && sim.step()) {
    }
    if (sim.log().rows.empty()) {
        throw CycleFault("no progress: simulation produced no telemetry", sim.take_log());
    }
    if (!sim.finished()) {
        throw CycleFault("cycle incomplete at max_sim_time, phase " +
                             std::string(phase_name(sim.operator_state().phase)),
                         sim.take_log());
    }
    RunResult out;
    out.log = sim.take_log();
    out.metrics = compute_metrics(out.log, config);
    return out;
}

}  // namespace loadcycle::sim
