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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loadcycle/environment.hpp"
#include "loadcycle/machine.hpp"
#include "loadcycle/operator_model.hpp"

namespace loadcycle::sim {

struct PlantModels {
    machine::EngineModel engine;
    machine::ConverterMap converter;
    machine::DrivelineModel driveline;
    machine::LinkageModel linkage;
    machine::HydraulicsModel hydraulics;
    environment::PileModel pile;
};

struct SimConfig {
    double dt = 0.001;
    int log_decimation = 10;
    double max_sim_time = 120.0;
    double marker_interval = 0.5;
    std::uint64_t random_seed = 0;  // reserved, the core is deterministic
    PlantModels plant;
    operator_model::OperatorParams op;
    operator_model::TaskDescription task;

    double log_interval() const { return dt * log_decimation; }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const;
};

/// One telemetry row. Commands are the ones applied during the step ending at
/// t; powers are the step's averages; state is at t.
struct LogRow {
    double t = 0.0;
    Phase phase = Phase::ApproachPile;
    operator_model::OperatorCommand cmd;
    Gear gear = Gear::N;  // engaged gearbox position
    bool interlock = false;
    machine::MachineState state;
    double omega_pump = 0.0;  // engine speed the step's torques and powers were evaluated at
    double omega_turbine = 0.0;
    double speed_ratio = 0.0;
    double engine_torque = 0.0;
    double pump_torque = 0.0;
    double hydraulic_torque = 0.0;
    double fuel_rate = 0.0;
    machine::PowerSplit power;
    machine::EdgePose edge;
    operator_model::FillGeometry geometry;
    double slip = 0.0;
    double penetration = 0.0;
    environment::DigForce dig;
    double lift_pressure = 0.0;
    double tilt_pressure = 0.0;
    double traction = 0.0;
};

struct CycleLog {
    std::vector<LogRow> rows;
};

struct DutyPoint {
    double speed = 0.0;   // omega / rated speed
    double torque = 0.0;  // indicated torque / rated torque
};

struct Metrics {
    double cycle_time = 0.0;
    double fuel_total = 0.0;          // g, trapezoid of fuel rate over the log
    double bucket_fill_final = 0.0;   // fill carried out of the pile
    double bucket_fill_end = 0.0;     // fill at the end of the log
    double mean_engine_speed = 0.0;   // rad/s
    double max_engine_speed = 0.0;
    double mean_normalized_speed = 0.0;
    double energy_engine = 0.0;       // J
    double energy_driveline = 0.0;
    double energy_hydraulics = 0.0;
    double energy_loss = 0.0;
    int fill_phase_count = 0;
    bool completed = false;
    std::map<std::string, double> phase_durations;
    std::vector<DutyPoint> duty_points;
};

/// Simulation aborted. The partial log is kept for diagnostics.
class CycleFault : public SimulationFault {
public:
    CycleFault(const std::string& what, CycleLog partial)
        : SimulationFault(what), partial_(std::move(partial))
    {
    }

    const CycleLog& partial_log() const { return partial_; }

private:
    CycleLog partial_;
};

/// One loading cycle, stepped explicitly. Per step: sense the current state,
/// let the operator act, then advance hydraulics, converter, engine,
/// driveline and the environment with the new command.
class Simulation {
public:
    explicit Simulation(SimConfig config);

    /// Advances one step. Returns false once the cycle has ended.
    bool step();

    bool finished() const { return finished_; }
    double time() const { return static_cast<double>(steps_) * config_.dt; }
    std::uint64_t steps() const { return steps_; }
    const machine::MachineState& state() const { return state_; }
    const operator_model::OperatorState& operator_state() const { return op_; }
    const CycleLog& log() const { return log_; }
    CycleLog take_log() { return std::move(log_); }
    const SimConfig& config() const { return config_; }
    const LogRow& last_row() const { return last_; }

private:
    LogRow advance_plant(const operator_model::OperatorCommand& cmd);

    SimConfig config_;
    machine::MachineState state_;
    operator_model::OperatorState op_;
    double bearing_memory_ = 0.0;
    std::uint64_t steps_ = 0;
    bool finished_ = false;
    CycleLog log_;
    LogRow last_;
};

machine::MachineState initial_state(const SimConfig& config);

struct RunResult {
    CycleLog log;
    Metrics metrics;
};

/// Runs until the operator reaches ReturnOrStop. Throws CycleFault on a
/// fault or when max_sim_time passes first.
RunResult run_cycle(const SimConfig& config);

Metrics compute_metrics(const CycleLog& log, const SimConfig& config);

struct Delta {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0;  // b - a
    double ratio = 1.0;  // b / a
};

struct ComparisonReport {
    Delta cycle_time;
    Delta fuel_total;
    Delta mean_engine_speed;
    Delta bucket_fill_final;
    double mean_normalized_speed_shift = 0.0;
};

ComparisonReport compare_runs(const Metrics& a, const Metrics& b);

}  // namespace loadcycle::sim
