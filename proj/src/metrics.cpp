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
#include <stdexcept>

#include "loadcycle/sim.hpp"

namespace loadcycle::sim {

namespace {

template <class F>
double trapezoid(const std::vector<LogRow>& rows, F&& value)
{
    double sum = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        sum += 0.5 * (value(rows[i - 1]) + value(rows[i])) * (rows[i].t - rows[i - 1].t);
    }
    return sum;
}

Delta make_delta(double a, double b)
{
    Delta d;
    d.a = a;
    d.b = b;
    d.delta = b - a;
    d.ratio = a != 0.0 ? b / a : (b == 0.0 ? 1.0 : INFINITY);
    return d;
}

}  // namespace

Metrics compute_metrics(const CycleLog& log, const SimConfig& config)
{
    const auto& rows = log.rows;
    if (rows.empty()) {
        throw std::invalid_argument("metrics: empty log");
    }
    const machine::EngineModel& engine = config.plant.engine;

    Metrics m;
    m.cycle_time = rows.back().t;
    m.completed = rows.back().phase == Phase::ReturnOrStop;
    m.fuel_total = trapezoid(rows, [](const LogRow& r) { return r.fuel_rate; });
    m.energy_engine = trapezoid(rows, [](const LogRow& r) { return r.power.engine; });
    m.energy_driveline = trapezoid(rows, [](const LogRow& r) { return r.power.driveline; });
    m.energy_hydraulics = trapezoid(rows, [](const LogRow& r) { return r.power.hydraulics; });
    m.energy_loss = trapezoid(rows, [](const LogRow& r) { return r.power.loss; });
    m.bucket_fill_end = rows.back().state.bucket_fill;

    for (int i = 0; i < kPhaseCount; ++i) {
        m.phase_durations[std::string(phase_name(static_cast<Phase>(i)))] = 0.0;
    }

    double speed_sum = 0.0;
    Phase previous = rows.front().phase;
    m.fill_phase_count = previous == Phase::Fill ? 1 : 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const LogRow& r = rows[i];
        const double span = i == 0 ? r.t : r.t - rows[i - 1].t;
        m.phase_durations[std::string(phase_name(r.phase))] += span;
        if (i > 0 && r.phase != previous) {
            if (r.phase == Phase::Fill) {
                ++m.fill_phase_count;
            }
            if (previous == Phase::Fill) {
                m.bucket_fill_final = rows[i - 1].state.bucket_fill;
            }
        }
        previous = r.phase;
        speed_sum += r.state.omega_engine;
        m.max_engine_speed = std::max(m.max_engine_speed, r.state.omega_engine);
        // Torque is paired with the speed it was produced at.
        m.duty_points.push_back({r.omega_pump / engine.rated_speed, r.engine_torque / engine.rated_torque});
    }
    if (previous == Phase::Fill) {
        m.bucket_fill_final = rows.back().state.bucket_fill;
    }
    m.mean_engine_speed = speed_sum / static_cast<double>(rows.size());
    m.mean_normalized_speed = m.mean_engine_speed / engine.rated_speed;
    return m;
}

ComparisonReport compare_runs(const Metrics& a, const Metrics& b)
{
    ComparisonReport r;
    r.cycle_time = make_delta(a.cycle_time, b.cycle_time);
    r.fuel_total = make_delta(a.fuel_total, b.fuel_total);
    r.mean_engine_speed = make_delta(a.mean_engine_speed, b.mean_engine_speed);
    r.bucket_fill_final = make_delta(a.bucket_fill_final, b.bucket_fill_final);
    r.mean_normalized_speed_shift = b.mean_normalized_speed - a.mean_normalized_speed;
    return r;
}

}  // namespace loadcycle::sim
