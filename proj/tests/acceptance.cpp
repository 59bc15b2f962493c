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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "loadcycle/config.hpp"
#include "loadcycle/io.hpp"
#include "loadcycle/kernel.hpp"
#include "loadcycle/sim.hpp"
#include "support.hpp"

using namespace loadcycle;
using nlohmann::json;

namespace {

// Tolerances, pinned.
constexpr double kMinSpeedGain = 0.03;          // weak converter: mean engine speed at least +3 %
constexpr double kStartBearingTol = 3.0 * std::numbers::pi / 180.0;
constexpr double kPowerRelTol = 1e-9;
constexpr double kShareOfEngine = 0.05;         // both branches above 5 % of engine power
constexpr double kCompetitionFraction = 0.5;    // for at least half of Fill
constexpr double kDutyTol = 1e-9;
constexpr double kHighLoad = 0.8;
constexpr double kSlipIncrease = 0.25;          // TC off: at least 25 % more integrated slip
constexpr double kStepRobustness = 0.02;        // dt halved: < 2 % change
constexpr double kMinFill = 0.8;
constexpr double kLiftTarget = 1.0;

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

struct Outcome {
    bool ok = false;
    std::string fault;
    sim::RunResult result;
};

Outcome run(const json& overrides)
{
    Outcome o;
    try {
        o.result = sim::run_cycle(config::resolve(overrides).config);
        o.ok = true;
    }
    catch (const std::exception& e) {
        o.fault = e.what();
    }
    return o;
}

std::vector<const sim::LogRow*> fill_rows(const sim::CycleLog& log)
{
    std::vector<const sim::LogRow*> out;
    for (const auto& r : log.rows) {
        if (r.phase == Phase::Fill) {
            out.push_back(&r);
        }
    }
    return out;
}

double integrated_fill_slip(const sim::CycleLog& log)
{
    const auto f = fill_rows(log);
    double sum = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        sum += 0.5 * (std::abs(f[i - 1]->slip) + std::abs(f[i]->slip)) * (f[i]->t - f[i - 1]->t);
    }
    return sum;
}

std::string telemetry_file(const sim::RunResult& r, const std::string& name)
{
    const auto dir = testing::scratch_dir("acceptance") / name;
    io::write_bundle(dir, r.log, r.metrics, config::reference_config().marker_interval);
    return testing::read_text(dir / "telemetry.csv");
}

json tc_disabled()
{
    return {{"operator",
             {{"slip_threshold_1", 1e3},
              {"slip_threshold_1_full", 2e3},
              {"slip_integral_limit", 1e3},
              {"slip_integral_limit_full", 2e3},
              {"slip_integral_max", 3e3}}}};
}

json half_step()
{
    const auto cfg = config::reference_config();
    return {{"sim", {{"dt", cfg.dt / 2.0}, {"log_decimation", cfg.log_decimation * 2}}}};
}

}  // namespace

int main()
{
    const auto started = std::chrono::steady_clock::now();
    const auto cfg = config::reference_config();

    auto f_ref = std::async(std::launch::async, run, json::object());
    auto f_weak = std::async(std::launch::async, run, json{{"converter", {{"capacity_scale", 0.8}}}});
    auto f_off = std::async(std::launch::async, run, tc_disabled());
    auto f_again = std::async(std::launch::async, run, json::object());
    auto f_half = std::async(std::launch::async, run, half_step());
    const Outcome ref = f_ref.get();
    const Outcome weak = f_weak.get();
    const Outcome off = f_off.get();
    const Outcome again = f_again.get();
    const Outcome half = f_half.get();

    if (!ref.ok) {
        std::printf("reference run faulted: %s\n", ref.fault.c_str());
        for (int id = 1; id <= 9; ++id) {
            if (id != 6 && id != 8) {
                report(id, false, "reference run faulted");
            }
        }
    }

    const sim::Metrics& m = ref.result.metrics;
    const auto fill = fill_rows(ref.result.log);

    // 1. Weaker converter: faster engine, more fuel, longer cycle.
    if (ref.ok) {
        if (!weak.ok) {
            report(1, false, "weak-converter run faulted: " + weak.fault);
        }
        else {
            const sim::Metrics& w = weak.result.metrics;
            const double gain = w.mean_engine_speed / m.mean_engine_speed - 1.0;
            const bool ok = gain >= kMinSpeedGain && w.fuel_total > m.fuel_total && w.cycle_time > m.cycle_time;
            report(1, ok,
                   fmt("mean speed %+.2f%% (min +3%%), fuel %+.3f g, cycle time %+.3f s", 100.0 * gain,
                       w.fuel_total - m.fuel_total, w.cycle_time - m.cycle_time));
        }
    }

    // 2. Bearing tracks the slope late in Fill and starts level.
    if (ref.ok) {
        bool ok = !fill.empty();
        double dev = INFINITY;
        double start = INFINITY;
        if (ok) {
            const std::size_t from = (3 * fill.size()) / 4;
            double sum = 0.0;
            for (std::size_t i = from; i < fill.size(); ++i) {
                sum += std::abs(fill[i]->geometry.bearing - fill[i]->geometry.slope);
            }
            dev = sum / static_cast<double>(fill.size() - from);
            start = fill.front()->geometry.bearing;
            ok = dev <= cfg.op.bearing_deviation_threshold && std::abs(start) <= kStartBearingTol;
        }
        report(2, ok,
               fmt("mean |bearing-slope| last 25%% = %.4f rad (limit %.4f), bearing at fill start %.2f deg (limit 3)",
                   dev, cfg.op.bearing_deviation_threshold, start * 180.0 / std::numbers::pi));
    }

    // 3. Power identity on every row and parallel competition in Fill.
    if (ref.ok) {
        double worst = 0.0;
        for (const auto& r : ref.result.log.rows) {
            worst = std::max(worst, machine::power_residual(r.power) / std::max(1.0, std::abs(r.power.engine)));
        }
        std::size_t both = 0;
        for (const auto* r : fill) {
            if (r->power.driveline > kShareOfEngine * r->power.engine &&
                r->power.hydraulics > kShareOfEngine * r->power.engine) {
                ++both;
            }
        }
        const double share = fill.empty() ? 0.0 : static_cast<double>(both) / static_cast<double>(fill.size());
        report(3, worst <= kPowerRelTol && share >= kCompetitionFraction,
               fmt("max relative residual %.3g (limit 1e-9), both branches > 5%% for %.1f%% of Fill (min 50%%)", worst,
                   100.0 * share));
    }

    // 4. Duty points under the full-load curve, high load present in Fill.
    if (ref.ok) {
        const auto& eng = cfg.plant.engine;
        double worst = -INFINITY;
        for (const auto& d : m.duty_points) {
            worst = std::max(worst, d.torque - kernel::table_eval(eng.max_torque, d.speed * eng.rated_speed) /
                                                   eng.rated_torque);
        }
        double peak = 0.0;
        for (const auto* r : fill) {
            peak = std::max(peak, r->engine_torque / eng.rated_torque);
        }
        report(4, worst <= kDutyTol && peak >= kHighLoad,
               fmt("max excess over curve %.3g (limit 1e-9), peak normalized torque in Fill %.3f (min 0.8)", worst,
                   peak));
    }

    // 5. Traction rules reduce slip.
    if (ref.ok) {
        if (!off.ok) {
            report(5, false, "rules-disabled run faulted: " + off.fault);
        }
        else {
            const double on_slip = integrated_fill_slip(ref.result.log);
            const double off_slip = integrated_fill_slip(off.result.log);
            report(5, off_slip >= (1.0 + kSlipIncrease) * on_slip,
                   fmt("integrated Fill slip %.4f s enabled, %.4f s disabled, ratio %.3f (min 1.25)", on_slip,
                       off_slip, off_slip / on_slip));
        }
    }

    // 6. The operator sees only the sensed state.
    {
        const auto problems = testing::firewall_violations();
        std::string detail = problems.empty() ? "SensedState and operator includes clean" : problems.front();
        report(6, problems.empty(), detail);
    }

    // 7. Determinism and step robustness.
    if (ref.ok) {
        bool ok = again.ok && half.ok;
        std::string detail;
        if (!ok) {
            detail = "repeat or half-step run faulted: " + (again.ok ? half.fault : again.fault);
        }
        else {
            const bool same = telemetry_file(ref.result, "a") == telemetry_file(again.result, "b");
            const double dt_change = std::abs(half.result.metrics.cycle_time / m.cycle_time - 1.0);
            const double fuel_change = std::abs(half.result.metrics.fuel_total / m.fuel_total - 1.0);
            ok = same && dt_change < kStepRobustness && fuel_change < kStepRobustness;
            detail = std::string(same ? "telemetry byte-identical" : "telemetry differs") +
                     fmt(", dt/2 changes cycle time %.3f%% and fuel %.3f%% (limit 2%%)", 100.0 * dt_change,
                         100.0 * fuel_change);
        }
        report(7, ok, detail);
    }

    // 8. Kernel property suites.
    {
        const auto problems = testing::kernel_property_failures();
        report(8, problems.empty(), problems.empty() ? "all kernel properties hold" : problems.front());
    }

    // 9. Cycle completion and the shift events at Fill entry and exit.
    if (ref.ok) {
        const auto& rows = ref.result.log.rows;
        const sim::LogRow* exit_row = nullptr;
        for (const auto& r : rows) {
            if (r.phase == Phase::LeavePileReverse) {
                exit_row = &r;
                break;
            }
        }
        const bool entry_f1 = !fill.empty() && fill.front()->cmd.gear == Gear::F1;
        const bool exit_r2 = exit_row != nullptr && exit_row->cmd.gear == Gear::R2;
        // Lift goes to full through the operator's command ramp.
        double lift_time = INFINITY;
        if (exit_row != nullptr) {
            for (const sim::LogRow* r = exit_row; r != rows.data() + rows.size(); ++r) {
                if (r->phase != Phase::LeavePileReverse) {
                    break;
                }
                if (r->cmd.lift >= kLiftTarget) {
                    lift_time = r->t - exit_row->t;
                    break;
                }
            }
        }
        const double lift_limit = 1.0 / cfg.op.rate_lift + cfg.log_interval();
        const bool ok = m.completed && rows.back().phase == Phase::ReturnOrStop &&
                        m.bucket_fill_final >= kMinFill && m.fill_phase_count == 1 && entry_f1 && exit_r2 &&
                        lift_time <= lift_limit;
        report(9, ok,
               fmt("fill %.3f (min 0.8), fill phases %.0f, lift command 1 after %.3f s (limit %.3f s)",
                   m.bucket_fill_final, m.fill_phase_count, lift_time, lift_limit) +
                   (entry_f1 ? ", entry F1" : ", entry not F1") + (exit_r2 ? ", exit R2" : ", exit not R2"));
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%s (%d failed, %.1f s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures, secs);
    return failures == 0 ? 0 : 1;
}
