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

#include "loadcycle/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace loadcycle::io {

using nlohmann::json;

namespace {

struct Column {
    const char* name;
    double (*get)(const sim::LogRow&);
};

// clang-format off
const Column kColumns[] = {
    {"t", [](const sim::LogRow& r) { return r.t; }},
    {"phase", [](const sim::LogRow& r) { return static_cast<double>(r.phase); }},
    {"cmd_throttle", [](const sim::LogRow& r) { return r.cmd.throttle; }},
    {"cmd_brake", [](const sim::LogRow& r) { return r.cmd.brake; }},
    {"cmd_steer", [](const sim::LogRow& r) { return r.cmd.steer; }},
    {"cmd_lift", [](const sim::LogRow& r) { return r.cmd.lift; }},
    {"cmd_tilt", [](const sim::LogRow& r) { return r.cmd.tilt; }},
    {"cmd_gear", [](const sim::LogRow& r) { return static_cast<double>(r.cmd.gear); }},
    {"gear", [](const sim::LogRow& r) { return static_cast<double>(r.gear); }},
    {"interlock", [](const sim::LogRow& r) { return r.interlock ? 1.0 : 0.0; }},
    {"x", [](const sim::LogRow& r) { return r.state.x; }},
    {"y", [](const sim::LogRow& r) { return r.state.y; }},
    {"heading", [](const sim::LogRow& r) { return r.state.heading; }},
    {"v", [](const sim::LogRow& r) { return r.state.v; }},
    {"omega_wheel", [](const sim::LogRow& r) { return r.state.omega_wheel; }},
    {"omega_engine", [](const sim::LogRow& r) { return r.state.omega_engine; }},
    {"omega_pump", [](const sim::LogRow& r) { return r.omega_pump; }},
    {"omega_turbine", [](const sim::LogRow& r) { return r.omega_turbine; }},
    {"speed_ratio", [](const sim::LogRow& r) { return r.speed_ratio; }},
    {"engine_torque", [](const sim::LogRow& r) { return r.engine_torque; }},
    {"pump_torque", [](const sim::LogRow& r) { return r.pump_torque; }},
    {"hydraulic_torque", [](const sim::LogRow& r) { return r.hydraulic_torque; }},
    {"fuel_rate", [](const sim::LogRow& r) { return r.fuel_rate; }},
    {"fuel_used", [](const sim::LogRow& r) { return r.state.fuel_used; }},
    {"p_engine", [](const sim::LogRow& r) { return r.power.engine; }},
    {"p_driveline", [](const sim::LogRow& r) { return r.power.driveline; }},
    {"p_hydraulics", [](const sim::LogRow& r) { return r.power.hydraulics; }},
    {"p_loss", [](const sim::LogRow& r) { return r.power.loss; }},
    {"lift", [](const sim::LogRow& r) { return r.state.lift; }},
    {"tilt", [](const sim::LogRow& r) { return r.state.tilt; }},
    {"lift_rate", [](const sim::LogRow& r) { return r.state.lift_rate; }},
    {"tilt_rate", [](const sim::LogRow& r) { return r.state.tilt_rate; }},
    {"lift_pressure", [](const sim::LogRow& r) { return r.lift_pressure; }},
    {"tilt_pressure", [](const sim::LogRow& r) { return r.tilt_pressure; }},
    {"edge_x", [](const sim::LogRow& r) { return r.edge.x; }},
    {"edge_z", [](const sim::LogRow& r) { return r.edge.z; }},
    {"edge_angle", [](const sim::LogRow& r) { return r.edge.angle; }},
    {"bearing", [](const sim::LogRow& r) { return r.geometry.bearing; }},
    {"slope", [](const sim::LogRow& r) { return r.geometry.slope; }},
    {"attack", [](const sim::LogRow& r) { return r.geometry.attack; }},
    {"clearance", [](const sim::LogRow& r) { return r.geometry.clearance; }},
    {"wheel_slip", [](const sim::LogRow& r) { return r.slip; }},
    {"traction", [](const sim::LogRow& r) { return r.traction; }},
    {"penetration", [](const sim::LogRow& r) { return r.penetration; }},
    {"dig_fx", [](const sim::LogRow& r) { return r.dig.fx; }},
    {"dig_fz", [](const sim::LogRow& r) { return r.dig.fz; }},
    {"bucket_fill", [](const sim::LogRow& r) { return r.state.bucket_fill; }},
};
// clang-format on

void write_header(std::ostream& out, const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i ? "," : "") << names[i];
    }
    out << '\n';
}

json delta_json(const sim::Delta& d) { return {{"a", d.a}, {"b", d.b}, {"delta", d.delta}, {"ratio", d.ratio}}; }

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    body(out);
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace

const std::vector<std::string>& telemetry_columns()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const Column& c : kColumns) {
            v.emplace_back(c.name);
        }
        return v;
    }();
    return names;
}

std::string format_number(double value)
{
    if (value == 0.0) {
        return "0";  // folds -0 so files do not depend on the sign of zero
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_telemetry(std::ostream& out, const sim::CycleLog& log)
{
    write_header(out, telemetry_columns());
    for (const sim::LogRow& row : log.rows) {
        bool first = true;
        for (const Column& c : kColumns) {
            out << (first ? "" : ",") << format_number(c.get(row));
            first = false;
        }
        out << '\n';
    }
}

void write_trajectory(std::ostream& out, const sim::CycleLog& log, double marker_interval)
{
    write_header(out, {"t", "edge_x", "edge_z", "edge_angle", "phase"});
    if (log.rows.empty() || !(marker_interval > 0.0)) {
        return;
    }
    const double t0 = log.rows.front().t;
    long next = 0;
    for (const sim::LogRow& row : log.rows) {
        // Small slack absorbs rounding in the accumulated row time.
        const double k = (row.t - t0) / marker_interval;
        if (k + 1e-6 < static_cast<double>(next)) {
            continue;
        }
        out << format_number(row.t) << ',' << format_number(row.edge.x) << ',' << format_number(row.edge.z) << ','
            << format_number(row.edge.angle) << ',' << phase_name(row.phase) << '\n';
        next = std::lround(std::floor(k + 1e-6)) + 1;
    }
}

void write_duty(std::ostream& out, const std::vector<sim::DutyPoint>& points)
{
    write_header(out, {"normalized_speed", "normalized_torque"});
    for (const sim::DutyPoint& p : points) {
        out << format_number(p.speed) << ',' << format_number(p.torque) << '\n';
    }
}

void write_merged_duty(std::ostream& out, const std::vector<std::pair<std::string, std::vector<sim::DutyPoint>>>& runs)
{
    write_header(out, {"run", "normalized_speed", "normalized_torque"});
    for (const auto& [tag, points] : runs) {
        for (const sim::DutyPoint& p : points) {
            out << tag << ',' << format_number(p.speed) << ',' << format_number(p.torque) << '\n';
        }
    }
}

json metrics_to_json(const sim::Metrics& m)
{
    json duty = json::array();
    for (const sim::DutyPoint& p : m.duty_points) {
        duty.push_back({p.speed, p.torque});
    }
    return {
        {"cycle_time", m.cycle_time},
        {"fuel_total", m.fuel_total},
        {"bucket_fill_final", m.bucket_fill_final},
        {"bucket_fill_end", m.bucket_fill_end},
        {"mean_engine_speed", m.mean_engine_speed},
        {"max_engine_speed", m.max_engine_speed},
        {"mean_normalized_speed", m.mean_normalized_speed},
        {"energy_engine", m.energy_engine},
        {"energy_driveline", m.energy_driveline},
        {"energy_hydraulics", m.energy_hydraulics},
        {"energy_loss", m.energy_loss},
        {"fill_phase_count", m.fill_phase_count},
        {"completed", m.completed},
        {"phase_durations", m.phase_durations},
        {"duty_points", duty},
    };
}

sim::Metrics metrics_from_json(const json& doc)
{
    sim::Metrics m;
    m.cycle_time = doc.at("cycle_time").get<double>();
    m.fuel_total = doc.at("fuel_total").get<double>();
    m.bucket_fill_final = doc.at("bucket_fill_final").get<double>();
    m.bucket_fill_end = doc.at("bucket_fill_end").get<double>();
    m.mean_engine_speed = doc.at("mean_engine_speed").get<double>();
    m.max_engine_speed = doc.at("max_engine_speed").get<double>();
    m.mean_normalized_speed = doc.at("mean_normalized_speed").get<double>();
    m.energy_engine = doc.at("energy_engine").get<double>();
    m.energy_driveline = doc.at("energy_driveline").get<double>();
    m.energy_hydraulics = doc.at("energy_hydraulics").get<double>();
    m.energy_loss = doc.at("energy_loss").get<double>();
    m.fill_phase_count = doc.at("fill_phase_count").get<int>();
    m.completed = doc.at("completed").get<bool>();
    m.phase_durations = doc.at("phase_durations").get<std::map<std::string, double>>();
    for (const json& p : doc.at("duty_points")) {
        m.duty_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return m;
}

json comparison_to_json(const sim::ComparisonReport& r)
{
    return {
        {"cycle_time", delta_json(r.cycle_time)},
        {"fuel_total", delta_json(r.fuel_total)},
        {"mean_engine_speed", delta_json(r.mean_engine_speed)},
        {"bucket_fill_final", delta_json(r.bucket_fill_final)},
        {"mean_normalized_speed_shift", r.mean_normalized_speed_shift},
    };
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
        }
    }
    write_file(path, [&](std::ostream& out) { out << text; });
}

void write_bundle(const std::filesystem::path& dir, const sim::CycleLog& log, const sim::Metrics& metrics,
                  double marker_interval, const BundleStatus& status)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    write_file(dir / "telemetry.csv", [&](std::ostream& out) { write_telemetry(out, log); });
    write_file(dir / "trajectory.csv", [&](std::ostream& out) { write_trajectory(out, log, marker_interval); });
    write_file(dir / "duty.csv", [&](std::ostream& out) { write_duty(out, metrics.duty_points); });
    json doc = metrics_to_json(metrics);
    doc["partial"] = !status.fault.empty();
    if (!status.fault.empty()) {
        doc["fault"] = status.fault;
    }
    write_file(dir / "metrics.json", [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

}  // namespace loadcycle::io
