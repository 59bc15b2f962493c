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

#include "loadcycle/config.hpp"

#include <fstream>
#include <sstream>

#include "reference_document.hpp"

namespace loadcycle::config {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

bool is_comment(const std::string& key) { return !key.empty() && key.front() == '_'; }

bool same_kind(const json& ref, const json& user)
{
    if (ref.is_number()) {
        return user.is_number();
    }
    if (ref.is_string()) {
        return user.is_string();
    }
    if (ref.is_boolean()) {
        return user.is_boolean();
    }
    return ref.type() == user.type();
}

// Arrays are replaced wholesale; their elements must have the reference's element kind.
void check_array(const json& ref, const json& user, const std::string& path)
{
    if (ref.empty()) {
        return;
    }
    for (std::size_t i = 0; i < user.size(); ++i) {
        const std::string at = path + "[" + std::to_string(i) + "]";
        if (!same_kind(ref.front(), user[i])) {
            throw ConfigError(at, "expected " + std::string(ref.front().type_name()));
        }
        if (ref.front().is_array()) {
            check_array(ref.front(), user[i], at);
        }
    }
}

json merge(const json& ref, const json& user, const std::string& path, std::vector<std::string>& defaulted)
{
    if (!same_kind(ref, user)) {
        throw ConfigError(path.empty() ? "<root>" : path, "expected " + std::string(ref.type_name()) + ", got " +
                                                              std::string(user.type_name()));
    }
    if (ref.is_array()) {
        check_array(ref, user, path);
        return user;
    }
    if (!ref.is_object()) {
        return user;
    }
    for (const auto& [key, value] : user.items()) {
        if (!is_comment(key) && !ref.contains(key)) {
            throw ConfigError(join(path, key), "unknown key");
        }
    }
    json out = json::object();
    for (const auto& [key, value] : ref.items()) {
        if (is_comment(key)) {
            continue;
        }
        const std::string at = join(path, key);
        if (user.contains(key)) {
            out[key] = merge(value, user.at(key), at, defaulted);
        }
        else {
            defaulted.push_back(at);
            out[key] = merge(value, value, at, defaulted);
        }
    }
    return out;
}

std::vector<double> numbers(const json& doc, const std::string& path)
{
    return doc.get<std::vector<double>>();
    (void)path;
}

template <class F>
auto with_path(const std::string& path, F&& f)
{
    try {
        return f();
    }
    catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

kernel::Table1D table(const json& doc, const std::string& path, const char* x, const char* y)
{
    return with_path(path, [&] { return kernel::Table1D(numbers(doc.at(x), path), numbers(doc.at(y), path)); });
}

machine::EngineModel build_engine(const json& e)
{
    kernel::Table2D bsfc = with_path("engine.bsfc", [&] {
        std::vector<double> values;
        for (const json& row : e.at("bsfc").at("values")) {
            for (double v : row.get<std::vector<double>>()) {
                values.push_back(v);
            }
        }
        return kernel::Table2D(e.at("bsfc").at("speed").get<std::vector<double>>(),
                               e.at("bsfc").at("torque").get<std::vector<double>>(), std::move(values));
    });
    machine::EngineModel m{
        .max_torque = table(e.at("max_torque"), "engine.max_torque", "speed", "torque"),
        .friction_torque = table(e.at("friction_torque"), "engine.friction_torque", "speed", "torque"),
        .bsfc = std::move(bsfc),
        .idle_speed = e.at("idle_speed").get<double>(),
        .rated_speed = e.at("rated_speed").get<double>(),
        .high_idle_speed = e.at("high_idle_speed").get<double>(),
        .rated_torque = e.at("rated_torque").get<double>(),
        .inertia = e.at("inertia").get<double>(),
        .governor_gain = e.at("governor_gain").get<double>(),
    };
    return m;
}

machine::ConverterMap build_converter(const json& c)
{
    return with_path("converter", [&] {
        machine::ConverterMap base(c.at("speed_ratio").get<std::vector<double>>(),
                                   c.at("capacity").get<std::vector<double>>(),
                                   c.at("torque_ratio").get<std::vector<double>>());
        return machine::scale_converter(base, c.at("capacity_scale").get<double>());
    });
}

machine::DrivelineModel build_driveline(const json& d)
{
    machine::DrivelineModel m;
    for (const char* name : {"F1", "F2", "R1", "R2"}) {
        const json& g = d.at("gears").at(name);
        m.gears[static_cast<std::size_t>(*parse_gear(name))] = {g.at("ratio").get<double>(),
                                                                 g.at("efficiency").get<double>()};
    }
    m.wheel_radius = d.at("wheel_radius").get<double>();
    m.wheel_inertia = d.at("wheel_inertia").get<double>();
    m.vehicle_mass = d.at("vehicle_mass").get<double>();
    m.rolling_resistance = d.at("rolling_resistance").get<double>();
    m.traction_curve = table(d.at("traction_curve"), "driveline.traction_curve", "slip", "mu");
    m.static_load_split = d.at("static_load_split").get<double>();
    m.lift_load_transfer = d.at("lift_load_transfer").get<double>();
    m.brake_torque = d.at("brake_torque").get<double>();
    m.shift_interlock = d.at("shift_interlock").get<double>();
    m.wheelbase = d.at("wheelbase").get<double>();
    m.max_steer_angle = d.at("max_steer_angle").get<double>();
    return m;
}

machine::LinkageModel build_linkage(const json& l)
{
    machine::LinkageModel m;
    m.pivot_x = l.at("pivot_x").get<double>();
    m.pivot_z = l.at("pivot_z").get<double>();
    m.boom_length = l.at("boom_length").get<double>();
    m.lift_min = l.at("lift_min").get<double>();
    m.lift_max = l.at("lift_max").get<double>();
    m.tilt_min = l.at("tilt_min").get<double>();
    m.tilt_max = l.at("tilt_max").get<double>();
    m.edge_offset = l.at("edge_offset").get<double>();
    m.lift_ref = l.at("lift_ref").get<double>();
    m.tilt_ref = l.at("tilt_ref").get<double>();
    m.bucket_capacity = l.at("bucket_capacity").get<double>();
    m.boom_mass = l.at("boom_mass").get<double>();
    m.bucket_mass = l.at("bucket_mass").get<double>();
    return m;
}

machine::HydraulicFunction build_function(const json& f, const std::string& path)
{
    const json& v = f.at("valve");
    return machine::HydraulicFunction{
        .lever_to_valve = with_path(path + ".valve",
                                    [&] {
                                        return kernel::SmoothStep(v.at("x0").get<double>(), v.at("h0").get<double>(),
                                                                  v.at("x1").get<double>(), v.at("h1").get<double>());
                                    }),
        .max_flow = f.at("max_flow").get<double>(),
        .angle_per_volume = f.at("angle_per_volume").get<double>(),
    };
}

machine::HydraulicsModel build_hydraulics(const json& h)
{
    return machine::HydraulicsModel{
        .pump_displacement = h.at("pump_displacement").get<double>(),
        .relief_pressure = h.at("relief_pressure").get<double>(),
        .parasitic_power = h.at("parasitic_power").get<double>(),
        .lift = build_function(h.at("lift"), "hydraulics.lift"),
        .tilt = build_function(h.at("tilt"), "hydraulics.tilt"),
    };
}

environment::PileModel build_pile(const json& p, double toe_x)
{
    environment::PileModel m;
    m.toe_x = toe_x;
    m.slope = p.at("slope").get<double>();
    m.crest_height = p.at("crest_height").get<double>();
    m.specific_resistance = p.at("specific_resistance").get<double>();
    m.fill_gain = p.at("fill_gain").get<double>();
    m.material_density = p.at("material_density").get<double>();
    m.fill_drag = p.at("fill_drag").get<double>();
    m.clearance_penalty = p.at("clearance_penalty").get<double>();
    m.speed_regularization = p.at("speed_regularization").get<double>();
    m.spill_angle = p.at("spill_angle").get<double>();
    m.spill_rate = p.at("spill_rate").get<double>();
    return m;
}

operator_model::OperatorParams build_operator(const json& o)
{
    operator_model::OperatorParams p;
    const auto get = [&](const char* key) { return o.at(key).get<double>(); };
    p.slip_threshold_1 = get("slip_threshold_1");
    p.slip_threshold_1_full = get("slip_threshold_1_full");
    p.throttle_cap_floor = get("throttle_cap_floor");
    p.slip_integral_limit = get("slip_integral_limit");
    p.slip_integral_limit_full = get("slip_integral_limit_full");
    p.slip_integral_max = get("slip_integral_max");
    p.lift_boost_max = get("lift_boost_max");
    p.bearing_deviation_threshold = get("bearing_deviation_threshold");
    p.bvv_ramp_rate = get("bvv_ramp_rate");
    p.bvv_max = get("bvv_max");
    p.target_clearance = get("target_clearance");
    p.target_attack = get("target_attack");
    p.clearance_gain = get("clearance_gain");
    p.attack_gain = get("attack_gain");
    p.exit_bucket_angle = get("exit_bucket_angle");
    p.exit_lift_angle = get("exit_lift_angle");
    p.fill_base_throttle = get("fill_base_throttle");
    p.fill_base_lift = get("fill_base_lift");
    p.approach_speed = get("approach_speed");
    p.haul_speed = get("haul_speed");
    p.reverse_speed = get("reverse_speed");
    p.cruise_throttle = get("cruise_throttle");
    p.speed_gain = get("speed_gain");
    p.brake_gain = get("brake_gain");
    p.slowdown_gain = get("slowdown_gain");
    p.steer_gain = get("steer_gain");
    p.arrive_tolerance = get("arrive_tolerance");
    p.stop_speed = get("stop_speed");
    p.dump_tilt_angle = get("dump_tilt_angle");
    p.dump_throttle = get("dump_throttle");
    p.carry_lift_angle = get("carry_lift_angle");
    p.carry_tilt_angle = get("carry_tilt_angle");
    const json& rates = o.at("command_rates");
    p.rate_throttle = rates.at("throttle").get<double>();
    p.rate_brake = rates.at("brake").get<double>();
    p.rate_steer = rates.at("steer").get<double>();
    p.rate_lift = rates.at("lift").get<double>();
    p.rate_tilt = rates.at("tilt").get<double>();
    for (int i = 0; i < kPhaseCount; ++i) {
        const std::string name(phase_name(static_cast<Phase>(i)));
        p.phase_timeout[static_cast<std::size_t>(i)] = o.at("phase_timeout").at(name).get<double>();
    }
    with_path("operator", [&] {
        (void)p.tc1_step();
        (void)p.tc2_step();
        return 0;
    });
    return p;
}

operator_model::TaskDescription build_task(const json& t)
{
    operator_model::TaskDescription task;
    const auto get = [&](const char* key) { return t.at(key).get<double>(); };
    task.start_x = get("start_x");
    task.start_y = get("start_y");
    task.start_heading = get("start_heading");
    task.pile_toe_x = get("pile_toe_x");
    task.reverse_point_x = get("reverse_point_x");
    task.reverse_point_y = get("reverse_point_y");
    task.receiver_x = get("receiver_x");
    task.receiver_y = get("receiver_y");
    task.dump_height = get("dump_height");
    task.return_distance = get("return_distance");
    return task;
}

}  // namespace

const json& reference_document()
{
    static const json doc = json::parse(kReferenceDocument);
    return doc;
}

sim::SimConfig build(const json& resolved)
{
    const json& s = resolved.at("sim");
    const operator_model::TaskDescription task = build_task(resolved.at("task"));
    sim::SimConfig config{
        .dt = s.at("dt").get<double>(),
        .log_decimation = s.at("log_decimation").get<int>(),
        .max_sim_time = s.at("max_sim_time").get<double>(),
        .marker_interval = s.at("marker_interval").get<double>(),
        .random_seed = s.at("random_seed").get<std::uint64_t>(),
        .plant =
            sim::PlantModels{
                .engine = build_engine(resolved.at("engine")),
                .converter = build_converter(resolved.at("converter")),
                .driveline = build_driveline(resolved.at("driveline")),
                .linkage = build_linkage(resolved.at("linkage")),
                .hydraulics = build_hydraulics(resolved.at("hydraulics")),
                .pile = build_pile(resolved.at("pile"), task.pile_toe_x),
            },
        .op = build_operator(resolved.at("operator")),
        .task = task,
    };
    config.validate();
    return config;
}

LoadedConfig resolve(const json& user)
{
    LoadedConfig out{.resolved = {}, .defaulted = {}, .config = reference_config()};
    out.resolved = merge(reference_document(), user, "", out.defaulted);
    out.config = build(out.resolved);
    return out;
}

LoadedConfig load_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open file");
    }
    json doc;
    try {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
    }
    return resolve(doc);
}

sim::SimConfig reference_config()
{
    static const sim::SimConfig config = [] {
        std::vector<std::string> ignored;
        return build(merge(reference_document(), reference_document(), "", ignored));
    }();
    return config;
}

}  // namespace loadcycle::config
