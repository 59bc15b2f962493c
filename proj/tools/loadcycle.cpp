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

// loadcycle command-line front end.

#include <cstdlib>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "loadcycle/config.hpp"
#include "loadcycle/io.hpp"
#include "loadcycle/sim.hpp"

namespace {

using namespace loadcycle;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;
constexpr int kExitIo = 4;

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level()
{
    const char* env = std::getenv("LOADCYCLE_LOG");
    if (env == nullptr) {
        return Level::Warn;
    }
    const std::string v(env);
    if (v == "error" || v == "0") {
        return Level::Error;
    }
    if (v == "info" || v == "2") {
        return Level::Info;
    }
    if (v == "debug" || v == "3") {
        return Level::Debug;
    }
    return Level::Warn;
}

void log(Level level, const std::string& msg)
{
    static const Level threshold = log_level();
    static const char* names[] = {"error", "warn", "info", "debug"};
    if (level <= threshold) {
        std::cerr << "loadcycle: " << names[static_cast<int>(level)] << ": " << msg << '\n';
    }
}

struct Leg {
    std::string tag;
    std::optional<sim::Metrics> metrics;
    std::string fault;
    int code = kExitOk;
};

// Runs one configuration and writes its bundle. Never throws.
Leg run_leg(const std::string& tag, const sim::SimConfig& config, const std::filesystem::path& dir)
{
    Leg leg{.tag = tag, .metrics = std::nullopt, .fault = {}, .code = kExitOk};
    sim::CycleLog log_rows;
    try {
        sim::RunResult result = sim::run_cycle(config);
        log_rows = std::move(result.log);
        leg.metrics = std::move(result.metrics);
    }
    catch (const sim::CycleFault& e) {
        leg.fault = e.what();
        leg.code = kExitFault;
        log_rows = e.partial_log();
        if (!log_rows.rows.empty()) {
            leg.metrics = sim::compute_metrics(log_rows, config);
        }
    }
    catch (const std::exception& e) {
        leg.fault = e.what();
        leg.code = kExitFault;
    }
    try {
        io::write_bundle(dir, log_rows, leg.metrics.value_or(sim::Metrics{}), config.marker_interval,
                         io::BundleStatus{.completed = leg.fault.empty(), .fault = leg.fault});
    }
    catch (const io::IoError& e) {
        log(Level::Error, e.what());
        leg.code = kExitIo;
    }
    return leg;
}

std::optional<config::LoadedConfig> load(const std::string& path, int& code)
{
    try {
        config::LoadedConfig loaded = config::load_file(path);
        for (const std::string& key : loaded.defaulted) {
            log(Level::Debug, path + ": default used for " + key);
        }
        return loaded;
    }
    catch (const ConfigError& e) {
        log(Level::Error, e.what());
        code = kExitConfig;
    }
    catch (const std::exception& e) {
        log(Level::Error, path + ": " + e.what());
        code = kExitConfig;
    }
    return std::nullopt;
}

int cmd_run(const std::string& config_path, const std::string& out_dir)
{
    int code = kExitOk;
    auto loaded = load(config_path, code);
    if (!loaded) {
        return code;
    }
    log(Level::Info, "running " + config_path);
    const Leg leg = run_leg("run", loaded->config, out_dir);
    if (!leg.fault.empty()) {
        log(Level::Error, "simulation fault: " + leg.fault);
    }
    else if (leg.metrics) {
        log(Level::Info, "cycle time " + io::format_number(leg.metrics->cycle_time) + " s, fuel " +
                             io::format_number(leg.metrics->fuel_total) + " g");
    }
    return leg.code;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, const std::string& out_dir)
{
    int code = kExitOk;
    auto a = load(path_a, code);
    auto b = load(path_b, code);
    if (!a || !b) {
        return code;
    }
    const std::filesystem::path dir(out_dir);
    // Legs share nothing mutable and write to disjoint directories.
    auto future_b = std::async(std::launch::async, [&] { return run_leg("b", b->config, dir / "b"); });
    const Leg leg_a = run_leg("a", a->config, dir / "a");
    const Leg leg_b = future_b.get();

    for (const Leg* leg : {&leg_a, &leg_b}) {
        if (!leg->fault.empty()) {
            log(Level::Error, "leg " + leg->tag + " fault: " + leg->fault);
        }
    }
    const bool partial = !leg_a.fault.empty() || !leg_b.fault.empty();
    try {
        nlohmann::json doc;
        if (leg_a.metrics && leg_b.metrics) {
            doc = io::comparison_to_json(sim::compare_runs(*leg_a.metrics, *leg_b.metrics));
        }
        doc["partial"] = partial;
        doc["legs"] = {{"a", {{"config", path_a}, {"fault", leg_a.fault}}},
                       {"b", {{"config", path_b}, {"fault", leg_b.fault}}}};
        io::write_text(dir / "comparison.json", doc.dump(2) + "\n");

        std::ostringstream duty;
        io::write_merged_duty(duty, {{"a", leg_a.metrics ? leg_a.metrics->duty_points : std::vector<sim::DutyPoint>{}},
                                     {"b", leg_b.metrics ? leg_b.metrics->duty_points : std::vector<sim::DutyPoint>{}}});
        io::write_text(dir / "duty.csv", duty.str());
    }
    catch (const io::IoError& e) {
        log(Level::Error, e.what());
        return kExitIo;
    }
    if (leg_a.code == kExitIo || leg_b.code == kExitIo) {
        return kExitIo;
    }
    return partial ? kExitFault : kExitOk;
}

int cmd_validate(const std::string& config_path)
{
    int code = kExitOk;
    auto loaded = load(config_path, code);
    if (!loaded) {
        return code;
    }
    std::cout << loaded->resolved.dump(2) << '\n';
    for (const std::string& key : loaded->defaulted) {
        std::cerr << "note: " << key << " not set, default used\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Wheel-loader loading-cycle simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Simulate one loading cycle and write its output bundle");
    run->add_option("config", config_path, "Configuration file (JSON)")->required();
    run->add_option("-o,--output", out_dir, "Output directory")->required();

    std::string path_a;
    std::string path_b;
    std::string compare_dir;
    auto* compare = app.add_subcommand("compare", "Simulate two configurations and compare them");
    compare->add_option("a", path_a, "Baseline configuration")->required();
    compare->add_option("b", path_b, "Variant configuration")->required();
    compare->add_option("-o,--output", compare_dir, "Output directory")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a configuration and print it with defaults filled");
    validate->add_option("config", validate_path, "Configuration file (JSON)")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    if (*run) {
        return cmd_run(config_path, out_dir);
    }
    if (*compare) {
        return cmd_compare(path_a, path_b, compare_dir);
    }
    return cmd_validate(validate_path);
}
