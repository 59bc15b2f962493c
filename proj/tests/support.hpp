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

// Helpers shared by the unit tests and the acceptance runner. Oracles here
// read configs/reference.json straight from the source tree so they do not
// depend on the copy compiled into the library.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loadcycle/kernel.hpp"
#include "loadcycle/operator_model.hpp"

#ifndef LOADCYCLE_SOURCE_DIR
#error "LOADCYCLE_SOURCE_DIR must be defined by the build"
#endif

namespace loadcycle::testing {

inline std::filesystem::path source_dir() { return LOADCYCLE_SOURCE_DIR; }

inline std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const nlohmann::json& reference_file()
{
    static const nlohmann::json doc = nlohmann::json::parse(read_text(source_dir() / "configs" / "reference.json"));
    return doc;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("loadcycle_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------------------
// Signal firewall

/// Field names declared in the body of `struct SensedState` in the header text.
inline std::vector<std::string> sensed_fields_from_header(const std::string& header)
{
    const auto begin = header.find("struct SensedState {");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = header.find("};", begin);
    const std::string body = header.substr(begin, end - begin);
    static const std::regex field(R"(^\s*(?:double|bool|int|float)\s+(\w+)\s*=)");
    std::vector<std::string> names;
    std::istringstream lines(body);
    for (std::string line; std::getline(lines, line);) {
        std::smatch m;
        if (std::regex_search(line, m, field)) {
            names.push_back(m[1]);
        }
    }
    return names;
}

/// Project headers pulled in by a source file, as written in the include.
inline std::vector<std::string> project_includes(const std::string& text)
{
    static const std::regex inc(R"(#include\s+"([^"]+)\")");
    std::vector<std::string> out;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), inc); it != std::sregex_iterator(); ++it) {
        out.push_back((*it)[1]);
    }
    return out;
}

/// Every violation of the operator's input boundary. Empty means clean.
inline std::vector<std::string> firewall_violations()
{
    std::vector<std::string> problems;
    const auto header_path = source_dir() / "include" / "loadcycle" / "operator_model.hpp";
    const std::string header = read_text(header_path);
    const auto fields = sensed_fields_from_header(header);
    if (fields.empty()) {
        problems.push_back("SensedState not found in operator_model.hpp");
    }

    const std::vector<std::string> declared(operator_model::kSensedFields.begin(),
                                            operator_model::kSensedFields.end());
    if (fields != declared) {
        problems.push_back("SensedState fields differ from kSensedFields");
    }

    static const std::vector<std::string> banned = {"converter", "turbine", "pump",     "displacement",
                                                    "pressure",  "relief",  "torque",   "flow",
                                                    "fill",      "payload", "speed_ratio"};
    for (const std::string& f : fields) {
        std::string lower = f;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        for (const std::string& b : banned) {
            if (lower.find(b) != std::string::npos) {
                problems.push_back("SensedState field '" + f + "' exposes '" + b + "'");
            }
        }
    }

    static const std::set<std::string> allowed = {"loadcycle/common.hpp", "loadcycle/kernel.hpp",
                                                  "loadcycle/operator_model.hpp"};
    std::vector<std::filesystem::path> files = {header_path};
    for (const auto& entry : std::filesystem::directory_iterator(source_dir() / "src")) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("operator_", 0) == 0) {
            files.push_back(entry.path());
        }
    }
    if (files.size() < 2) {
        problems.push_back("no operator sources found");
    }
    for (const auto& file : files) {
        for (const std::string& inc : project_includes(read_text(file))) {
            if (!allowed.contains(inc)) {
                problems.push_back(file.filename().string() + " includes " + inc);
            }
        }
    }
    return problems;
}

// ---------------------------------------------------------------------------
// Kernel property suites

/// Runs the exhaustive small-case kernel properties; returns the failures.
inline std::vector<std::string> kernel_property_failures()
{
    std::vector<std::string> fails;
    const auto fail = [&](const std::string& what) {
        if (fails.size() < 20) {
            fails.push_back(what);
        }
    };

    // step3: endpoints, midpoint, monotone, flat at both knots.
    const std::vector<double> xs = {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0};
    const std::vector<double> hs = {-3.0, -1.0, 0.0, 0.5, 1.0, 7.0};
    for (double x0 : xs) {
        for (double x1 : xs) {
            if (!(x1 > x0)) {
                continue;
            }
            for (double h0 : hs) {
                for (double h1 : hs) {
                    const kernel::SmoothStep s(x0, h0, x1, h1);
                    const double w = x1 - x0;
                    if (kernel::step3(x0, s) != h0 || kernel::step3(x1, s) != h1 ||
                        kernel::step3(x0 - w, s) != h0 || kernel::step3(x1 + w, s) != h1) {
                        fail("step3 endpoint");
                    }
                    const double mid = kernel::step3(0.5 * (x0 + x1), s);
                    if (std::abs(mid - 0.5 * (h0 + h1)) > 1e-6 * std::max(1.0, std::abs(h1 - h0))) {
                        fail("step3 midpoint");
                    }
                    if (h0 != h1) {
                        const double slope = std::abs(h1 - h0) / w;
                        const double h = 1e-7 * w;
                        for (double k : {x0, x1}) {
                            const double d = (kernel::step3(k + h, s) - kernel::step3(k - h, s)) / (2.0 * h);
                            if (std::abs(d) > 1e-6 * slope) {
                                fail("step3 derivative at knot");
                            }
                        }
                        double prev = kernel::step3(x0, s);
                        for (int i = 1; i <= 200; ++i) {
                            const double y = kernel::step3(x0 + w * i / 200.0, s);
                            if ((h1 > h0 && y < prev) || (h1 < h0 && y > prev)) {
                                fail("step3 monotone");
                            }
                            prev = y;
                        }
                    }
                }
            }
        }
    }

    // rate_limit: never overshoots, bounded step, exact arrival.
    const std::vector<double> vals = {-1.0, -0.25, 0.0, 0.05, 0.5, 1.0, 3.0};
    for (double prev : vals) {
        for (double target : vals) {
            for (double rate : {0.0, 0.5, 2.0, 5.0, 100.0}) {
                for (double dt : {1e-3, 0.01, 0.1, 1.0}) {
                    const double out = kernel::rate_limit(prev, target, rate, dt);
                    const double lo = std::min(prev, target);
                    const double hi = std::max(prev, target);
                    if (out < lo || out > hi) {
                        fail("rate_limit overshoot");
                    }
                    if (std::abs(out - prev) > rate * dt * (1.0 + 1e-12) + 1e-15) {
                        fail("rate_limit step bound");
                    }
                    if (std::abs(target - prev) <= rate * dt && out != target) {
                        fail("rate_limit arrival");
                    }
                }
            }
        }
    }

    // latch: idempotent under repeated identical events, reset dominates.
    for (bool state : {false, true}) {
        for (bool set : {false, true}) {
            for (bool reset : {false, true}) {
                const kernel::Latch once = kernel::latch_update(kernel::Latch{state}, set, reset);
                const kernel::Latch twice = kernel::latch_update(once, set, reset);
                if (once.state != twice.state) {
                    fail("latch idempotence");
                }
                const bool expect = reset ? false : (set ? true : state);
                if (once.state != expect) {
                    fail("latch truth table");
                }
            }
        }
    }

    // table: knots exact, clamped ends, continuous across knots.
    const std::vector<std::vector<double>> knot_sets = {{0.0, 1.0}, {-1.0, 0.0, 2.0}, {0.0, 0.1, 0.2, 5.0}};
    for (const auto& knots : knot_sets) {
        std::vector<double> values;
        for (std::size_t i = 0; i < knots.size(); ++i) {
            values.push_back(std::pow(-1.5, static_cast<double>(i)) + 0.25 * static_cast<double>(i));
        }
        const kernel::Table1D t(knots, values);
        for (std::size_t i = 0; i < knots.size(); ++i) {
            if (kernel::table_eval(t, knots[i]) != values[i]) {
                fail("table knot value");
            }
            const double eps = 1e-9;
            const double left = kernel::table_eval(t, knots[i] - eps);
            const double right = kernel::table_eval(t, knots[i] + eps);
            if (std::abs(left - values[i]) > 1e-6 || std::abs(right - values[i]) > 1e-6) {
                fail("table continuity");
            }
        }
        if (kernel::table_eval(t, knots.front() - 10.0) != values.front() ||
            kernel::table_eval(t, knots.back() + 10.0) != values.back()) {
            fail("table clamp");
        }
    }
    return fails;
}

}  // namespace loadcycle::testing
