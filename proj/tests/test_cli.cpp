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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include <doctest.h>

#include "support.hpp"

#ifndef LOADCYCLE_BINARY
#error "LOADCYCLE_BINARY must name the CLI executable"
#endif

using namespace loadcycle;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

std::string quoted(const std::string& s) { return "'" + s + "'"; }

Outcome invoke(const std::string& args, const fs::path& scratch)
{
    const fs::path out = scratch / "stdout.txt";
    const fs::path err = scratch / "stderr.txt";
    const std::string cmd = quoted(LOADCYCLE_BINARY) + " " + args + " >" + quoted(out.string()) + " 2>" +
                            quoted(err.string());
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = testing::read_text(out);
    o.err = testing::read_text(err);
    return o;
}

fs::path write_config(const fs::path& dir, const std::string& name, const json& doc)
{
    const fs::path p = dir / name;
    std::ofstream(p) << doc.dump(2);
    return p;
}

// The resolved document drops comment keys.
json without_comments(const json& doc)
{
    if (!doc.is_object()) {
        return doc;
    }
    json out = json::object();
    for (const auto& [k, v] : doc.items()) {
        if (k.empty() || k.front() != '_') {
            out[k] = without_comments(v);
        }
    }
    return out;
}

std::string reference_path() { return (testing::source_dir() / "configs" / "reference.json").string(); }

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("validate accepts the reference configuration")
    {
        const auto dir = testing::scratch_dir("cli_validate");
        const Outcome o = invoke("validate " + quoted(reference_path()), dir);
        CHECK(o.code == 0);
        const json printed = json::parse(o.out);
        for (const char* section : {"engine", "converter", "pile", "operator", "sim"}) {
            CHECK(printed.at(section) == without_comments(testing::reference_file().at(section)));
        }
        CHECK(o.err.find("not set") == std::string::npos);
    }

    TEST_CASE("validate notes defaulted keys")
    {
        const auto dir = testing::scratch_dir("cli_default");
        json doc = testing::reference_file();
        doc["operator"].erase("slip_threshold_1");
        const Outcome o = invoke("validate " + quoted(write_config(dir, "c.json", doc).string()), dir);
        CHECK(o.code == 0);
        CHECK(o.err.find("note: operator.slip_threshold_1 not set, default used") != std::string::npos);
        CHECK(json::parse(o.out)["operator"]["slip_threshold_1"] ==
              testing::reference_file()["operator"]["slip_threshold_1"]);
    }

    TEST_CASE("configuration errors exit with 2")
    {
        const auto dir = testing::scratch_dir("cli_config");
        {
            const Outcome o = invoke(
                "validate " + quoted(write_config(dir, "slope.json", json{{"pile", {{"slope", -0.3}}}}).string()), dir);
            CHECK(o.code == 2);
            CHECK(o.err.find("pile") != std::string::npos);
        }
        {
            json doc = testing::reference_file();
            doc["converter"]["torque_ratio"][8] = 1.2;
            const Outcome o = invoke("validate " + quoted(write_config(dir, "conv.json", doc).string()), dir);
            CHECK(o.code == 2);
            CHECK(o.err.find("converter") != std::string::npos);
        }
        {
            std::ofstream(dir / "broken.json") << "{\"sim\": [";
            const Outcome o = invoke("validate " + quoted((dir / "broken.json").string()), dir);
            CHECK(o.code == 2);
        }
        {
            const Outcome o = invoke("run " + quoted((dir / "missing.json").string()) + " -o " +
                                         quoted((dir / "out").string()),
                                     dir);
            CHECK(o.code == 2);
        }
    }

    TEST_CASE("run writes the output bundle")
    {
        const auto dir = testing::scratch_dir("cli_run");
        const Outcome o = invoke("run " + quoted(reference_path()) + " -o " + quoted((dir / "out").string()), dir);
        CHECK(o.code == 0);
        for (const char* f : {"telemetry.csv", "metrics.json", "trajectory.csv", "duty.csv"}) {
            CHECK(fs::exists(dir / "out" / f));
        }
        const json m = json::parse(testing::read_text(dir / "out" / "metrics.json"));
        CHECK(m.at("completed").get<bool>());
        CHECK(m.at("bucket_fill_final").get<double>() >= 0.8);
    }

    TEST_CASE("unwritable output exits with 4")
    {
        const auto dir = testing::scratch_dir("cli_io");
        std::ofstream(dir / "blocker") << "x";
        const Outcome o =
            invoke("run " + quoted(reference_path()) + " -o " + quoted((dir / "blocker" / "out").string()), dir);
        CHECK(o.code == 4);
    }

    TEST_CASE("a cycle that runs out of time exits with 3 and a partial bundle")
    {
        const auto dir = testing::scratch_dir("cli_fault");
        const fs::path cfg = write_config(dir, "short.json", json{{"sim", {{"max_sim_time", 3.0}}}});
        const Outcome o = invoke("run " + quoted(cfg.string()) + " -o " + quoted((dir / "out").string()), dir);
        CHECK(o.code == 3);
        const json m = json::parse(testing::read_text(dir / "out" / "metrics.json"));
        CHECK(m.at("partial").get<bool>());
        CHECK_FALSE(m.at("fault").get<std::string>().empty());
        CHECK(fs::exists(dir / "out" / "telemetry.csv"));
    }

    TEST_CASE("compare of identical configurations gives zero deltas")
    {
        const auto dir = testing::scratch_dir("cli_compare");
        const Outcome o = invoke("compare " + quoted(reference_path()) + " " + quoted(reference_path()) + " -o " +
                                     quoted((dir / "out").string()),
                                 dir);
        CHECK(o.code == 0);
        const json c = json::parse(testing::read_text(dir / "out" / "comparison.json"));
        CHECK_FALSE(c.at("partial").get<bool>());
        for (const char* k : {"cycle_time", "fuel_total", "mean_engine_speed", "bucket_fill_final"}) {
            CHECK(c.at(k).at("delta").get<double>() == 0.0);
        }
        const std::string duty = testing::read_text(dir / "out" / "duty.csv");
        CHECK(duty.rfind("run,normalized_speed,normalized_torque\n", 0) == 0);
        CHECK(duty.find("\na,") != std::string::npos);
        CHECK(duty.find("\nb,") != std::string::npos);
        CHECK(fs::exists(dir / "out" / "a" / "telemetry.csv"));
        CHECK(fs::exists(dir / "out" / "b" / "telemetry.csv"));
    }

    TEST_CASE("compare with a faulting leg exits with 3 and flags the report")
    {
        const auto dir = testing::scratch_dir("cli_compare_fault");
        const fs::path cfg = write_config(dir, "short.json", json{{"sim", {{"max_sim_time", 3.0}}}});
        const Outcome o = invoke("compare " + quoted(reference_path()) + " " + quoted(cfg.string()) + " -o " +
                                     quoted((dir / "out").string()),
                                 dir);
        CHECK(o.code == 3);
        const json c = json::parse(testing::read_text(dir / "out" / "comparison.json"));
        CHECK(c.at("partial").get<bool>());
        CHECK(c.at("legs").at("a").at("fault").get<std::string>().empty());
        CHECK_FALSE(c.at("legs").at("b").at("fault").get<std::string>().empty());
    }
}
