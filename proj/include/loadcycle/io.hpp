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

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "loadcycle/sim.hpp"

namespace loadcycle::io {

/// File could not be created or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Telemetry column names in file order. The order is part of the format.
const std::vector<std::string>& telemetry_columns();

/// Fixed numeric format for every CSV cell: 17 significant digits.
std::string format_number(double value);

void write_telemetry(std::ostream& out, const sim::CycleLog& log);

/// Edge x, z and floor angle sampled every marker_interval, starting at the first row.
void write_trajectory(std::ostream& out, const sim::CycleLog& log, double marker_interval);

void write_duty(std::ostream& out, const std::vector<sim::DutyPoint>& points);

/// Duty points of several runs in one file with a leading run tag column.
void write_merged_duty(std::ostream& out, const std::vector<std::pair<std::string, std::vector<sim::DutyPoint>>>& runs);

nlohmann::json metrics_to_json(const sim::Metrics& metrics);
sim::Metrics metrics_from_json(const nlohmann::json& doc);
nlohmann::json comparison_to_json(const sim::ComparisonReport& report);

struct BundleStatus {
    bool completed = true;
    std::string fault;  // empty when completed
};

/// Writes telemetry.csv, metrics.json, trajectory.csv and duty.csv into dir.
/// A partial bundle (fault != empty) carries "partial": true and the fault
/// text in metrics.json. Throws IoError.
void write_bundle(const std::filesystem::path& dir, const sim::CycleLog& log, const sim::Metrics& metrics,
                  double marker_interval, const BundleStatus& status = {});

/// Writes text to path, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace loadcycle::io
