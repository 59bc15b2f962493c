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

#include "loadcycle/machine.hpp"

namespace loadcycle::machine {

namespace {

void check_map(const kernel::Table1D& capacity, const kernel::Table1D& torque_ratio)
{
    const auto nu = capacity.knots();
    if (nu.front() != 0.0 || nu.back() > 1.0) {
        throw std::invalid_argument("speed ratio knots must start at 0 and stay within [0, 1]");
    }
    const auto c = capacity.values();
    const auto mu = torque_ratio.values();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!(c[i] > 0.0)) {
            throw std::invalid_argument("capacity factor must be positive");
        }
        if (!(mu[i] >= 1.0)) {
            throw std::invalid_argument("torque ratio must be at least 1");
        }
        if (i > 0 && (c[i] > c[i - 1] || mu[i] > mu[i - 1])) {
            throw std::invalid_argument("capacity factor and torque ratio must be non-increasing");
        }
    }
    if (mu.back() != 1.0) {
        throw std::invalid_argument("torque ratio must reach 1 (coupling point)");
    }
    // No power creation: mu(nu) * nu <= 1 on the knots and between them.
    constexpr int kSweep = 2000;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (mu[i] * nu[i] > 1.0) {
            throw std::invalid_argument("torque ratio times speed ratio exceeds 1 at a knot");
        }
    }
    for (int k = 0; k <= kSweep; ++k) {
        const double x = nu.back() * k / kSweep;
        if (torque_ratio(x) * x > 1.0 + 1e-12) {
            throw std::invalid_argument("torque ratio times speed ratio exceeds 1 between knots");
        }
    }
}

}  // namespace

ConverterMap::ConverterMap(std::vector<double> speed_ratio, std::vector<double> capacity,
                           std::vector<double> torque_ratio)
    : capacity_(speed_ratio, std::move(capacity)), torque_ratio_(std::move(speed_ratio), std::move(torque_ratio))
{
    check_map(capacity_, torque_ratio_);
}

double ConverterMap::coupling_ratio() const
{
    const auto nu = torque_ratio_.knots();
    const auto mu = torque_ratio_.values();
    std::size_t i = mu.size() - 1;
    while (i > 0 && mu[i - 1] == 1.0) {
        --i;
    }
    return nu[i];
}

ConverterTorques converter_torques(double omega_pump, double omega_turbine, const ConverterMap& map)
{
    if (!(omega_pump > 0.0)) {
        return {};
    }
    ConverterTorques out;
    out.speed_ratio = std::clamp(omega_turbine / omega_pump, 0.0, 1.0);
    out.pump = map.capacity(out.speed_ratio) * omega_pump * omega_pump;
    out.turbine = map.torque_ratio(out.speed_ratio) * out.pump;
    return out;
}

ConverterMap scale_converter(const ConverterMap& map, double capacity_scale)
{
    if (!(capacity_scale > 0.0) || !std::isfinite(capacity_scale)) {
        throw std::invalid_argument("capacity scale must be positive");
    }
    const auto nu = map.capacity_table().knots();
    std::vector<double> capacity(map.capacity_table().values().begin(), map.capacity_table().values().end());
    for (double& c : capacity) {
        c *= capacity_scale;
    }
    const auto mu = map.torque_ratio_table().values();
    return ConverterMap({nu.begin(), nu.end()}, std::move(capacity), {mu.begin(), mu.end()});
}

}  // namespace loadcycle::machine
