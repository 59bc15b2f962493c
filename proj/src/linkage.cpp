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

double LinkageModel::edge_direction_offset() const
{
    const double tip_z = pivot_z + boom_length * std::sin(lift_ref);
    const double s = std::clamp(-tip_z / edge_offset, -1.0, 1.0);
    return std::asin(s) - lift_ref - tilt_ref;
}

void LinkageModel::validate() const
{
    if (!(boom_length > 0.0 && edge_offset > 0.0 && bucket_capacity > 0.0)) {
        throw std::invalid_argument("boom length, edge offset and bucket capacity must be positive");
    }
    if (!(lift_min < lift_max) || !(tilt_min < tilt_max)) {
        throw std::invalid_argument("angle ranges must be non-empty");
    }
    if (lift_ref < lift_min || lift_ref > lift_max || tilt_ref < tilt_min || tilt_ref > tilt_max) {
        throw std::invalid_argument("reference pose must lie inside the angle ranges");
    }
    const double tip_z = pivot_z + boom_length * std::sin(lift_ref);
    if (!(tip_z >= 0.0 && tip_z <= edge_offset)) {
        throw std::invalid_argument("bucket cannot reach the ground in the reference pose");
    }
    if (!(boom_mass >= 0.0 && bucket_mass >= 0.0)) {
        throw std::invalid_argument("masses must be non-negative");
    }
}

std::array<double, 2> boom_tip(double lift, const LinkageModel& model)
{
    return {model.pivot_x + model.boom_length * std::cos(lift), model.pivot_z + model.boom_length * std::sin(lift)};
}

std::array<double, 2> edge_local(double lift, double tilt, const LinkageModel& model)
{
    const auto tip = boom_tip(lift, model);
    const double psi = lift + tilt + model.edge_direction_offset();
    return {tip[0] + model.edge_offset * std::cos(psi), tip[1] + model.edge_offset * std::sin(psi)};
}

std::array<std::array<double, 2>, 2> edge_jacobian(double lift, double tilt, const LinkageModel& model)
{
    const double psi = lift + tilt + model.edge_direction_offset();
    const double l = model.boom_length;
    const double e = model.edge_offset;
    return {{{-l * std::sin(lift) - e * std::sin(psi), -e * std::sin(psi)},
             {l * std::cos(lift) + e * std::cos(psi), e * std::cos(psi)}}};
}

EdgePose linkage_fk(double lift, double tilt, const ChassisPose& pose, const LinkageModel& model)
{
    EdgePose out;
    const double l = std::clamp(lift, model.lift_min, model.lift_max);
    const double t = std::clamp(tilt, model.tilt_min, model.tilt_max);
    out.clamped = l != lift || t != tilt;
    const auto local = edge_local(l, t, model);
    out.x = pose.x + std::cos(pose.heading) * local[0];
    out.z = local[1];
    out.angle = l + t + model.edge_angle_offset();
    return out;
}

LinkageLoads linkage_loads(double lift, double tilt, double payload_mass, double dig_fx, double dig_fz,
                           const LinkageModel& model)
{
    const auto tip = boom_tip(lift, model);
    const auto edge = edge_local(lift, tilt, model);
    // Bucket and payload lumped halfway between pivot and edge.
    const double cg_x = 0.5 * (tip[0] + edge[0]);
    const double bucket_weight = (model.bucket_mass + payload_mass) * kGravity;
    const double boom_weight = model.boom_mass * kGravity;

    // Moment of the edge force about a point, positive counter-clockwise (raising / tilting back).
    const auto moment = [&](double ox, double oz) { return (edge[0] - ox) * dig_fz - (edge[1] - oz) * dig_fx; };

    LinkageLoads out;
    out.lift = boom_weight * 0.5 * model.boom_length * std::cos(lift) + bucket_weight * (cg_x - model.pivot_x) -
               moment(model.pivot_x, model.pivot_z);
    out.tilt = bucket_weight * (cg_x - tip[0]) - moment(tip[0], tip[1]);
    return out;
}

}  // namespace loadcycle::machine
