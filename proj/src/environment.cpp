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

#include "loadcycle/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loadcycle/kernel.hpp"

namespace loadcycle::environment {

void PileModel::validate() const
{
    if (!(slope > 0.0 && slope < std::numbers::pi / 2)) {
        throw std::invalid_argument("slope angle must lie in (0, pi/2)");
    }
    if (!(specific_resistance > 0.0)) {
        throw std::invalid_argument("specific resistance must be positive");
    }
    if (!(crest_height > 0.0 && fill_gain > 0.0 && material_density > 0.0)) {
        throw std::invalid_argument("crest height, fill gain and density must be positive");
    }
    if (!(fill_drag >= 0.0 && clearance_penalty >= 0.0 && speed_regularization > 0.0 && spill_rate >= 0.0)) {
        throw std::invalid_argument("drag, penalty, regularization and spill rate must be non-negative");
    }
}

double surface_z(double x, const PileModel& pile)
{
    if (x <= pile.toe_x) {
        return 0.0;
    }
    return std::min((x - pile.toe_x) * std::tan(pile.slope), pile.crest_height);
}

DigContact dig_contact(double edge_x, double edge_z, const PileModel& pile)
{
    // Inside the pile is below both the face line and the crest line; depth is
    // the distance to the nearer of the two.
    const double below_face = ((edge_x - pile.toe_x) * std::tan(pile.slope) - edge_z) * std::cos(pile.slope);
    const double below_crest = pile.crest_height - edge_z;
    const double depth = std::min(below_face, below_crest);
    if (!(depth > 0.0)) {
        return {};
    }
    return {depth, true};
}

DigForce dig_force(const DigContact& contact, double edge_vx, double edge_vz, double edge_angle, double fill,
                   const PileModel& pile)
{
    if (!contact.in_contact) {
        return {};
    }
    const double clearance = edge_angle - pile.slope;
    // Material drag fades in over the first few centimetres so the force
    // vanishes at the contact boundary.
    const double drag = pile.fill_drag * std::clamp(fill, 0.0, 1.0) *
                        kernel::step3(contact.penetration, kernel::SmoothStep(0.0, 0.0, kDragFadeDepth, 1.0));
    const double magnitude = (pile.specific_resistance * contact.penetration * contact.penetration + drag) *
                             (1.0 + pile.clearance_penalty * std::max(0.0, -clearance));
    const double speed = std::hypot(edge_vx, edge_vz);
    if (speed == 0.0) {
        // Static: pushes the edge out of the face.
        return {-magnitude * std::sin(pile.slope), magnitude * std::cos(pile.slope)};
    }
    const double scale = magnitude / std::max(speed, pile.speed_regularization);
    return {-scale * edge_vx, -scale * edge_vz};
}

double swept_area_rate(const DigContact& contact, double edge_vx, double edge_vz, const PileModel& pile)
{
    if (!contact.in_contact) {
        return 0.0;
    }
    const double along_face = edge_vx * std::cos(pile.slope) + edge_vz * std::sin(pile.slope);
    return contact.penetration * std::max(0.0, along_face);
}

double fill_update(double fill, double swept_rate, const DigContact& contact, const PileModel& pile, double dt)
{
    if (!contact.in_contact || !(swept_rate > 0.0)) {
        return std::clamp(fill, 0.0, 1.0);
    }
    return std::clamp(fill + pile.fill_gain * swept_rate * dt, 0.0, 1.0);
}

double spill_update(double fill, double edge_angle, const PileModel& pile, double dt)
{
    if (edge_angle >= pile.spill_angle) {
        return fill;
    }
    return std::max(0.0, fill - pile.spill_rate * (pile.spill_angle - edge_angle) * dt);
}

double payload_mass(double fill, double bucket_capacity, const PileModel& pile)
{
    return std::clamp(fill, 0.0, 1.0) * bucket_capacity * pile.material_density;
}

}  // namespace loadcycle::environment
