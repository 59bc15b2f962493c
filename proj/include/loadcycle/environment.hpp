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

namespace loadcycle::environment {

/// Planar gravel pile: flat ground up to the toe, then a straight face at the
/// slope angle up to a flat crest.
struct PileModel {
    double toe_x = 0.0;                // m, world x where the face starts
    double slope = 0.0;                // rad, face inclination
    double crest_height = 0.0;         // m
    double specific_resistance = 0.0;  // N/m^2 per unit bucket width
    double fill_gain = 0.0;            // fill fraction per m^2 of swept section
    double material_density = 0.0;    // kg/m^3
    double fill_drag = 0.0;            // N of drag at full bucket
    double clearance_penalty = 0.0;    // 1/rad, resistance growth for negative clearance
    double speed_regularization = 0.02;  // m/s, force direction blends to zero below this edge speed
    double spill_angle = 0.0;          // rad, floor angle below which material leaves the bucket
    double spill_rate = 0.0;           // 1/(s*rad)

    void validate() const;
};

/// Depth over which the fill drag builds up after first contact.
inline constexpr double kDragFadeDepth = 0.05;  // m

struct DigContact {
    double penetration = 0.0;  // m, normal to the pile face
    bool in_contact = false;
};

struct DigForce {
    double fx = 0.0;  // N, world x
    double fz = 0.0;  // N, up
};

double surface_z(double x, const PileModel& pile);

DigContact dig_contact(double edge_x, double edge_z, const PileModel& pile);

/// Resistance on the cutting edge: k_s * depth^2 plus a fill-proportional
/// drag (faded in over kDragFadeDepth), raised when the bucket bottom presses into the face (negative
/// clearance), directed against the edge velocity.
DigForce dig_force(const DigContact& contact, double edge_vx, double edge_vz, double edge_angle, double fill,
                   const PileModel& pile);

/// Cross-section swept per second by the submerged edge moving up the face.
double swept_area_rate(const DigContact& contact, double edge_vx, double edge_vz, const PileModel& pile);

double fill_update(double fill, double swept_rate, const DigContact& contact, const PileModel& pile, double dt);

/// Material leaving a bucket tipped below the spill angle.
double spill_update(double fill, double edge_angle, const PileModel& pile, double dt);

/// Payload mass at a given fill.
double payload_mass(double fill, double bucket_capacity, const PileModel& pile);

}  // namespace loadcycle::environment
