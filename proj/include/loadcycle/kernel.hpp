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

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace loadcycle::kernel {

/// Cubic smooth step between two breakpoints. Holds h0 at or below x0 and
/// h1 at or above x1, with zero slope at both knots.
class SmoothStep {
public:
    SmoothStep(double x0, double h0, double x1, double h1);

    double operator()(double x) const;

    double x0() const { return x0_; }
    double h0() const { return h0_; }
    double x1() const { return x1_; }
    double h1() const { return h1_; }

private:
    double x0_;
    double h0_;
    double x1_;
    double h1_;
};

double step3(double x, const SmoothStep& spec);

/// Boolean memory cell. Reset dominates a simultaneous set.
struct Latch {
    bool state = false;
};

Latch latch_update(Latch l, bool set, bool reset);

/// Moves prev toward target by at most rate * dt.
double rate_limit(double prev, double target, double rate, double dt);

/// acc + input * dt, clamped to [lo, hi].
double clamped_integrate(double acc, double input, double dt, double lo, double hi);

/// Piecewise-linear table with end clamping.
class Table1D {
public:
    Table1D(std::vector<double> knots, std::vector<double> values);

    double operator()(double x) const;

    /// Slope of the active segment; zero outside the knot range.
    double slope(double x) const;

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }

    double min_value() const;
    double max_value() const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

double table_eval(const Table1D& t, double x);

/// Bilinear interpolation over a rectilinear grid, clamped at the edges.
/// values are row-major: values[i * cols + j] at (row_knots[i], col_knots[j]).
class Table2D {
public:
    Table2D(std::vector<double> row_knots, std::vector<double> col_knots, std::vector<double> values);

    double operator()(double row, double col) const;

    std::span<const double> row_knots() const { return rows_; }
    std::span<const double> col_knots() const { return cols_; }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> rows_;
    std::vector<double> cols_;
    std::vector<double> values_;
};

double clamp_unit(double x);
double clamp_signed_unit(double x);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace loadcycle::kernel
