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

#include "loadcycle/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace loadcycle::kernel {

namespace {

void require_increasing(std::span<const double> knots, const char* what)
{
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i] > knots[i - 1])) {
            throw std::invalid_argument(std::string(what) + ": knots must be strictly increasing");
        }
    }
}

void require_finite(std::span<const double> xs, const char* what)
{
    for (double x : xs) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

// Index i of the segment [knots[i], knots[i+1]] containing x; x must lie inside.
std::size_t segment_of(std::span<const double> knots, double x)
{
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    auto i = static_cast<std::size_t>(std::distance(knots.begin(), it));
    return std::clamp<std::size_t>(i, 1, knots.size() - 1) - 1;
}

}  // namespace

SmoothStep::SmoothStep(double x0, double h0, double x1, double h1)
    : x0_(x0), h0_(h0), x1_(x1), h1_(h1)
{
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(h0) || !std::isfinite(h1)) {
        throw std::invalid_argument("smooth step: non-finite parameter");
    }
    if (!(x0 < x1)) {
        throw std::invalid_argument("smooth step: x0 must be strictly below x1");
    }
}

double SmoothStep::operator()(double x) const
{
    if (x <= x0_) {
        return h0_;
    }
    if (x >= x1_) {
        return h1_;
    }
    const double u = (x - x0_) / (x1_ - x0_);
    return h0_ + (h1_ - h0_) * u * u * (3.0 - 2.0 * u);
}

double step3(double x, const SmoothStep& spec) { return spec(x); }

Latch latch_update(Latch l, bool set, bool reset)
{
    if (reset) {
        return Latch{false};
    }
    if (set) {
        return Latch{true};
    }
    return l;
}

double rate_limit(double prev, double target, double rate, double dt)
{
    const double max_step = rate * dt;
    const double delta = target - prev;
    if (std::abs(delta) <= max_step) {
        return target;
    }
    return delta > 0.0 ? prev + max_step : prev - max_step;
}

double clamped_integrate(double acc, double input, double dt, double lo, double hi)
{
    return std::clamp(acc + input * dt, lo, hi);
}

Table1D::Table1D(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values))
{
    if (knots_.size() < 2) {
        throw std::invalid_argument("table: at least two knots required");
    }
    if (knots_.size() != values_.size()) {
        throw std::invalid_argument("table: knots and values differ in length");
    }
    require_finite(knots_, "table");
    require_finite(values_, "table");
    require_increasing(knots_, "table");
}

double Table1D::operator()(double x) const
{
    if (x <= knots_.front()) {
        return values_.front();
    }
    if (x >= knots_.back()) {
        return values_.back();
    }
    const std::size_t i = segment_of(knots_, x);
    const double u = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + u * (values_[i + 1] - values_[i]);
}

double Table1D::slope(double x) const
{
    if (x < knots_.front() || x > knots_.back()) {
        return 0.0;
    }
    const std::size_t i = segment_of(knots_, x);
    return (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
}

double Table1D::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double Table1D::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double table_eval(const Table1D& t, double x) { return t(x); }

Table2D::Table2D(std::vector<double> row_knots, std::vector<double> col_knots, std::vector<double> values)
    : rows_(std::move(row_knots)), cols_(std::move(col_knots)), values_(std::move(values))
{
    if (rows_.size() < 2 || cols_.size() < 2) {
        throw std::invalid_argument("grid: at least two knots per axis required");
    }
    if (values_.size() != rows_.size() * cols_.size()) {
        throw std::invalid_argument("grid: value count must equal rows * cols");
    }
    require_finite(rows_, "grid");
    require_finite(cols_, "grid");
    require_finite(values_, "grid");
    require_increasing(rows_, "grid rows");
    require_increasing(cols_, "grid columns");
}

double Table2D::operator()(double row, double col) const
{
    const double r = std::clamp(row, rows_.front(), rows_.back());
    const double c = std::clamp(col, cols_.front(), cols_.back());
    const std::size_t i = segment_of(rows_, r);
    const std::size_t j = segment_of(cols_, c);
    const double u = (r - rows_[i]) / (rows_[i + 1] - rows_[i]);
    const double w = (c - cols_[j]) / (cols_[j + 1] - cols_[j]);
    const std::size_t n = cols_.size();
    const double v00 = values_[i * n + j];
    const double v01 = values_[i * n + j + 1];
    const double v10 = values_[(i + 1) * n + j];
    const double v11 = values_[(i + 1) * n + j + 1];
    return (1 - u) * ((1 - w) * v00 + w * v01) + u * ((1 - w) * v10 + w * v11);
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }
double clamp_signed_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double wrap_angle(double a)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a + std::numbers::pi, two_pi);
    if (a <= 0.0) {
        a += two_pi;
    }
    return a - std::numbers::pi;
}

}  // namespace loadcycle::kernel
