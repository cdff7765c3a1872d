// SPDX-License-Identifier: Apache-2.0
//
// isosynth - omni-equivalent channel synthesis from angle-resolved measurements
// Copyright (C) 2026 The isosynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "isosynth/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace isosynth
{

namespace
{

constexpr double series_crossover = 20.0;
constexpr double rescale_threshold = 1e250;

void check_args(int order, double x, const BesselEvalPolicy &policy)
{
    if (order < 0)
        throw std::invalid_argument("bessel_i: order must be non-negative, got " + std::to_string(order));
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("bessel_i: argument must be finite and non-negative");
    if (!(policy.relative_tolerance > 0.0) || policy.max_terms < 1)
        throw std::invalid_argument("bessel_i: invalid evaluation policy");
}

// Ascending series with every term multiplied by e^{-shift}.
double series(int order, double x, double shift, const BesselEvalPolicy &policy)
{
    if (x == 0.0)
        return order == 0 ? std::exp(-shift) : 0.0;

    const double half = 0.5 * x;
    const double q = half * half;
    double term = std::exp(order * std::log(half) - std::lgamma(order + 1.0) - shift);
    if (term == 0.0)
        return 0.0;

    double sum = term;
    for (int k = 1; k <= policy.max_terms; ++k)
    {
        term *= q / (double(k) * double(k + order));
        sum += term;
        if (term <= policy.relative_tolerance * 1e-4 * sum)
            return sum;
    }
    throw std::runtime_error("bessel_i: power series did not converge within max_terms");
}

// Miller's algorithm, returns e^{-x} I_order(x).
double downward_recurrence_scaled(int order, double x, const BesselEvalPolicy &policy)
{
    const double digits = std::log(1e4 / policy.relative_tolerance);
    const int start = order + int(std::sqrt(2.0 * x * digits)) + int(std::sqrt(5.0 * digits * (order + 1.0))) + 20;

    const double two_over_x = 2.0 / x;
    double above = 0.0; // I_{k+1}
    double cur = 1.0;   // I_k, arbitrary scale
    double norm = 2.0 * cur;
    double result = (start == order) ? cur : 0.0;

    for (int k = start; k >= 1; --k)
    {
        const double below = above + two_over_x * double(k) * cur;
        above = cur;
        cur = below; // now I_{k-1}
        norm += (k - 1 == 0) ? cur : 2.0 * cur;
        if (k - 1 == order)
            result = cur;
        if (cur > rescale_threshold)
        {
            cur /= rescale_threshold;
            above /= rescale_threshold;
            norm /= rescale_threshold;
            result /= rescale_threshold;
        }
    }
    return result / norm;
}

// sin(pi x) with argument reduction so large x keeps full precision.
double sin_pi(double x)
{
    const double r = x - 2.0 * std::nearbyint(0.5 * x);
    return std::sin(std::numbers::pi * r);
}

double cos_pi(double x)
{
    const double r = x - 2.0 * std::nearbyint(0.5 * x);
    return std::cos(std::numbers::pi * r);
}

} // namespace

double bessel_i_scaled(int order, double x, const BesselEvalPolicy &policy)
{
    check_args(order, x, policy);
    if (x <= series_crossover)
        return series(order, x, x, policy);
    return downward_recurrence_scaled(order, x, policy);
}

double bessel_i(int order, double x, const BesselEvalPolicy &policy)
{
    check_args(order, x, policy);
    if (x <= series_crossover)
        return series(order, x, 0.0, policy);

    const double scaled = downward_recurrence_scaled(order, x, policy);
    if (scaled == 0.0)
        return 0.0;
    const double log_value = std::log(scaled) + x;
    if (log_value >= std::log(std::numeric_limits<double>::max()))
        throw BesselOverflow("bessel_i: I_" + std::to_string(order) + "(" + std::to_string(x) +
                             ") overflows double, use bessel_i_scaled");
    return scaled * std::exp(x);
}

std::complex<double> dirichlet_autocorr(double tau, int n_freq, double delta_f)
{
    if (n_freq < 1)
        throw std::invalid_argument("dirichlet_autocorr: n_freq must be >= 1");
    if (!std::isfinite(delta_f) || delta_f <= 0.0)
        throw std::invalid_argument("dirichlet_autocorr: delta_f must be finite and positive");
    if (!std::isfinite(tau))
        throw std::invalid_argument("dirichlet_autocorr: tau must be finite");

    const double n = double(n_freq);
    const double cycles = delta_f * tau; // tau in units of the period 1/df
    const double bins = n * cycles;      // tau in units of the delay bin 1/(N df)

    // Grid-aligned delays: exact zeros and exact peaks.
    const double nearest = std::nearbyint(bins);
    if (std::abs(bins - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(bins)))
    {
        const auto k = static_cast<long long>(nearest);
        if (k % n_freq != 0)
            return {0.0, 0.0};
        const long long period = k / n_freq;
        const bool negative = ((period % 2) != 0) && (n_freq % 2 != 0);
        return {negative ? -1.0 : 1.0, 0.0};
    }

    const double ratio = sin_pi(bins) / (n * sin_pi(cycles));
    return {ratio * cos_pi(cycles), -ratio * sin_pi(cycles)};
}

} // namespace isosynth
