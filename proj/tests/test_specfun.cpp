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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace isosynth;

namespace
{

struct BesselCase
{
    int order;
    double x;
    double value;
};

// e^{-x} I_m(x), 60-digit mpmath (tests/oracles/gen_oracles.py).
const std::vector<BesselCase> scaled_cases = {
    {0, 0.5, 0.64503527044915006811},     {0, 2, 0.30850832255367103953},
    {0, 19.5, 0.090939432095156483305},   {0, 20.5, 0.088664429015745248147},
    {0, 50, 0.05656162664745419253},      {0, 224.88, 0.0266180718014751767},
    {0, 500, 0.017845706500153167237},    {1, 0.5, 0.15642080318487169714},
    {1, 2, 0.21526928924893765916},       {1, 19.5, 0.088576086094314852457},
    {1, 20.5, 0.086474113494087245571},   {1, 50, 0.055993123892895399644},
    {1, 224.88, 0.026558822878206465478}, {1, 500, 0.017827851852898056461},
    {2, 0.5, 0.019352057709663279537},    {2, 2, 0.093239033304733380375},
    {2, 19.5, 0.081854705316252395874},   {2, 20.5, 0.08022793013827332175},
    {2, 50, 0.054321901691738376544},     {2, 224.88, 0.026381867400210444705},
    {2, 500, 0.017774395092741575011},    {5, 0.5, 4.9876055214701639354e-6},
    {5, 2, 0.0013297610941881578142},     {5, 19.5, 0.047265624731918124194},
    {5, 20.5, 0.047600308808063654536},   {5, 50, 0.0439474970246232708},
    {5, 224.88, 0.025175802308753657886}, {5, 500, 0.017404662016757152637},
    {40, 0.5, 6.1584307184609693189e-73}, {40, 2, 1.6996341282984258887e-49},
    {40, 19.5, 1.4480295293554213303e-16}, {40, 20.5, 4.9617843151055637542e-16},
    {40, 50, 1.1586345533413894016e-8},   {40, 224.88, 0.00076003196202004323331},
    {40, 500, 0.0036002968357266234578},  {100, 0.5, 4.0468650034528473833e-219},
    {100, 2, 1.4645598301878817822e-159}, {100, 19.5, 7.3895113594981227604e-68},
    {100, 20.5, 4.4548785205565843465e-66}, {100, 50, 5.2614134632253477361e-38},
    {100, 224.88, 7.9395836033679273386e-12}, {100, 500, 8.2913917023616281972e-7},
    {360, 224.88, 4.1838272973888908288e-111}, {360, 500, 1.1055534820766253865e-56},
};

const std::vector<BesselCase> unscaled_cases = {
    {0, 0.1, 1.0025015629340956014},      {0, 1, 1.2660658777520083356},
    {0, 5, 27.239871823604446895},        {0, 15, 339649.37329791387952},
    {1, 0.1, 0.050062526047092692114},    {1, 1, 0.56515910399248502721},
    {1, 5, 24.335642142450527199},        {1, 15, 328124.92197020639673},
    {3, 0.1, 0.000020846357422327152638}, {3, 1, 0.022168424924331902476},
    {3, 5, 10.331150169151138387},        {3, 15, 249218.41964970336741},
    {10, 0.1, 2.691756142922141528e-20},  {10, 1, 2.7529480398368736252e-10},
    {10, 5, 0.0045800444191760512612},    {10, 15, 12267.475049806456674},
};

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

} // namespace

TEST_CASE("bessel_i at the origin")
{
    CHECK(bessel_i(0, 0.0) == 1.0);
    CHECK(bessel_i(1, 0.0) == 0.0);
    CHECK(bessel_i(7, 0.0) == 0.0);
    CHECK(bessel_i_scaled(0, 0.0) == 1.0);
}

TEST_CASE("bessel_i(0, 2) matches the power series")
{
    CHECK(rel(bessel_i(0, 2.0), 2.2795853023360672674) < 1e-13);
}

TEST_CASE("scaled Bessel values against high-precision oracle")
{
    for (const auto &c : scaled_cases)
    {
        CAPTURE(c.order);
        CAPTURE(c.x);
        CHECK(rel(bessel_i_scaled(c.order, c.x), c.value) < 1e-10);
    }
}

TEST_CASE("unscaled Bessel values against high-precision oracle")
{
    for (const auto &c : unscaled_cases)
    {
        CAPTURE(c.order);
        CAPTURE(c.x);
        CHECK(rel(bessel_i(c.order, c.x), c.value) < 1e-10);
    }
}

TEST_CASE("scaled and unscaled forms agree where both are finite")
{
    for (int m : {0, 1, 4, 40, 160})
        for (double x : {0.3, 3.0, 19.9, 20.1, 60.0, 300.0, 700.0})
        {
            CAPTURE(m);
            CAPTURE(x);
            const double unscaled = bessel_i(m, x);
            if (unscaled == 0.0)
                continue;
            CHECK(rel(std::exp(-x) * unscaled, bessel_i_scaled(m, x)) < 1e-12);
        }
}

TEST_CASE("bessel_i is increasing in x and decreasing in order")
{
    for (int m : {0, 1, 3, 40})
    {
        double prev = bessel_i(m, 0.0);
        for (double x = 0.5; x <= 60.0; x += 0.5)
        {
            const double v = bessel_i(m, x);
            CHECK(v > prev);
            CHECK(bessel_i(m + 1, x) < v);
            prev = v;
        }
    }
}

TEST_CASE("bessel_i overflow and invalid input are explicit errors")
{
    CHECK_THROWS_AS(bessel_i(0, 800.0), BesselOverflow);
    CHECK(std::isfinite(bessel_i_scaled(0, 800.0)));
    CHECK_THROWS_AS(bessel_i(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_i(0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_i(0, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(bessel_i_scaled(0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("tight term budgets are reported")
{
    BesselEvalPolicy policy;
    policy.max_terms = 2;
    CHECK_THROWS(bessel_i(0, 10.0, policy));
}

TEST_CASE("dirichlet kernel peak and grid zeros")
{
    const int n = 64;
    const double df = 0.5 / n;
    const double dt = 1.0 / (n * df);
    const auto peak = dirichlet_autocorr(0.0, n, df);
    CHECK(peak.real() == 1.0);
    CHECK(peak.imag() == 0.0);
    for (int k = 1; k < n; ++k)
    {
        const auto v = dirichlet_autocorr(k * dt, n, df);
        CHECK(v.real() == 0.0);
        CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("dirichlet kernel orthogonality over one period")
{
    for (int n : {64, 256, 1024})
    {
        const double df = 4.0 / n;
        const double dt = 1.0 / (n * df);
        double s = 0.0;
        for (int k = 0; k < n; ++k)
            s += std::norm(dirichlet_autocorr(k * dt, n, df));
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("dirichlet kernel is periodic, bounded, and matches the closed form")
{
    const int n = 16;
    const double df = 0.25;
    const double period = 1.0 / df;
    for (double tau = -7.3; tau < 7.3; tau += 0.137)
    {
        const auto v = dirichlet_autocorr(tau, n, df);
        CHECK(std::abs(v) <= 1.0 + 1e-15);
        const auto w = dirichlet_autocorr(tau + period, n, df);
        CHECK(std::abs(std::abs(v) - std::abs(w)) < 1e-12);

        const double pi = std::numbers::pi;
        const std::complex<double> direct =
            std::polar(1.0, -pi * df * tau) * std::sin(pi * n * df * tau) / (n * std::sin(pi * df * tau));
        CHECK(std::abs(v - direct) < 1e-12);
    }
    // Limit at the periodic peaks: |a| = 1 with the sign of the phase term.
    CHECK(std::abs(std::abs(dirichlet_autocorr(period, n, df)) - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(dirichlet_autocorr(3 * period, 5, df)) - 1.0) < 1e-15);
}

TEST_CASE("dirichlet kernel rejects invalid sizes")
{
    CHECK_THROWS_AS(dirichlet_autocorr(0.0, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_autocorr(0.0, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_autocorr(std::numeric_limits<double>::quiet_NaN(), 4, 1.0), std::invalid_argument);
}
