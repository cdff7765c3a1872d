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

#include "isosynth/beams.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace isosynth;

namespace
{

const double kappa_9 = 112.42656852103561799;
const double kappa_8 = 142.27452420876613304;

double rel(double a, double b)
{
    return std::abs(a - b) / std::abs(b);
}

std::filesystem::path temp_file(const std::string &name)
{
    auto dir = std::filesystem::temp_directory_path() / "isosynth_test_beams";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("von Mises concentration from the beamwidth")
{
    const auto b = make_vonmises(9.0, 9.0);
    CHECK(rel(b.kappa_theta, kappa_9) < 1e-13);
    CHECK(rel(b.kappa_phi, kappa_9) < 1e-13);
    CHECK(rel(make_vonmises(8.0, 9.0).kappa_theta, kappa_8) < 1e-13);
    CHECK(std::abs(b.kappa_phi - 112.44) < 0.02);
}

TEST_CASE("flat axes at and above the span")
{
    const auto b = make_vonmises(180.0, 360.0);
    CHECK(b.kappa_theta == 0.0);
    CHECK(b.kappa_phi == 0.0);
    CHECK(b.boresight_gain == 1.0);
    CHECK(make_vonmises(200.0, 400.0).kappa_phi == 0.0);
    CHECK(BeamPattern(b).flat_theta());
    CHECK(BeamPattern(b).flat_phi());
}

TEST_CASE("non-positive beamwidths are rejected")
{
    CHECK_THROWS_AS(make_vonmises(0.0, 9.0), std::invalid_argument);
    CHECK_THROWS_AS(make_vonmises(9.0, -1.0), std::invalid_argument);
}

TEST_CASE("half-power points sit at half the beamwidth")
{
    for (double h : {3.0, 9.0, 30.0, 90.0, 170.0})
    {
        const BeamPattern p = make_vonmises(h, h);
        CHECK(std::abs(std::pow(evaluate(p, 0.0, h / 2), 2) - 0.5) < 1e-12);
        CHECK(std::abs(std::pow(evaluate(p, h / 2, 0.0), 2) - 0.5) < 1e-12);
        CHECK(std::abs(evaluate_power(p, -h / 2, 0.0) - 0.5) < 1e-12);
    }
}

TEST_CASE("HPBW recovery by bisection")
{
    const BeamPattern p = make_vonmises(180.0, 13.0);
    double lo = 0.0, hi = 90.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (evaluate_power(p, 0.0, mid) > 0.5 ? lo : hi) = mid;
    }
    CHECK(std::abs(lo - 6.5) < 1e-6);
}

TEST_CASE("von Mises power nine degrees off axis")
{
    const BeamPattern p = make_vonmises(180.0, 9.0);
    CHECK(rel(evaluate_power(p, 0.0, 9.0), 0.062767664200768902581) < 1e-12);
    VonMisesBeam fixed;
    fixed.kappa_phi = 112.44;
    CHECK(rel(evaluate_power(BeamPattern(fixed), 0.0, 9.0), 0.062746908634952395094) < 1e-12);
}

TEST_CASE("boresight gain is the product of the axis gains")
{
    const auto b = make_vonmises(9.0, 9.0);
    CHECK(rel(vonmises_axis_gain(kappa_9), 26.54846278970645101) < 1e-11);
    CHECK(rel(b.boresight_gain, vonmises_axis_gain(b.kappa_theta) * vonmises_axis_gain(b.kappa_phi)) < 1e-14);
    CHECK(vonmises_axis_gain(0.0) == 1.0);
    for (double k : {0.1, 1.0, 10.0, 1000.0})
        CHECK(vonmises_axis_gain(k) > 1.0);
}

TEST_CASE("peak normalization, symmetry and monotone main lobe")
{
    const BeamPattern p = make_vonmises(20.0, 35.0);
    CHECK(evaluate(p, 0.0, 0.0) == 1.0);
    CHECK(evaluate(BeamPattern(Isotropic{}), 37.0, -101.0) == 1.0);
    for (double x = 0.0; x < 180.0; x += 7.5)
        for (double y = 0.0; y < 180.0; y += 11.0)
        {
            const double v = evaluate(p, x, y);
            CHECK(v == evaluate(p, -x, y));
            CHECK(v == evaluate(p, x, -y));
            CHECK(evaluate(p, x + 1.0, y) <= v);
            CHECK(evaluate(p, x, y + 1.0) <= v);
        }
}

TEST_CASE("azimuth offsets wrap, co-elevation offsets do not")
{
    CHECK(wrap_azimuth(190.0) == doctest::Approx(-170.0));
    CHECK(wrap_azimuth(-180.0) == 180.0);
    CHECK(wrap_azimuth(540.0) == 180.0);
    const BeamPattern p = make_vonmises(30.0, 30.0);
    CHECK(evaluate(p, 0.0, 350.0) == doctest::Approx(evaluate(p, 0.0, -10.0)).epsilon(1e-14));
    CHECK(evaluate(p, 0.0, -355.0) == doctest::Approx(evaluate(p, 0.0, 5.0)).epsilon(1e-14));
}

TEST_CASE("tabulated pattern interpolates in linear power and refuses to extrapolate")
{
    auto t = make_tabulated({-10.0, 0.0, 10.0}, {-10.0, 0.0, 10.0},
                            {0.0, 0.0, 0.0, 0.0, 1.0, std::sqrt(0.5), 0.0, 0.0, 0.0});
    const BeamPattern p(t);
    CHECK(evaluate_power(p, 0.0, 5.0) == doctest::Approx(0.75));
    CHECK(evaluate(p, 0.0, 5.0) == doctest::Approx(std::sqrt(0.75)));
    CHECK(evaluate_power(p, 5.0, 0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(evaluate(p, 11.0, 0.0), PatternSupportError);
    CHECK_THROWS_AS(evaluate(p, 0.0, -10.5), PatternSupportError);
}

TEST_CASE("tabulated table renormalizes to a unit peak")
{
    auto t = make_tabulated({-1.0, 0.0, 1.0}, {0.0}, {0.25, 0.5, 0.25});
    CHECK(t.amplitude[1] == 1.0);
    CHECK(t.amplitude[0] == 0.5);
}

TEST_CASE("separability detection")
{
    CHECK(make_tabulated({-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 0.25})
              .separable);
    CHECK_FALSE(
        make_tabulated({-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, {0.9, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 0.25}).separable);
    CHECK(tabulate(make_vonmises(20.0, 30.0), 2.0, 2.0).separable);
    CHECK_FALSE(make_horn_fixture().separable);
}

TEST_CASE("invalid tables are rejected")
{
    CHECK_THROWS_AS(make_tabulated({0.0, 0.0}, {0.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated({0.0, 1.0}, {0.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_tabulated({0.0, 1.0}, {0.0}, {1.0, -0.1}), std::invalid_argument);
}

TEST_CASE("CSV round trip of a sampled von Mises beam")
{
    const BeamPattern vm = make_vonmises(8.0, 9.0);
    const auto table = tabulate(vm, 0.5, 0.5, 30.0, 30.0);
    const auto path = temp_file("vm.csv");
    export_pattern(table, path);
    const BeamPattern back(import_pattern(path));
    for (double x = -30.0; x <= 30.0; x += 0.5)
        for (double y = -30.0; y <= 30.0; y += 1.5)
            CHECK(std::abs(evaluate(back, x, y) - evaluate(vm, x, y)) <= 1e-9);
    CHECK(back.boresight_gain() == doctest::Approx(vm.boresight_gain()).epsilon(1e-12));
}

TEST_CASE("CSV import of a flat 1-D cut behaves isotropically")
{
    const auto path = temp_file("flat.csv");
    {
        std::ofstream out(path);
        out << "theta_deg,phi_deg,amplitude_linear\n";
        for (int p = -180; p <= 180; p += 10)
            out << "0," << p << ",1.0\n";
    }
    std::filesystem::remove(temp_file("flat.json"));
    const BeamPattern p(import_pattern(path));
    CHECK(p.flat_theta());
    for (double x : {-170.0, -33.0, 0.0, 91.0, 180.0})
        CHECK(evaluate(p, 42.0, x) == 1.0);
}

TEST_CASE("CSV import renormalizes and reads the sidecar")
{
    const auto path = temp_file("half.csv");
    {
        std::ofstream out(path);
        out << "theta_deg,phi_deg,amplitude_linear\n0,-5,0.25\n0,0,0.5\n0,5,0.25\n";
        std::ofstream(temp_file("half.json")) << R"({"gain_dbi": 20, "frequency_ghz": 154, "description": "test"})";
    }
    const auto t = import_pattern(path);
    CHECK(*std::max_element(t.amplitude.begin(), t.amplitude.end()) == 1.0);
    CHECK(t.boresight_gain == doctest::Approx(100.0));
    CHECK(t.description == "test");
}

TEST_CASE("CSV import rejects malformed files")
{
    auto write = [](const std::string &name, const std::string &body)
    {
        const auto p = temp_file(name);
        std::ofstream(p) << body;
        return p;
    };
    CHECK_THROWS(import_pattern(write("hdr.csv", "theta,phi,amp\n0,0,1\n")));
    CHECK_THROWS(import_pattern(write("order.csv", "theta_deg,phi_deg,amplitude_linear\n0,5,1\n0,0,1\n")));
    CHECK_THROWS(import_pattern(write("neg.csv", "theta_deg,phi_deg,amplitude_linear\n0,0,1\n0,5,-1\n")));
    CHECK_THROWS(import_pattern(
        write("missing.csv", "theta_deg,phi_deg,amplitude_linear\n0,0,1\n0,5,1\n1,0,1\n")));
    CHECK_THROWS(import_pattern(temp_file("does_not_exist.csv")));
}

TEST_CASE("horn fixture shape")
{
    const BeamPattern horn(make_horn_fixture());
    CHECK(evaluate(horn, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // Main lobe half-power points, sidelobes perturb them only slightly.
    CHECK(evaluate_power(horn, 4.0, 0.0) == doctest::Approx(0.5).epsilon(0.01));
    CHECK(evaluate_power(horn, 0.0, 4.5) == doctest::Approx(0.5).epsilon(0.01));
    // -20 dB sidelobes 20 degrees off axis in azimuth only.
    CHECK(evaluate_power(horn, 0.0, 20.0) == doctest::Approx(0.01).epsilon(0.01));
    CHECK(evaluate_power(horn, 0.0, -20.0) == doctest::Approx(0.01).epsilon(0.01));
    CHECK(evaluate_power(horn, 20.0, 0.0) < 1e-6);
    CHECK(10.0 * std::log10(horn.boresight_gain()) == doctest::Approx(26.0));
}
