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

#include "isosynth/channelgen.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace isosynth;

namespace
{

struct Moments
{
    double mean = 0.0;
    double stderr_ = 0.0;
};

Moments moments(const std::vector<double> &x)
{
    double s = 0.0, s2 = 0.0;
    for (double v : x)
        s += v;
    const double m = s / double(x.size());
    for (double v : x)
        s2 += (v - m) * (v - m);
    return {m, std::sqrt(s2 / double(x.size() - 1) / double(x.size()))};
}

SVParams single_cluster()
{
    SVParams p;
    p.cluster_rate = 1e-9;
    p.cluster_shadow_sigma_db = 0.0;
    return p;
}

double slope(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace

TEST_CASE("generation is deterministic in the seed")
{
    SVParams p;
    const auto a = generate(p, 42);
    const auto b = generate(p, 42);
    const auto c = generate(p, 43);
    REQUIRE(a.mpcs.size() == b.mpcs.size());
    for (std::size_t i = 0; i < a.mpcs.size(); ++i)
    {
        CHECK(a.mpcs[i].tau_ns == b.mpcs[i].tau_ns);
        CHECK(a.mpcs[i].gain == b.mpcs[i].gain);
        CHECK(a.mpcs[i].phi_t == b.mpcs[i].phi_t);
    }
    CHECK((a.mpcs.size() != c.mpcs.size() || a.mpcs[0].gain != c.mpcs[0].gain));
    p.seed = 42;
    CHECK(generate(p).total_power == a.total_power);
    CHECK(a.seed == 42);
}

TEST_CASE("angles and delays stay in their domains")
{
    SVParams p;
    p.zen_cluster_mean_deg = 10.0;
    for (std::uint64_t s = 0; s < 200; ++s)
    {
        const auto r = generate(p, s);
        CHECK(r.total_power == doctest::Approx(total_power(r.mpcs)));
        for (const auto &m : r.mpcs)
        {
            CHECK(m.tau_ns >= 0.0);
            CHECK(m.tau_ns < r.params.resolved().max_delay_window_ns + r.params.resolved().ray_window_ns);
            CHECK(m.phi_r >= 0.0);
            CHECK(m.phi_r < 360.0);
            CHECK(m.phi_t >= 0.0);
            CHECK(m.phi_t < 360.0);
            CHECK(m.theta_r >= 0.0);
            CHECK(m.theta_r <= 180.0);
            CHECK(m.theta_t >= 0.0);
            CHECK(m.theta_t <= 180.0);
        }
    }
}

TEST_CASE("angle helpers")
{
    CHECK(wrap_azimuth_360(-10.0) == 350.0);
    CHECK(wrap_azimuth_360(720.0) == 0.0);
    CHECK(wrap_azimuth_360(-1e-300) == 0.0);
    CHECK(reflect_coelevation(-20.0) == 20.0);
    CHECK(reflect_coelevation(200.0) == 160.0);
    CHECK(reflect_coelevation(-370.0) == 10.0);
}

TEST_CASE("anchored first arrivals")
{
    for (std::uint64_t s = 0; s < 50; ++s)
    {
        const auto r = generate(SVParams{}, s);
        double first = 1e300;
        for (const auto &m : r.mpcs)
            first = std::min(first, m.tau_ns);
        CHECK(first == 0.0);
    }
}

TEST_CASE("mirrored coupling copies the receive angles")
{
    SVParams p;
    p.coupling = AngleCoupling::mirrored;
    for (const auto &m : generate(p, 7).mpcs)
    {
        CHECK(m.phi_t == m.phi_r);
        CHECK(m.theta_t == m.theta_r);
    }
    CHECK(parse_angle_coupling(to_string(AngleCoupling::mirrored)) == AngleCoupling::mirrored);
    CHECK_THROWS_AS(parse_angle_coupling("tangled"), std::invalid_argument);
}

TEST_CASE("random phases keep magnitudes and are reproducible")
{
    const auto r = generate(SVParams{}, 5);
    const auto a = randomize_phases(r, 11);
    const auto b = randomize_phases(r, 11);
    const auto c = randomize_phases(r, 12);
    REQUIRE(a.mpcs.size() == r.mpcs.size());
    for (std::size_t i = 0; i < r.mpcs.size(); ++i)
    {
        CHECK(std::abs(a.mpcs[i].gain) == doctest::Approx(std::abs(r.mpcs[i].gain)).epsilon(1e-14));
        CHECK(a.mpcs[i].gain == b.mpcs[i].gain);
        CHECK(a.mpcs[i].tau_ns == r.mpcs[i].tau_ns);
    }
    CHECK(a.mpcs[0].gain != c.mpcs[0].gain);
    CHECK(a.total_power == r.total_power);
}

TEST_CASE("mean path count matches the anchored Poisson model")
{
    // (1 + rate*window) clusters times (1 + rate*window) rays = 11 * 11.
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 4000; ++s)
        counts.push_back(double(generate(SVParams{}, s).mpcs.size()));
    const auto m = moments(counts);
    CHECK(std::abs(m.mean - 121.0) < 3.0 * m.stderr_);
}

TEST_CASE("cluster and ray inter-arrival times are exponential with the configured rates")
{
    SVParams clusters_only;
    clusters_only.ray_window_ns = 1e-9;
    clusters_only.max_delay_window_ns = 1e4;
    std::vector<double> gaps;
    for (std::uint64_t s = 0; gaps.size() < 10000; ++s)
    {
        auto r = generate(clusters_only, s);
        std::vector<double> t;
        for (const auto &m : r.mpcs)
            t.push_back(m.tau_ns);
        std::sort(t.begin(), t.end());
        for (std::size_t i = 1; i < t.size(); ++i)
            gaps.push_back(t[i] - t[i - 1]);
    }
    const auto cg = moments(gaps);
    CHECK(std::abs(cg.mean - 10.0) < 3.0 * cg.stderr_);

    gaps.clear();
    for (std::uint64_t s = 0; gaps.size() < 10000; ++s)
    {
        SVParams rays_only = single_cluster();
        rays_only.ray_window_ns = 1e4;
        auto r = generate(rays_only, s);
        std::vector<double> t;
        for (const auto &m : r.mpcs)
            t.push_back(m.tau_ns);
        std::sort(t.begin(), t.end());
        for (std::size_t i = 1; i < t.size(); ++i)
            gaps.push_back(t[i] - t[i - 1]);
    }
    const auto rg = moments(gaps);
    CHECK(std::abs(rg.mean - 5.0) < 3.0 * rg.stderr_);
}

TEST_CASE("ray power decays with the ray time constant")
{
    std::vector<double> x, y;
    for (std::uint64_t s = 0; s < 3000; ++s)
        for (const auto &m : generate(single_cluster(), s).mpcs)
        {
            x.push_back(m.tau_ns);
            y.push_back(std::log(std::norm(m.gain)));
        }
    CHECK(std::abs(-1.0 / slope(x, y) - 5.0) < 0.5);
}

TEST_CASE("cluster power decays with the cluster time constant")
{
    SVParams p;
    p.ray_window_ns = 1e-9;
    std::vector<double> x, y;
    for (std::uint64_t s = 0; s < 10000; ++s)
        for (const auto &m : generate(p, s).mpcs)
        {
            x.push_back(m.tau_ns);
            y.push_back(10.0 * std::log10(std::norm(m.gain)));
        }
    const double expected_db_per_ns = -10.0 / std::log(10.0) / 10.0;
    CHECK(std::abs(slope(x, y) / expected_db_per_ns - 1.0) < 0.1);
}

TEST_CASE("single ray without shadowing has unit mean power")
{
    SVParams p = single_cluster();
    p.ray_window_ns = 1e-9;
    std::vector<double> power;
    for (std::uint64_t s = 0; s < 10000; ++s)
    {
        const auto r = generate(p, s);
        REQUIRE(r.mpcs.size() == 1);
        CHECK(r.mpcs[0].tau_ns == 0.0);
        power.push_back(r.total_power);
    }
    const auto m = moments(power);
    CHECK(std::abs(m.mean - 1.0) < 3.0 * m.stderr_);
}

TEST_CASE("invalid parameters are rejected")
{
    SVParams p;
    p.cluster_decay_ns = 0.0;
    CHECK_THROWS_AS(generate(p, 1), std::invalid_argument);
    p = SVParams{};
    p.max_delay_window_ns = 20.0;
    CHECK_THROWS_AS(generate(p, 1), std::invalid_argument);
    p = SVParams{};
    p.az_spread_deg = -1.0;
    CHECK_THROWS_AS(generate(p, 1), std::invalid_argument);
}

TEST_CASE("unanchored processes redraw until a path arrives")
{
    SVParams p;
    p.anchor_first_arrival = false;
    p.cluster_rate = 0.01;
    for (std::uint64_t s = 0; s < 100; ++s)
        CHECK_FALSE(generate(p, s).mpcs.empty());
}
