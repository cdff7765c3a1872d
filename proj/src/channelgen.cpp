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
#include "isosynth/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isosynth
{

namespace
{

constexpr int max_redraws = 16;

struct Cluster
{
    double arrival = 0.0;
    std::vector<double> ray_offsets;
    double shadowing = 1.0;
};

std::vector<double> poisson_arrivals(Rng &rng, double rate, double window, bool anchored)
{
    std::vector<double> times;
    double t = anchored ? 0.0 : rng.exponential(rate);
    while (t < window)
    {
        times.push_back(t);
        t += rng.exponential(rate);
    }
    return times;
}

MultipathRealization draw(const SVParams &p, std::uint64_t seed)
{
    Rng rng(seed);

    std::vector<Cluster> clusters;
    for (double t : poisson_arrivals(rng, p.cluster_rate, p.max_delay_window_ns, p.anchor_first_arrival))
        clusters.push_back({t, {}, 1.0});
    if (clusters.empty())
        return {};

    for (auto &c : clusters)
        c.ray_offsets = poisson_arrivals(rng, p.ray_rate, p.ray_window_ns, p.anchor_first_arrival);

    for (auto &c : clusters)
        c.shadowing = std::pow(10.0, p.cluster_shadow_sigma_db * rng.normal() / 10.0);

    // Laplacian scale chosen so the requested spread is the standard deviation.
    const double b_az = p.az_spread_deg / std::numbers::sqrt2;
    const double b_zen = p.zen_spread_deg / std::numbers::sqrt2;
    const double b_zen_cluster = p.zen_cluster_spread_deg / std::numbers::sqrt2;
    const bool mirrored = p.coupling == AngleCoupling::mirrored;

    MultipathRealization out;
    out.params = p;
    out.seed = seed;
    for (const auto &c : clusters)
    {
        const double rx_az = 360.0 * rng.uniform();
        const double rx_zen = reflect_coelevation(p.zen_cluster_mean_deg + rng.laplace(b_zen_cluster));
        double tx_az = rx_az, tx_zen = rx_zen;
        if (!mirrored)
        {
            tx_az = 360.0 * rng.uniform();
            tx_zen = reflect_coelevation(p.zen_cluster_mean_deg + rng.laplace(b_zen_cluster));
        }

        for (double offset : c.ray_offsets)
        {
            Mpc m;
            m.tau_ns = c.arrival + offset;
            m.phi_r = wrap_azimuth_360(rx_az + rng.laplace(b_az));
            m.theta_r = reflect_coelevation(rx_zen + rng.laplace(b_zen));
            if (mirrored)
            {
                m.phi_t = m.phi_r;
                m.theta_t = m.theta_r;
            }
            else
            {
                m.phi_t = wrap_azimuth_360(tx_az + rng.laplace(b_az));
                m.theta_t = reflect_coelevation(tx_zen + rng.laplace(b_zen));
            }
            // Mean power stored temporarily in the gain.
            const double mean_power =
                c.shadowing * std::exp(-c.arrival / p.cluster_decay_ns) * std::exp(-offset / p.ray_decay_ns);
            m.gain = {mean_power, 0.0};
            out.mpcs.push_back(m);
        }
    }

    for (auto &m : out.mpcs)
    {
        const double re = rng.normal();
        const double im = rng.normal();
        m.gain = std::sqrt(m.gain.real()) * std::complex<double>(re, im) / std::numbers::sqrt2;
    }
    out.total_power = total_power(out.mpcs);
    return out;
}

} // namespace

SVParams SVParams::resolved() const
{
    SVParams p = *this;
    if (p.cluster_rate == 0.0 && p.cluster_decay_ns > 0.0)
        p.cluster_rate = 1.0 / p.cluster_decay_ns;
    if (p.ray_rate == 0.0 && p.ray_decay_ns > 0.0)
        p.ray_rate = 1.0 / p.ray_decay_ns;
    if (p.max_delay_window_ns == 0.0)
        p.max_delay_window_ns = 10.0 * p.cluster_decay_ns;
    if (p.ray_window_ns == 0.0)
        p.ray_window_ns = 10.0 * p.ray_decay_ns;
    return p;
}

void SVParams::validate() const
{
    const SVParams p = resolved();
    if (!(p.cluster_decay_ns > 0.0) || !(p.ray_decay_ns > 0.0))
        throw std::invalid_argument("SVParams: decay constants must be positive");
    if (!(p.cluster_rate > 0.0) || !(p.ray_rate > 0.0))
        throw std::invalid_argument("SVParams: arrival rates must be positive");
    if (p.cluster_shadow_sigma_db < 0.0 || p.az_spread_deg < 0.0 || p.zen_spread_deg < 0.0 ||
        p.zen_cluster_spread_deg < 0.0)
        throw std::invalid_argument("SVParams: spreads must be non-negative");
    if (p.max_delay_window_ns < 5.0 * p.cluster_decay_ns)
        throw std::invalid_argument("SVParams: max_delay_window must be at least 5 cluster decay constants");
    if (!(p.ray_window_ns > 0.0))
        throw std::invalid_argument("SVParams: ray window must be positive");
}

double total_power(std::span<const Mpc> mpcs)
{
    double sum = 0.0;
    for (const auto &m : mpcs)
        sum += std::norm(m.gain);
    return sum;
}

double wrap_azimuth_360(double degrees)
{
    double w = std::fmod(degrees, 360.0);
    if (w < 0.0)
        w += 360.0;
    if (w >= 360.0) // -tiny + 360 rounds to 360
        w = 0.0;
    return w;
}

double reflect_coelevation(double degrees)
{
    double t = degrees;
    for (;;)
    {
        if (t < 0.0)
            t = -t;
        else if (t > 180.0)
            t = 360.0 - t;
        else
            return t;
    }
}

MultipathRealization generate(const SVParams &params)
{
    return generate(params, params.seed);
}

MultipathRealization generate(const SVParams &params, std::uint64_t seed)
{
    params.validate();
    const SVParams p = params.resolved();
    for (int attempt = 0; attempt <= max_redraws; ++attempt)
    {
        auto r = draw(p, attempt == 0 ? seed : derive_seed(seed, 0x5eed, std::uint64_t(attempt)));
        if (!r.mpcs.empty())
        {
            r.params.seed = seed;
            r.seed = seed;
            return r;
        }
    }
    throw std::runtime_error("generate: no cluster arrived within the delay window after repeated draws");
}

MultipathRealization randomize_phases(const MultipathRealization &realization, std::uint64_t seed)
{
    Rng rng(seed);
    MultipathRealization out = realization;
    for (auto &m : out.mpcs)
        m.gain *= std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    out.total_power = realization.total_power;
    return out;
}

AngleCoupling parse_angle_coupling(const std::string &name)
{
    if (name == "independent")
        return AngleCoupling::independent;
    if (name == "mirrored")
        return AngleCoupling::mirrored;
    throw std::invalid_argument("unknown angle coupling '" + name + "'");
}

std::string to_string(AngleCoupling coupling)
{
    return coupling == AngleCoupling::mirrored ? "mirrored" : "independent";
}

} // namespace isosynth
