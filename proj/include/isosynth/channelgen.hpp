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

#ifndef ISOSYNTH_CHANNELGEN_HPP
#define ISOSYNTH_CHANNELGEN_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace isosynth
{

enum class AngleCoupling
{
    independent, // Tx and Rx cluster/ray angles drawn separately
    mirrored     // Tx angles copied from the Rx draw
};

// Saleh-Valenzuela parameters. Times in ns, rates in 1/ns, angles in degrees.
// Zero-valued rates and windows mean "derive the default" (see resolved()).
struct SVParams
{
    double cluster_decay_ns = 10.0;
    double ray_decay_ns = 5.0;
    double cluster_rate = 0.0;            // default 1 / cluster_decay
    double ray_rate = 0.0;                // default 1 / ray_decay
    double cluster_shadow_sigma_db = 3.0; // lognormal cluster shadowing
    double az_spread_deg = 100.0;         // std. dev. of the Laplacian ray offsets
    double zen_spread_deg = 100.0;
    double zen_cluster_mean_deg = 90.0;
    double zen_cluster_spread_deg = 10.0; // std. dev. of the Laplacian cluster zenith
    double max_delay_window_ns = 0.0;     // default 10 * cluster_decay
    double ray_window_ns = 0.0;           // default 10 * ray_decay
    // First cluster at T = 0 and first ray at the cluster arrival (classic SV).
    // When false both levels are plain Poisson processes.
    bool anchor_first_arrival = true;
    AngleCoupling coupling = AngleCoupling::independent;
    std::uint64_t seed = 0;

    SVParams resolved() const;
    void validate() const;
};

struct Mpc
{
    double tau_ns = 0.0;
    double theta_t = 90.0; // AoD co-elevation [0, 180]
    double phi_t = 0.0;    // AoD azimuth [0, 360)
    double theta_r = 90.0; // AoA co-elevation
    double phi_r = 0.0;    // AoA azimuth
    std::complex<double> gain;
};

struct MultipathRealization
{
    std::vector<Mpc> mpcs;
    SVParams params;
    std::uint64_t seed = 0;
    double total_power = 0.0;
};

double total_power(std::span<const Mpc> mpcs);

// Azimuth into [0, 360).
double wrap_azimuth_360(double degrees);
// Co-elevation reflected at the poles into [0, 180].
double reflect_coelevation(double degrees);

// Draws one realization. Draw order per seed: cluster arrivals, rays of each
// cluster, cluster shadowing, angles (per cluster: Rx means, Tx means; then per
// ray: Rx az, Rx zen, Tx az, Tx zen offsets), then the complex ray gains.
// Throws std::runtime_error if no cluster arrives after 16 redraws.
MultipathRealization generate(const SVParams &params);
MultipathRealization generate(const SVParams &params, std::uint64_t seed);

// Multiplies every gain by an independent uniform phase.
MultipathRealization randomize_phases(const MultipathRealization &realization, std::uint64_t seed);

AngleCoupling parse_angle_coupling(const std::string &name);
std::string to_string(AngleCoupling coupling);

} // namespace isosynth

#endif
