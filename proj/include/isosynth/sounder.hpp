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

#ifndef ISOSYNTH_SOUNDER_HPP
#define ISOSYNTH_SOUNDER_HPP

#include "isosynth/accumulation.hpp"
#include "isosynth/beams.hpp"
#include "isosynth/channelgen.hpp"

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace isosynth
{

// An MPC delay lies beyond 0.8 of the unambiguous delay window.
class AliasingError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// The tensor would exceed the configured cell cap.
class TensorSizeError : public std::length_error
{
public:
    using std::length_error::length_error;
};

inline constexpr std::size_t default_max_cells = std::size_t(1) << 26;
inline constexpr std::array<const char *, 5> tensor_dim_order = {"delay", "tx_theta", "tx_phi", "rx_theta", "rx_phi"};

struct SounderConfig
{
    double center_frequency_ghz = 154.0;
    double bandwidth_ghz = 4.0;
    int n_freq = 1024;
    int n_delay = 0; // 0 selects n_freq
    BeamPattern tx_beam;
    BeamPattern rx_beam;
    AxisGrid tx_theta = AxisGrid::fixed(90.0, 180.0);
    AxisGrid tx_phi = AxisGrid::fixed(0.0, 360.0);
    AxisGrid rx_theta = AxisGrid::fixed(90.0, 180.0);
    AxisGrid rx_phi = AxisGrid::fixed(0.0, 360.0);
    double noise_power = 0.0; // per cell, linear; 0 disables noise
    std::uint64_t noise_seed = 0;
    std::size_t max_cells = default_max_cells;

    double delta_f() const { return bandwidth_ghz / n_freq; } // GHz
    double delta_tau() const { return 1.0 / bandwidth_ghz; }  // ns
    int delay_bins() const { return n_delay > 0 ? n_delay : n_freq; }
    // Largest MPC delay accepted by the aliasing guard, ns.
    double max_delay_ns() const { return 0.8 * delay_bins() * delta_tau(); }
    std::array<std::size_t, 5> dims() const;
    std::size_t cell_count() const;
    ScanGrids grids() const;
    // Throws std::invalid_argument or TensorSizeError.
    void validate() const;
};

// Angle-resolved wideband power, row-major over
// (delay, tx_theta, tx_phi, rx_theta, rx_phi).
struct PowerTensor
{
    std::array<std::size_t, 5> dims{};
    std::vector<double> values;
    SounderConfig config;

    std::size_t n_tx() const { return dims[1] * dims[2]; }
    std::size_t n_rx() const { return dims[3] * dims[4]; }
    std::size_t n_angle() const { return n_tx() * n_rx(); }
    std::size_t index(std::size_t d, std::size_t tt, std::size_t tp, std::size_t rt, std::size_t rp) const
    {
        return (((d * dims[1] + tt) * dims[2] + tp) * dims[3] + rt) * dims[4] + rp;
    }
    double at(std::size_t d, std::size_t tt, std::size_t tp, std::size_t rt, std::size_t rp) const
    {
        return values[index(d, tt, tp, rt, rp)];
    }
    // Throws std::invalid_argument on a dims/value-count mismatch or negative cells.
    void validate() const;
};

// Per-path delay and beam factors of one realization on one grid. Building the
// basis checks all guards; each synthesis afterwards only needs path gains, so
// random-phase trials reuse it. Paths are held in a canonical order, which
// makes the result independent of the MPC order.
class ResponseBasis
{
public:
    ResponseBasis(std::span<const Mpc> mpcs, const SounderConfig &config);

    std::size_t n_paths() const { return order_.size(); }
    const SounderConfig &config() const { return config_; }

    // |sum_l gain_l A_l|^2 (+ noise); gains in the original MPC order.
    PowerTensor coherent(std::span<const std::complex<double>> gains, unsigned workers = 1) const;
    // sum_l power_l |A_l|^2; powers in the original MPC order.
    PowerTensor incoherent(std::span<const double> powers, unsigned workers = 1) const;

private:
    PowerTensor kernel(const std::vector<double> &weight_re, const std::vector<double> *weight_im, bool squared_beams,
                       unsigned workers) const;

    SounderConfig config_;
    std::vector<std::size_t> order_; // canonical position -> original index
    std::size_t n_delay_ = 0, n_tx_ = 0, n_rx_ = 0;
    std::vector<std::complex<double>> delay_; // n_delay x L, row-major
    std::vector<double> tx_, rx_;             // L x n_tx, L x n_rx amplitudes, row-major
};

PowerTensor synthesize_coherent(const MultipathRealization &realization, const SounderConfig &config,
                                unsigned workers = 1);
PowerTensor synthesize_incoherent(const MultipathRealization &realization, const SounderConfig &config,
                                  unsigned workers = 1);
// Mean of n_trials coherent tensors, trial t using randomize_phases with
// derive_seed(seed, t).
PowerTensor synthesize_phase_averaged(const MultipathRealization &realization, const SounderConfig &config,
                                      int n_trials, std::uint64_t seed, unsigned workers = 1);

} // namespace isosynth

#endif
