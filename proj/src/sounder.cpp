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

#include "isosynth/sounder.hpp"
#include "isosynth/parallel.hpp"
#include "isosynth/rng.hpp"
#include "isosynth/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

namespace isosynth
{

namespace
{

// Output cells per GEMM block (per real/imaginary part).
constexpr std::size_t block_cells = std::size_t(1) << 19;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Counter-based circular Gaussian sample, independent of evaluation order.
std::complex<double> cell_noise(std::uint64_t seed, std::uint64_t cell, double power)
{
    const std::uint64_t key = splitmix64(seed);
    const double u1 = double(splitmix64(key ^ splitmix64(2 * cell)) >> 11) * 0x1.0p-53;
    const double u2 = double(splitmix64(key ^ splitmix64(2 * cell + 1)) >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-std::log1p(-u1) * power); // sqrt(-2 ln(1-u1)) * sqrt(power / 2)
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::vector<double> beam_factors(const BeamPattern &beam, const AxisGrid &theta, const AxisGrid &phi,
                                 std::span<const Mpc> mpcs, const std::vector<std::size_t> &order, bool tx)
{
    const std::size_t n = std::size_t(theta.n_points) * std::size_t(phi.n_points);
    std::vector<double> out(order.size() * n);
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        const Mpc &m = mpcs[order[k]];
        const double th = tx ? m.theta_t : m.theta_r;
        const double ph = tx ? m.phi_t : m.phi_r;
        std::size_t c = 0;
        for (int i = 0; i < theta.n_points; ++i)
            for (int j = 0; j < phi.n_points; ++j)
                out[k * n + c++] = evaluate(beam, theta.angle(i) - th, phi.angle(j) - ph);
    }
    return out;
}

} // namespace

std::array<std::size_t, 5> SounderConfig::dims() const
{
    return {std::size_t(delay_bins()), std::size_t(tx_theta.n_points), std::size_t(tx_phi.n_points),
            std::size_t(rx_theta.n_points), std::size_t(rx_phi.n_points)};
}

std::size_t SounderConfig::cell_count() const
{
    std::size_t n = 1;
    for (std::size_t d : dims())
    {
        if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d)
            return std::numeric_limits<std::size_t>::max();
        n *= d;
    }
    return n;
}

ScanGrids SounderConfig::grids() const
{
    return {tx_theta, tx_phi, rx_theta, rx_phi, delay_bins(), n_freq, delta_f()};
}

void SounderConfig::validate() const
{
    if (!(bandwidth_ghz > 0.0) || !std::isfinite(bandwidth_ghz))
        throw std::invalid_argument("sounder: bandwidth must be positive");
    if (n_freq < 1)
        throw std::invalid_argument("sounder: n_freq must be at least 1");
    if (n_delay < 0 || n_delay > n_freq)
        throw std::invalid_argument("sounder: n_delay must lie in [1, n_freq] (unambiguous delay window)");
    if (!(noise_power >= 0.0))
        throw std::invalid_argument("sounder: noise_power must be non-negative");
    tx_theta.validate();
    tx_phi.validate();
    rx_theta.validate();
    rx_phi.validate();
    if (tx_theta.span != 180.0 || rx_theta.span != 180.0 || tx_phi.span != 360.0 || rx_phi.span != 360.0)
        throw std::invalid_argument("sounder: theta grids need span 180 and phi grids span 360");
    if (cell_count() > max_cells)
        throw TensorSizeError("sounder: tensor of " + std::to_string(cell_count()) + " cells exceeds the cap of " +
                              std::to_string(max_cells));
}

void PowerTensor::validate() const
{
    std::size_t n = 1;
    for (std::size_t d : dims)
        n *= d;
    if (n != values.size())
        throw std::invalid_argument("power tensor: dims product " + std::to_string(n) + " != value count " +
                                    std::to_string(values.size()));
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("power tensor: cells must be finite and non-negative");
}

ResponseBasis::ResponseBasis(std::span<const Mpc> mpcs, const SounderConfig &config) : config_(config)
{
    config_.validate();
    if (mpcs.empty())
        throw std::invalid_argument("sounder: realization has no paths");

    const double limit = config_.max_delay_ns();
    for (const auto &m : mpcs)
    {
        if (!(m.tau_ns >= 0.0) || m.tau_ns > limit)
            throw AliasingError("sounder: path delay " + std::to_string(m.tau_ns) + " ns outside [0, " +
                                std::to_string(limit) + "] ns (0.8 of the delay window)");
        if (!std::isfinite(m.gain.real()) || !std::isfinite(m.gain.imag()))
            throw std::invalid_argument("sounder: non-finite path gain");
    }

    order_.resize(mpcs.size());
    std::iota(order_.begin(), order_.end(), std::size_t(0));
    auto key = [&](std::size_t i)
    {
        const Mpc &m = mpcs[i];
        return std::make_tuple(m.tau_ns, m.theta_t, m.phi_t, m.theta_r, m.phi_r, m.gain.real(), m.gain.imag());
    };
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    const auto dims = config_.dims();
    n_delay_ = dims[0];
    n_tx_ = dims[1] * dims[2];
    n_rx_ = dims[3] * dims[4];
    const std::size_t L = order_.size();

    delay_.resize(n_delay_ * L);
    const double dt = config_.delta_tau();
    for (std::size_t k = 0; k < L; ++k)
    {
        const double tau = mpcs[order_[k]].tau_ns;
        for (std::size_t d = 0; d < n_delay_; ++d)
            delay_[d * L + k] = dirichlet_autocorr(double(d) * dt - tau, config_.n_freq, config_.delta_f());
    }
    tx_ = beam_factors(config_.tx_beam, config_.tx_theta, config_.tx_phi, mpcs, order_, true);
    rx_ = beam_factors(config_.rx_beam, config_.rx_theta, config_.rx_phi, mpcs, order_, false);
}

PowerTensor ResponseBasis::kernel(const std::vector<double> &weight_re, const std::vector<double> *weight_im,
                                  bool squared_beams, unsigned workers) const
{
    const std::size_t L = order_.size();
    const std::size_t n_angle = n_tx_ * n_rx_;
    const bool coherent = weight_im != nullptr;
    const bool noisy = config_.noise_power > 0.0;

    // Delay rows with an all-zero weight produce all-zero output rows.
    std::vector<std::size_t> rows;
    for (std::size_t d = 0; d < n_delay_; ++d)
    {
        bool any = noisy;
        for (std::size_t k = 0; k < L && !any; ++k)
            any = weight_re[d * L + k] != 0.0 || (coherent && (*weight_im)[d * L + k] != 0.0);
        if (any)
            rows.push_back(d);
    }

    PowerTensor out;
    out.dims = config_.dims();
    out.config = config_;
    out.values.assign(n_delay_ * n_angle, coherent ? 0.0 : config_.noise_power);
    if (rows.empty())
        return out;

    const std::size_t n_rows = rows.size();
    RowMatrix a_re(n_rows, L), a_im;
    if (coherent)
        a_im.resize(n_rows, L);
    for (std::size_t i = 0; i < n_rows; ++i)
        for (std::size_t k = 0; k < L; ++k)
        {
            a_re(i, k) = weight_re[rows[i] * L + k];
            if (coherent)
                a_im(i, k) = (*weight_im)[rows[i] * L + k];
        }

    const std::size_t block = std::clamp<std::size_t>(block_cells / n_rows, 1, n_angle);
    const std::size_t n_blocks = (n_angle + block - 1) / block;
    parallel_for(n_blocks, workers,
                 [&](std::size_t bi)
                 {
                     const std::size_t a0 = bi * block;
                     const std::size_t width = std::min(block, n_angle - a0);
                     Eigen::MatrixXd g(L, width);
                     for (std::size_t b = 0; b < width; ++b)
                     {
                         const std::size_t t = (a0 + b) / n_rx_;
                         const std::size_t r = (a0 + b) % n_rx_;
                         for (std::size_t k = 0; k < L; ++k)
                         {
                             const double v = tx_[k * n_tx_ + t] * rx_[k * n_rx_ + r];
                             g(k, b) = squared_beams ? v * v : v;
                         }
                     }

                     const Eigen::MatrixXd h_re = a_re * g;
                     Eigen::MatrixXd h_im;
                     if (coherent)
                         h_im = a_im * g;
                     for (std::size_t i = 0; i < n_rows; ++i)
                     {
                         const std::size_t base = rows[i] * n_angle + a0;
                         for (std::size_t b = 0; b < width; ++b)
                         {
                             if (!coherent)
                             {
                                 out.values[base + b] += h_re(i, b);
                                 continue;
                             }
                             std::complex<double> h(h_re(i, b), h_im(i, b));
                             if (noisy)
                                 h += cell_noise(config_.noise_seed, base + b, config_.noise_power);
                             out.values[base + b] = std::norm(h);
                         }
                     }
                 });
    return out;
}

PowerTensor ResponseBasis::coherent(std::span<const std::complex<double>> gains, unsigned workers) const
{
    const std::size_t L = order_.size();
    if (gains.size() != L)
        throw std::invalid_argument("sounder: gain count does not match the path count");
    std::vector<double> re(n_delay_ * L), im(n_delay_ * L);
    for (std::size_t d = 0; d < n_delay_; ++d)
        for (std::size_t k = 0; k < L; ++k)
        {
            const std::complex<double> w = delay_[d * L + k] * gains[order_[k]];
            re[d * L + k] = w.real();
            im[d * L + k] = w.imag();
        }
    return kernel(re, &im, false, workers);
}

PowerTensor ResponseBasis::incoherent(std::span<const double> powers, unsigned workers) const
{
    const std::size_t L = order_.size();
    if (powers.size() != L)
        throw std::invalid_argument("sounder: power count does not match the path count");
    std::vector<double> w(n_delay_ * L);
    for (std::size_t d = 0; d < n_delay_; ++d)
        for (std::size_t k = 0; k < L; ++k)
            w[d * L + k] = std::norm(delay_[d * L + k]) * powers[order_[k]];
    return kernel(w, nullptr, true, workers);
}

PowerTensor synthesize_coherent(const MultipathRealization &realization, const SounderConfig &config,
                                unsigned workers)
{
    ResponseBasis basis(realization.mpcs, config);
    std::vector<std::complex<double>> gains;
    gains.reserve(realization.mpcs.size());
    for (const auto &m : realization.mpcs)
        gains.push_back(m.gain);
    return basis.coherent(gains, workers);
}

PowerTensor synthesize_incoherent(const MultipathRealization &realization, const SounderConfig &config,
                                  unsigned workers)
{
    ResponseBasis basis(realization.mpcs, config);
    std::vector<double> powers;
    powers.reserve(realization.mpcs.size());
    for (const auto &m : realization.mpcs)
        powers.push_back(std::norm(m.gain));
    return basis.incoherent(powers, workers);
}

PowerTensor synthesize_phase_averaged(const MultipathRealization &realization, const SounderConfig &config,
                                      int n_trials, std::uint64_t seed, unsigned workers)
{
    if (n_trials < 1)
        throw std::invalid_argument("sounder: n_trials must be at least 1");
    ResponseBasis basis(realization.mpcs, config);
    PowerTensor sum;
    std::vector<std::complex<double>> gains(realization.mpcs.size());
    for (int t = 0; t < n_trials; ++t)
    {
        const auto trial = randomize_phases(realization, derive_seed(seed, std::uint64_t(t)));
        for (std::size_t i = 0; i < gains.size(); ++i)
            gains[i] = trial.mpcs[i].gain;
        auto tensor = basis.coherent(gains, workers);
        if (t == 0)
            sum = std::move(tensor);
        else
            for (std::size_t i = 0; i < sum.values.size(); ++i)
                sum.values[i] += tensor.values[i];
    }
    for (double &v : sum.values)
        v /= n_trials;
    return sum;
}

} // namespace isosynth
