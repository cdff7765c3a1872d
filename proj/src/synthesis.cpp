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

#include "isosynth/synthesis.hpp"
#include "isosynth/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isosynth
{

namespace
{

// Per-delay row sums; each row is summed sequentially.
std::vector<double> row_sums(const PowerTensor &tensor, const SynthesisOptions &options)
{
    tensor.validate();
    const std::size_t n_delay = tensor.dims[0];
    const std::size_t n_angle = tensor.n_angle();

    double cutoff = -1.0;
    if (options.noise_threshold_db)
    {
        const double peak = tensor.values.empty() ? 0.0 : *std::max_element(tensor.values.begin(), tensor.values.end());
        cutoff = peak * std::pow(10.0, -*options.noise_threshold_db / 10.0);
    }

    std::vector<double> sums(n_delay, 0.0);
    parallel_for(n_delay, options.workers,
                 [&](std::size_t d)
                 {
                     const double *row = tensor.values.data() + d * n_angle;
                     double s = 0.0;
                     for (std::size_t a = 0; a < n_angle; ++a)
                         if (row[a] >= cutoff)
                             s += row[a];
                     sums[d] = s;
                 });
    return sums;
}

void check_positive(double v, const char *what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("synthesis: ") + what + " must be positive and finite");
}

} // namespace

PathLossLabel parse_path_loss_label(const std::string &name)
{
    if (name == "h2h")
        return PathLossLabel::h2h;
    if (name == "o2h")
        return PathLossLabel::o2h;
    if (name == "dd")
        return PathLossLabel::dd;
    if (name == "omni")
        return PathLossLabel::omni;
    throw std::invalid_argument("unknown configuration label '" + name + "' (expected h2h, o2h, dd or omni)");
}

std::string to_string(PathLossLabel label)
{
    switch (label)
    {
    case PathLossLabel::h2h:
        return "h2h";
    case PathLossLabel::o2h:
        return "o2h";
    case PathLossLabel::dd:
        return "dd";
    case PathLossLabel::omni:
        return "omni";
    }
    return "omni";
}

double tensor_sum(const PowerTensor &tensor, const SynthesisOptions &options)
{
    double s = 0.0;
    for (double r : row_sums(tensor, options))
        s += r;
    return s;
}

double estimate_channel_power(const PowerTensor &tensor, const CorrectionFactors &correction,
                              const SynthesisOptions &options)
{
    check_positive(correction.total, "correction factor");
    return tensor_sum(tensor, options) / correction.total;
}

std::vector<PdpSample> collapse_pdp(const PowerTensor &tensor, const CorrectionFactors &correction,
                                    const SynthesisOptions &options)
{
    const double angular = correction.zeta_t * correction.zeta_r;
    check_positive(angular, "angular correction");
    const auto sums = row_sums(tensor, options);
    const double dt = tensor.config.delta_tau();
    std::vector<PdpSample> pdp(sums.size());
    for (std::size_t d = 0; d < sums.size(); ++d)
        pdp[d] = {double(d) * dt, sums[d] / angular};
    return pdp;
}

double rms_delay_spread(std::span<const PdpSample> pdp)
{
    double total = 0.0, first = 0.0;
    for (const auto &s : pdp)
    {
        if (!(s.power >= 0.0))
            throw std::invalid_argument("rms_delay_spread: negative or NaN power");
        total += s.power;
        first += s.tau_ns * s.power;
    }
    if (!(total > 0.0))
        throw std::invalid_argument("rms_delay_spread: all-zero PDP");
    const double mean = first / total;
    double second = 0.0;
    for (const auto &s : pdp)
        second += (s.tau_ns - mean) * (s.tau_ns - mean) * s.power;
    return std::sqrt(std::max(0.0, second / total));
}

double label_correction(const CorrectionFactors &correction, PathLossLabel label)
{
    switch (label)
    {
    case PathLossLabel::h2h:
        return correction.zeta_tau * correction.zeta_phi_t * correction.zeta_phi_r;
    case PathLossLabel::o2h:
        return correction.zeta_tau * correction.zeta_phi_r;
    case PathLossLabel::dd:
        return correction.zeta_tau * correction.zeta_t * correction.zeta_r;
    case PathLossLabel::omni:
        return correction.zeta_tau;
    }
    return correction.total;
}

double path_loss(const PowerTensor &tensor, const CorrectionFactors &correction, PathLossLabel label,
                 const SynthesisOptions &options)
{
    const double zeta = label_correction(correction, label);
    check_positive(zeta, "correction factor");
    const double p = tensor_sum(tensor, options) / zeta;
    return p > 0.0 ? -10.0 * std::log10(p) : std::numeric_limits<double>::infinity();
}

CorrectionFactors tensor_correction(const PowerTensor &tensor, ZetaMode mode)
{
    return zeta_total(tensor.config.tx_beam, tensor.config.rx_beam, tensor.config.grids(), mode);
}

SynthesisResult synthesize(const PowerTensor &tensor, ZetaMode mode, std::optional<PathLossLabel> label,
                           const SynthesisOptions &options)
{
    SynthesisResult r;
    r.correction = tensor_correction(tensor, mode);
    r.label = label;
    const double zeta = label ? label_correction(r.correction, *label) : r.correction.total;
    check_positive(zeta, "correction factor");
    r.channel_power_hat = tensor_sum(tensor, options) / zeta;
    r.path_loss_db =
        r.channel_power_hat > 0.0 ? -10.0 * std::log10(r.channel_power_hat) : std::numeric_limits<double>::infinity();
    r.pdp = collapse_pdp(tensor, r.correction, options);
    double pdp_total = 0.0;
    for (const auto &s : r.pdp)
        pdp_total += s.power;
    r.rms_delay_spread_ns = pdp_total > 0.0 ? rms_delay_spread(r.pdp) : 0.0;
    return r;
}

} // namespace isosynth
