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

#ifndef ISOSYNTH_SYNTHESIS_HPP
#define ISOSYNTH_SYNTHESIS_HPP

#include "isosynth/accumulation.hpp"
#include "isosynth/sounder.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isosynth
{

struct PdpSample
{
    double tau_ns = 0.0;
    double power = 0.0;
};

enum class PathLossLabel
{
    h2h,  // horn-to-horn, azimuth scans at both ends: zeta_phi_t * zeta_phi_r
    o2h,  // omni-to-horn, Rx azimuth scan: zeta_phi_r
    dd,   // double-directional: zeta_t * zeta_r
    omni  // no angular correction
};

PathLossLabel parse_path_loss_label(const std::string &name);
std::string to_string(PathLossLabel label);

struct SynthesisOptions
{
    // Cells more than this many dB below the tensor peak are dropped before
    // summation. Off by default.
    std::optional<double> noise_threshold_db;
    unsigned workers = 1;
};

struct SynthesisResult
{
    double channel_power_hat = 0.0; // linear
    double path_loss_db = 0.0;      // -10 log10(channel_power_hat)
    std::vector<PdpSample> pdp;
    double rms_delay_spread_ns = 0.0;
    CorrectionFactors correction;
    std::optional<PathLossLabel> label;
};

// Sum over all cells, in a fixed reduction order independent of workers.
double tensor_sum(const PowerTensor &tensor, const SynthesisOptions &options = {});

// (1 / zeta_total) * sum of all cells. Throws std::invalid_argument when the
// correction is not positive.
double estimate_channel_power(const PowerTensor &tensor, const CorrectionFactors &correction,
                              const SynthesisOptions &options = {});

// Per-delay sum over all angle cells, scaled by 1 / (zeta_t zeta_r).
std::vector<PdpSample> collapse_pdp(const PowerTensor &tensor, const CorrectionFactors &correction,
                                    const SynthesisOptions &options = {});

// Second central moment of the normalized PDP, ns. Throws on an all-zero PDP.
double rms_delay_spread(std::span<const PdpSample> pdp);

// Correction applied for a labelled configuration (includes zeta_tau).
double label_correction(const CorrectionFactors &correction, PathLossLabel label);

// -10 log10 of the power sum corrected for the labelled configuration.
double path_loss(const PowerTensor &tensor, const CorrectionFactors &correction, PathLossLabel label,
                 const SynthesisOptions &options = {});

// Correction factors matching the tensor's grids and beams.
CorrectionFactors tensor_correction(const PowerTensor &tensor, ZetaMode mode);

// Full extraction. Without a label the total correction is used.
SynthesisResult synthesize(const PowerTensor &tensor, ZetaMode mode, std::optional<PathLossLabel> label = {},
                           const SynthesisOptions &options = {});

} // namespace isosynth

#endif
