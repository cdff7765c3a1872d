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

#ifndef ISOSYNTH_HARNESS_HPP
#define ISOSYNTH_HARNESS_HPP

#include "isosynth/accumulation.hpp"
#include "isosynth/channelgen.hpp"
#include "isosynth/sounder.hpp"
#include "isosynth/synthesis.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace isosynth
{

enum class ExperimentKind
{
    az_rx,        // isotropic Tx, Rx azimuth scan
    coel_rx,      // isotropic Tx, Rx co-elevation scan
    az_txrx,      // Tx and Rx azimuth scans
    coel_az_txrx, // Tx and Rx co-elevation + azimuth scans
    h2h_vs_o2h    // paired path-loss experiment, see run_pl_pairing
};

ExperimentKind parse_experiment_kind(const std::string &name);
std::string to_string(ExperimentKind kind);

struct AsiRule
{
    enum class Kind
    {
        equal_to_hpbw,
        fixed, // value = ASI in degrees
        ratio  // value = ASI / HPBW
    };
    Kind kind = Kind::equal_to_hpbw;
    double value = 1.0;

    double asi_for(double hpbw_deg) const;
};

AsiRule parse_asi_rule(const std::string &kind, double value);
std::string to_string(AsiRule::Kind kind);

enum class EstimateMode
{
    reference,   // estimate := true power
    uncorrected, // zeta = 1
    ongrid,
    averaged
};

EstimateMode parse_estimate_mode(const std::string &name);
std::string to_string(EstimateMode mode);

enum class SynthesisKind
{
    coherent,
    incoherent // phase-averaged expectation, one evaluation per realization
};

struct ExperimentConfig
{
    ExperimentKind scan_configuration = ExperimentKind::az_rx;
    std::vector<double> hpbw_list = {15.0, 30.0, 60.0};
    AsiRule asi_rule;
    int n_realizations = 100;
    int n_phase_trials = 20;
    SVParams sv;
    // Frequency/delay settings; beams and grids are set per HPBW.
    SounderConfig sounder;
    std::vector<EstimateMode> zeta_modes = {EstimateMode::reference, EstimateMode::uncorrected, EstimateMode::ongrid,
                                            EstimateMode::averaged};
    SynthesisKind synthesis = SynthesisKind::coherent;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool keep_traces = false;

    void validate() const;
    // 1000 realizations x 100 phase trials.
    ExperimentConfig full_scale() const;
};

// Sounder configuration for one scan configuration and beamwidth.
SounderConfig experiment_sounder(const ExperimentConfig &config, double hpbw_deg);

struct ErrorPoint
{
    ExperimentKind scan_configuration = ExperimentKind::az_rx;
    double hpbw_deg = 0.0;
    double asi_deg = 0.0;
    EstimateMode mode = EstimateMode::reference;
    double zeta = 1.0;
    double eps_db_mean = 0.0;
    double eps_db_stderr = 0.0;
    int n_real = 0;
    int n_trials = 0;
};

struct ErrorTrace
{
    double hpbw_deg = 0.0;
    EstimateMode mode = EstimateMode::reference;
    std::vector<double> channel_power_hat;
    std::vector<double> channel_power;
};

struct ExperimentResult
{
    std::vector<ErrorPoint> points;
    std::vector<ErrorTrace> traces; // filled when keep_traces is set
};

// Realization r uses derive_seed(seed, r, 0); its phase trial t uses
// derive_seed(seed, r, 1 + t). The same realizations serve every HPBW.
ExperimentResult run_error_sweep(const ExperimentConfig &config);

// eps = 10 log10(sum estimate / sum truth) and its delta-method standard error.
struct RatioEstimate
{
    double eps_db = 0.0;
    double stderr_db = 0.0;
};
RatioEstimate ratio_estimate(const std::vector<double> &estimate, const std::vector<double> &truth);

void write_error_csv(const ExperimentResult &result, std::ostream &out);

struct PlPairingConfig
{
    int n_realizations = 100;
    int n_phase_trials = 1;
    SVParams sv = zero_zenith_spread();
    double asi_deg = 9.0;
    BeamPattern beam = default_beam(); // horn fixture
    ZetaMode mode = ZetaMode::averaged();
    SounderConfig sounder;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    // Use the isotropic Tx on the H2H leg too (both legs identical).
    bool isotropic_tx_both = false;

    void validate() const;
    static SVParams zero_zenith_spread();
    static BeamPattern default_beam();
};

struct PlRow
{
    int realization = 0;
    double pl_h2h_db = 0.0;
    double pl_o2h_db = 0.0;
    double diff_db = 0.0;
    double sum_h2h = 0.0; // uncorrected power sums
    double sum_o2h = 0.0;
};

struct PlPairingResult
{
    std::vector<PlRow> rows;
    CorrectionFactors h2h_correction;
    CorrectionFactors o2h_correction;
    double h2h_zeta = 1.0; // label corrections actually applied
    double o2h_zeta = 1.0;
    double mean_diff_db = 0.0;
    std::vector<double> cdf_diff_db; // sorted differences; F = (i + 1) / n
};

PlPairingResult run_pl_pairing(const PlPairingConfig &config);

// Same rows with the H2H leg corrected by zeta_phi_r only (zeta_phi_t := 1).
std::vector<PlRow> without_tx_correction(const PlPairingResult &result);

void write_pl_csv(const std::vector<PlRow> &rows, std::ostream &out);

struct Spectra
{
    std::vector<double> delay_ns;
    std::vector<double> delay_power;
    std::vector<double> tx_theta, tx_phi, tx_power; // tx_power[i_theta * n_phi + i_phi]
    std::vector<double> rx_theta, rx_phi, rx_power;
};

// Delay and per-side angle marginals of a tensor.
Spectra compute_spectra(const PowerTensor &tensor);

// Coherent synthesis of one realization, then writes <prefix>_delay.csv,
// <prefix>_tx_angle.csv and <prefix>_rx_angle.csv.
Spectra dump_spectra(const MultipathRealization &realization, const SounderConfig &config,
                     const std::filesystem::path &prefix);

// Number of map cells within threshold_db of the map peak.
std::size_t count_above(const std::vector<double> &map, double threshold_db);

} // namespace isosynth

#endif
