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

#include "isosynth/harness.hpp"
#include "isosynth/parallel.hpp"
#include "isosynth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace isosynth
{

namespace
{

std::vector<std::complex<double>> trial_gains(const MultipathRealization &realization, std::uint64_t seed)
{
    const auto trial = randomize_phases(realization, seed);
    std::vector<std::complex<double>> gains;
    gains.reserve(trial.mpcs.size());
    for (const auto &m : trial.mpcs)
        gains.push_back(m.gain);
    return gains;
}

std::vector<double> path_powers(const MultipathRealization &realization)
{
    std::vector<double> p;
    p.reserve(realization.mpcs.size());
    for (const auto &m : realization.mpcs)
        p.push_back(std::norm(m.gain));
    return p;
}

double plain_sum(const std::vector<double> &values)
{
    double s = 0.0;
    for (double v : values)
        s += v;
    return s;
}

} // namespace

ExperimentKind parse_experiment_kind(const std::string &name)
{
    if (name == "az_rx")
        return ExperimentKind::az_rx;
    if (name == "coel_rx")
        return ExperimentKind::coel_rx;
    if (name == "az_txrx")
        return ExperimentKind::az_txrx;
    if (name == "coel_az_txrx")
        return ExperimentKind::coel_az_txrx;
    if (name == "h2h_vs_o2h")
        return ExperimentKind::h2h_vs_o2h;
    throw std::invalid_argument("unknown scan configuration '" + name + "'");
}

std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::az_rx:
        return "az_rx";
    case ExperimentKind::coel_rx:
        return "coel_rx";
    case ExperimentKind::az_txrx:
        return "az_txrx";
    case ExperimentKind::coel_az_txrx:
        return "coel_az_txrx";
    case ExperimentKind::h2h_vs_o2h:
        return "h2h_vs_o2h";
    }
    return "az_rx";
}

double AsiRule::asi_for(double hpbw_deg) const
{
    switch (kind)
    {
    case Kind::equal_to_hpbw:
        return hpbw_deg;
    case Kind::fixed:
        return value;
    case Kind::ratio:
        return value * hpbw_deg;
    }
    return hpbw_deg;
}

AsiRule parse_asi_rule(const std::string &kind, double value)
{
    if (kind == "equal_to_hpbw")
        return {AsiRule::Kind::equal_to_hpbw, 1.0};
    if (kind == "fixed")
        return {AsiRule::Kind::fixed, value};
    if (kind == "ratio")
        return {AsiRule::Kind::ratio, value};
    throw std::invalid_argument("unknown asi rule '" + kind + "'");
}

std::string to_string(AsiRule::Kind kind)
{
    switch (kind)
    {
    case AsiRule::Kind::equal_to_hpbw:
        return "equal_to_hpbw";
    case AsiRule::Kind::fixed:
        return "fixed";
    case AsiRule::Kind::ratio:
        return "ratio";
    }
    return "equal_to_hpbw";
}

EstimateMode parse_estimate_mode(const std::string &name)
{
    if (name == "reference")
        return EstimateMode::reference;
    if (name == "uncorrected")
        return EstimateMode::uncorrected;
    if (name == "ongrid")
        return EstimateMode::ongrid;
    if (name == "avg" || name == "averaged")
        return EstimateMode::averaged;
    throw std::invalid_argument("unknown zeta mode '" + name + "'");
}

std::string to_string(EstimateMode mode)
{
    switch (mode)
    {
    case EstimateMode::reference:
        return "reference";
    case EstimateMode::uncorrected:
        return "uncorrected";
    case EstimateMode::ongrid:
        return "ongrid";
    case EstimateMode::averaged:
        return "avg";
    }
    return "reference";
}

void ExperimentConfig::validate() const
{
    if (scan_configuration == ExperimentKind::h2h_vs_o2h)
        throw std::invalid_argument("experiment: h2h_vs_o2h is run by the path-loss pairing, not the error sweep");
    if (n_realizations < 1 || n_phase_trials < 1)
        throw std::invalid_argument("experiment: realization and trial counts must be at least 1");
    if (hpbw_list.empty())
        throw std::invalid_argument("experiment: hpbw_list is empty");
    if (zeta_modes.empty())
        throw std::invalid_argument("experiment: no zeta modes requested");
    sv.validate();
    for (double h : hpbw_list)
    {
        if (!(h > 0.0))
            throw std::invalid_argument("experiment: beamwidths must be positive");
        experiment_sounder(*this, h).validate();
    }
}

ExperimentConfig ExperimentConfig::full_scale() const
{
    ExperimentConfig c = *this;
    c.n_realizations = 1000;
    c.n_phase_trials = 100;
    return c;
}

SounderConfig experiment_sounder(const ExperimentConfig &config, double hpbw_deg)
{
    SounderConfig s = config.sounder;
    const double asi = config.asi_rule.asi_for(hpbw_deg);
    s.tx_beam = Isotropic{};
    s.rx_beam = Isotropic{};
    s.tx_theta = AxisGrid::fixed(90.0, 180.0);
    s.tx_phi = AxisGrid::fixed(0.0, 360.0);
    s.rx_theta = AxisGrid::fixed(90.0, 180.0);
    s.rx_phi = AxisGrid::fixed(0.0, 360.0);

    switch (config.scan_configuration)
    {
    case ExperimentKind::az_rx:
        s.rx_beam = make_vonmises(180.0, hpbw_deg);
        s.rx_phi = AxisGrid::azimuth(asi);
        break;
    case ExperimentKind::coel_rx:
        s.rx_beam = make_vonmises(hpbw_deg, 360.0);
        s.rx_theta = AxisGrid::coelevation(asi);
        break;
    case ExperimentKind::az_txrx:
        s.tx_beam = make_vonmises(180.0, hpbw_deg);
        s.rx_beam = make_vonmises(180.0, hpbw_deg);
        s.tx_phi = AxisGrid::azimuth(asi);
        s.rx_phi = AxisGrid::azimuth(asi);
        break;
    case ExperimentKind::coel_az_txrx:
        s.tx_beam = make_vonmises(hpbw_deg, hpbw_deg);
        s.rx_beam = make_vonmises(hpbw_deg, hpbw_deg);
        s.tx_theta = AxisGrid::coelevation(asi);
        s.tx_phi = AxisGrid::azimuth(asi);
        s.rx_theta = AxisGrid::coelevation(asi);
        s.rx_phi = AxisGrid::azimuth(asi);
        break;
    case ExperimentKind::h2h_vs_o2h:
        throw std::invalid_argument("experiment: h2h_vs_o2h has no single sounder configuration");
    }
    return s;
}

RatioEstimate ratio_estimate(const std::vector<double> &estimate, const std::vector<double> &truth)
{
    if (estimate.size() != truth.size() || estimate.empty())
        throw std::invalid_argument("ratio_estimate: sample sizes differ or are empty");
    const double sx = plain_sum(estimate);
    const double sy = plain_sum(truth);
    if (!(sx > 0.0) || !(sy > 0.0))
        throw std::invalid_argument("ratio_estimate: sums must be positive");
    const double r = sx / sy;
    RatioEstimate out;
    out.eps_db = 10.0 * std::log10(r);

    const std::size_t n = estimate.size();
    if (n > 1)
    {
        const double ybar = sy / double(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double e = estimate[i] - r * truth[i];
            ss += e * e;
        }
        const double var_r = ss / double(n - 1) / double(n) / (ybar * ybar);
        out.stderr_db = 10.0 / std::numbers::ln10 * std::sqrt(var_r) / r;
    }
    return out;
}

ExperimentResult run_error_sweep(const ExperimentConfig &config)
{
    config.validate();
    const std::size_t n_hpbw = config.hpbw_list.size();
    const std::size_t n_real = std::size_t(config.n_realizations);
    const bool coherent = config.synthesis == SynthesisKind::coherent;
    const int n_trials = coherent ? config.n_phase_trials : 1;

    std::vector<SounderConfig> sounders;
    for (double h : config.hpbw_list)
        sounders.push_back(experiment_sounder(config, h));

    std::vector<double> truth(n_real);
    std::vector<std::vector<double>> raw(n_hpbw, std::vector<double>(n_real));

    parallel_for(n_real, config.workers,
                 [&](std::size_t r)
                 {
                     const auto realization = generate(config.sv, derive_seed(config.seed, r, 0));
                     truth[r] = realization.total_power;

                     std::vector<std::vector<std::complex<double>>> gains;
                     if (coherent)
                         for (int t = 0; t < n_trials; ++t)
                             gains.push_back(trial_gains(realization, derive_seed(config.seed, r, 1 + std::uint64_t(t))));

                     for (std::size_t h = 0; h < n_hpbw; ++h)
                     {
                         const ResponseBasis basis(realization.mpcs, sounders[h]);
                         double acc = 0.0;
                         if (coherent)
                             for (const auto &g : gains)
                                 acc += tensor_sum(basis.coherent(g));
                         else
                             acc = tensor_sum(basis.incoherent(path_powers(realization)));
                         raw[h][r] = acc / n_trials;
                     }
                 });

    ExperimentResult result;
    for (std::size_t h = 0; h < n_hpbw; ++h)
    {
        const double hpbw = config.hpbw_list[h];
        const ScanGrids grids = sounders[h].grids();
        const RatioEstimate uncorrected = ratio_estimate(raw[h], truth);

        for (EstimateMode mode : config.zeta_modes)
        {
            ErrorPoint p;
            p.scan_configuration = config.scan_configuration;
            p.hpbw_deg = hpbw;
            p.asi_deg = config.asi_rule.asi_for(hpbw);
            p.mode = mode;
            p.n_real = config.n_realizations;
            p.n_trials = n_trials;

            std::vector<double> estimate;
            switch (mode)
            {
            case EstimateMode::reference:
            {
                const auto ref = ratio_estimate(truth, truth);
                p.eps_db_mean = ref.eps_db;
                p.eps_db_stderr = ref.stderr_db;
                estimate = truth;
                break;
            }
            case EstimateMode::uncorrected:
                p.eps_db_mean = uncorrected.eps_db;
                p.eps_db_stderr = uncorrected.stderr_db;
                estimate = raw[h];
                break;
            case EstimateMode::ongrid:
            case EstimateMode::averaged:
            {
                const ZetaMode zm = mode == EstimateMode::ongrid ? ZetaMode::on_grid() : ZetaMode::averaged();
                p.zeta = zeta_total(sounders[h].tx_beam, sounders[h].rx_beam, grids, zm).total;
                // A global rescaling moves eps by exactly -10 log10(zeta).
                p.eps_db_mean = uncorrected.eps_db - to_db(p.zeta);
                p.eps_db_stderr = uncorrected.stderr_db;
                estimate = raw[h];
                for (double &v : estimate)
                    v /= p.zeta;
                break;
            }
            }
            result.points.push_back(p);
            if (config.keep_traces)
                result.traces.push_back({hpbw, mode, std::move(estimate), truth});
        }
    }
    return result;
}

void write_error_csv(const ExperimentResult &result, std::ostream &out)
{
    out << "config,hpbw_deg,asi_deg,zeta_mode,eps_db_mean,eps_db_stderr,n_real,n_trials\n";
    out << std::setprecision(12);
    for (const auto &p : result.points)
        out << to_string(p.scan_configuration) << ',' << p.hpbw_deg << ',' << p.asi_deg << ',' << to_string(p.mode)
            << ',' << p.eps_db_mean << ',' << p.eps_db_stderr << ',' << p.n_real << ',' << p.n_trials << '\n';
}

SVParams PlPairingConfig::zero_zenith_spread()
{
    SVParams sv;
    sv.zen_spread_deg = 0.0;
    sv.zen_cluster_spread_deg = 0.0;
    sv.zen_cluster_mean_deg = 90.0;
    return sv;
}

BeamPattern PlPairingConfig::default_beam()
{
    static const BeamPattern horn(make_horn_fixture());
    return horn;
}

void PlPairingConfig::validate() const
{
    if (n_realizations < 1 || n_phase_trials < 1)
        throw std::invalid_argument("plcompare: realization and trial counts must be at least 1");
    sv.validate();
    if (sv.zen_spread_deg != 0.0 || sv.zen_cluster_spread_deg != 0.0 || sv.zen_cluster_mean_deg != 90.0)
        throw std::invalid_argument("plcompare: channels must have zero zenith spread at 90 deg co-elevation so "
                                    "azimuth-only scans capture the full power");
    AxisGrid::azimuth(asi_deg).validate();
}

PlPairingResult run_pl_pairing(const PlPairingConfig &config)
{
    config.validate();

    SounderConfig o2h = config.sounder;
    o2h.tx_beam = Isotropic{};
    o2h.tx_theta = AxisGrid::fixed(90.0, 180.0);
    o2h.tx_phi = AxisGrid::fixed(0.0, 360.0);
    o2h.rx_beam = config.beam;
    o2h.rx_theta = AxisGrid::fixed(90.0, 180.0);
    o2h.rx_phi = AxisGrid::azimuth(config.asi_deg);

    SounderConfig h2h = o2h;
    if (!config.isotropic_tx_both)
    {
        h2h.tx_beam = config.beam;
        h2h.tx_phi = AxisGrid::azimuth(config.asi_deg);
    }
    o2h.validate();
    h2h.validate();

    PlPairingResult result;
    result.o2h_correction = zeta_total(o2h.tx_beam, o2h.rx_beam, o2h.grids(), config.mode);
    result.h2h_correction = zeta_total(h2h.tx_beam, h2h.rx_beam, h2h.grids(), config.mode);
    result.o2h_zeta = label_correction(result.o2h_correction, PathLossLabel::o2h);
    result.h2h_zeta = label_correction(result.h2h_correction, PathLossLabel::h2h);

    const std::size_t n = std::size_t(config.n_realizations);
    result.rows.resize(n);
    parallel_for(n, config.workers,
                 [&](std::size_t r)
                 {
                     const auto realization = generate(config.sv, derive_seed(config.seed, r, 0));
                     const ResponseBasis basis_h2h(realization.mpcs, h2h);
                     const ResponseBasis basis_o2h(realization.mpcs, o2h);
                     double sum_h2h = 0.0, sum_o2h = 0.0;
                     for (int t = 0; t < config.n_phase_trials; ++t)
                     {
                         const auto g = trial_gains(realization, derive_seed(config.seed, r, 1 + std::uint64_t(t)));
                         sum_h2h += tensor_sum(basis_h2h.coherent(g));
                         sum_o2h += tensor_sum(basis_o2h.coherent(g));
                     }
                     PlRow &row = result.rows[r];
                     row.realization = int(r);
                     row.sum_h2h = sum_h2h / config.n_phase_trials;
                     row.sum_o2h = sum_o2h / config.n_phase_trials;
                     row.pl_h2h_db = -to_db(row.sum_h2h / result.h2h_zeta);
                     row.pl_o2h_db = -to_db(row.sum_o2h / result.o2h_zeta);
                     row.diff_db = row.pl_h2h_db - row.pl_o2h_db;
                 });

    double total = 0.0;
    for (const auto &row : result.rows)
    {
        total += row.diff_db;
        result.cdf_diff_db.push_back(row.diff_db);
    }
    result.mean_diff_db = total / double(n);
    std::sort(result.cdf_diff_db.begin(), result.cdf_diff_db.end());
    return result;
}

std::vector<PlRow> without_tx_correction(const PlPairingResult &result)
{
    const double zeta = result.h2h_zeta / result.h2h_correction.zeta_phi_t;
    std::vector<PlRow> rows = result.rows;
    for (auto &row : rows)
    {
        row.pl_h2h_db = -to_db(row.sum_h2h / zeta);
        row.diff_db = row.pl_h2h_db - row.pl_o2h_db;
    }
    return rows;
}

void write_pl_csv(const std::vector<PlRow> &rows, std::ostream &out)
{
    out << "realization,pl_h2h_db,pl_o2h_db,diff_db\n" << std::setprecision(12);
    for (const auto &row : rows)
        out << row.realization << ',' << row.pl_h2h_db << ',' << row.pl_o2h_db << ',' << row.diff_db << '\n';
}

Spectra compute_spectra(const PowerTensor &tensor)
{
    tensor.validate();
    const auto &c = tensor.config;
    const auto &d = tensor.dims;
    Spectra s;
    for (std::size_t i = 0; i < d[1]; ++i)
        s.tx_theta.push_back(c.tx_theta.angle(int(i)));
    for (std::size_t i = 0; i < d[2]; ++i)
        s.tx_phi.push_back(c.tx_phi.angle(int(i)));
    for (std::size_t i = 0; i < d[3]; ++i)
        s.rx_theta.push_back(c.rx_theta.angle(int(i)));
    for (std::size_t i = 0; i < d[4]; ++i)
        s.rx_phi.push_back(c.rx_phi.angle(int(i)));

    const std::size_t n_tx = tensor.n_tx(), n_rx = tensor.n_rx();
    s.delay_power.assign(d[0], 0.0);
    s.tx_power.assign(n_tx, 0.0);
    s.rx_power.assign(n_rx, 0.0);
    for (std::size_t k = 0; k < d[0]; ++k)
    {
        s.delay_ns.push_back(double(k) * c.delta_tau());
        for (std::size_t t = 0; t < n_tx; ++t)
            for (std::size_t r = 0; r < n_rx; ++r)
            {
                const double v = tensor.values[(k * n_tx + t) * n_rx + r];
                s.delay_power[k] += v;
                s.tx_power[t] += v;
                s.rx_power[r] += v;
            }
    }
    return s;
}

Spectra dump_spectra(const MultipathRealization &realization, const SounderConfig &config,
                     const std::filesystem::path &prefix)
{
    const Spectra s = compute_spectra(synthesize_coherent(realization, config));
    auto open = [&](const std::string &suffix)
    {
        std::filesystem::path p = prefix;
        p += suffix;
        std::ofstream out(p);
        if (!out)
            throw std::runtime_error("spectra: cannot write " + p.string());
        out << std::setprecision(12);
        return out;
    };

    auto delay = open("_delay.csv");
    delay << "delay_ns,power\n";
    for (std::size_t k = 0; k < s.delay_ns.size(); ++k)
        delay << s.delay_ns[k] << ',' << s.delay_power[k] << '\n';

    auto write_map = [&](const std::string &suffix, const std::vector<double> &theta, const std::vector<double> &phi,
                         const std::vector<double> &power)
    {
        auto out = open(suffix);
        out << "theta_deg,phi_deg,power\n";
        for (std::size_t i = 0; i < theta.size(); ++i)
            for (std::size_t j = 0; j < phi.size(); ++j)
                out << theta[i] << ',' << phi[j] << ',' << power[i * phi.size() + j] << '\n';
    };
    write_map("_tx_angle.csv", s.tx_theta, s.tx_phi, s.tx_power);
    write_map("_rx_angle.csv", s.rx_theta, s.rx_phi, s.rx_power);
    return s;
}

std::size_t count_above(const std::vector<double> &map, double threshold_db)
{
    if (map.empty())
        return 0;
    const double peak = *std::max_element(map.begin(), map.end());
    const double cutoff = peak * from_db(-threshold_db);
    return std::size_t(std::count_if(map.begin(), map.end(), [&](double v) { return v >= cutoff; }));
}

} // namespace isosynth
