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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace isosynth;

namespace
{

ExperimentConfig small_experiment()
{
    ExperimentConfig c;
    c.hpbw_list = {30.0, 60.0};
    c.n_realizations = 8;
    c.n_phase_trials = 3;
    c.sounder.n_freq = 256;
    c.sounder.bandwidth_ghz = 1.0;
    return c;
}

const ErrorPoint &find(const ExperimentResult &r, double hpbw, EstimateMode mode)
{
    for (const auto &p : r.points)
        if (p.hpbw_deg == hpbw && p.mode == mode)
            return p;
    throw std::runtime_error("point not found");
}

} // namespace

TEST_CASE("ASI rules")
{
    CHECK(AsiRule{}.asi_for(15.0) == 15.0);
    CHECK(parse_asi_rule("fixed", 9.0).asi_for(30.0) == 9.0);
    CHECK(parse_asi_rule("ratio", 0.5).asi_for(30.0) == 15.0);
    CHECK_THROWS_AS(parse_asi_rule("sometimes", 1.0), std::invalid_argument);
}

TEST_CASE("name round trips")
{
    for (auto k : {ExperimentKind::az_rx, ExperimentKind::coel_rx, ExperimentKind::az_txrx,
                   ExperimentKind::coel_az_txrx, ExperimentKind::h2h_vs_o2h})
        CHECK(parse_experiment_kind(to_string(k)) == k);
    for (auto m : {EstimateMode::reference, EstimateMode::uncorrected, EstimateMode::ongrid, EstimateMode::averaged})
        CHECK(parse_estimate_mode(to_string(m)) == m);
    CHECK(to_string(EstimateMode::averaged) == "avg");
    CHECK_THROWS_AS(parse_experiment_kind("diagonal"), std::invalid_argument);
}

TEST_CASE("experiment sounders scan the configured domains")
{
    ExperimentConfig c;
    c.scan_configuration = ExperimentKind::az_rx;
    auto s = experiment_sounder(c, 30.0);
    CHECK(s.rx_phi.n_points == 12);
    CHECK(s.tx_phi.n_points == 1);
    CHECK(s.rx_beam.boresight_gain() > 1.0);
    c.scan_configuration = ExperimentKind::coel_rx;
    s = experiment_sounder(c, 30.0);
    CHECK(s.rx_theta.n_points == 6);
    CHECK(s.rx_phi.n_points == 1);
    c.scan_configuration = ExperimentKind::coel_az_txrx;
    c.asi_rule = parse_asi_rule("ratio", 2.0);
    s = experiment_sounder(c, 30.0);
    CHECK(s.tx_theta.n_points == 3);
    CHECK(s.tx_phi.n_points == 6);
    CHECK(s.rx_theta.n_points == 3);
    CHECK(s.rx_phi.n_points == 6);
}

TEST_CASE("ratio estimate and its standard error")
{
    const auto e = ratio_estimate({2.0, 2.0, 2.0}, {1.0, 1.0, 1.0});
    CHECK(e.eps_db == doctest::Approx(10.0 * std::log10(2.0)));
    CHECK(e.stderr_db == doctest::Approx(0.0));
    const auto f = ratio_estimate({1.0, 3.0, 2.0, 2.5}, {1.0, 2.0, 2.0, 2.0});
    CHECK(f.stderr_db > 0.0);
    CHECK_THROWS(ratio_estimate({1.0}, {1.0, 2.0}));
}

TEST_CASE("error sweep structure")
{
    const auto c = small_experiment();
    const auto r = run_error_sweep(c);
    CHECK(r.points.size() == 8);
    for (double h : c.hpbw_list)
    {
        CHECK(find(r, h, EstimateMode::reference).eps_db_mean == 0.0);
        const auto &unc = find(r, h, EstimateMode::uncorrected);
        const auto &ong = find(r, h, EstimateMode::ongrid);
        const auto &avg = find(r, h, EstimateMode::averaged);
        CHECK(unc.zeta == 1.0);
        CHECK(ong.eps_db_mean == doctest::Approx(unc.eps_db_mean - 10.0 * std::log10(ong.zeta)).epsilon(1e-12));
        CHECK(avg.eps_db_mean == doctest::Approx(unc.eps_db_mean - 10.0 * std::log10(avg.zeta)).epsilon(1e-12));
        CHECK(ong.n_real == 8);
        CHECK(ong.n_trials == 3);
        CHECK(ong.asi_deg == h);
    }
}

TEST_CASE("error sweep is independent of the worker count")
{
    auto c = small_experiment();
    std::ostringstream a, b;
    write_error_csv(run_error_sweep(c), a);
    c.workers = 3;
    write_error_csv(run_error_sweep(c), b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("config,hpbw_deg,asi_deg,zeta_mode,eps_db_mean,eps_db_stderr,n_real,n_trials\n", 0) == 0);
}

TEST_CASE("incoherent sweeps and traces")
{
    auto c = small_experiment();
    c.synthesis = SynthesisKind::incoherent;
    c.keep_traces = true;
    c.hpbw_list = {30.0};
    const auto r = run_error_sweep(c);
    REQUIRE_FALSE(r.traces.empty());
    CHECK(r.traces.front().channel_power.size() == 8);
    CHECK(find(r, 30.0, EstimateMode::reference).eps_db_mean == 0.0);
}

TEST_CASE("invalid experiments are rejected")
{
    auto c = small_experiment();
    c.n_realizations = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_experiment();
    c.hpbw_list.clear();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = small_experiment();
    c.scan_configuration = ExperimentKind::h2h_vs_o2h;
    CHECK_THROWS_AS(run_error_sweep(c), std::invalid_argument);
    CHECK(small_experiment().full_scale().n_realizations == 1000);
    CHECK(small_experiment().full_scale().n_phase_trials == 100);
}

TEST_CASE("paired path-loss experiment")
{
    PlPairingConfig c;
    c.n_realizations = 6;
    c.sounder.n_freq = 256;
    c.sounder.bandwidth_ghz = 1.0;
    const auto r = run_pl_pairing(c);
    REQUIRE(r.rows.size() == 6);
    CHECK(r.cdf_diff_db.size() == 6);
    CHECK(std::is_sorted(r.cdf_diff_db.begin(), r.cdf_diff_db.end()));
    CHECK(r.h2h_zeta == doctest::Approx(r.h2h_correction.zeta_tau * r.h2h_correction.zeta_phi_t *
                                        r.h2h_correction.zeta_phi_r));
    CHECK(r.o2h_zeta == doctest::Approx(r.o2h_correction.zeta_tau * r.o2h_correction.zeta_phi_r));
    double mean = 0.0;
    for (const auto &row : r.rows)
    {
        CHECK(row.diff_db == doctest::Approx(row.pl_h2h_db - row.pl_o2h_db));
        mean += row.diff_db / 6.0;
    }
    CHECK(r.mean_diff_db == doctest::Approx(mean));

    const auto raw = without_tx_correction(r);
    for (std::size_t i = 0; i < raw.size(); ++i)
        CHECK(raw[i].diff_db - r.rows[i].diff_db ==
              doctest::Approx(-10.0 * std::log10(r.h2h_correction.zeta_phi_t)).epsilon(1e-9));

    std::ostringstream out;
    write_pl_csv(r.rows, out);
    CHECK(out.str().rfind("realization,pl_h2h_db,pl_o2h_db,diff_db\n", 0) == 0);
}

TEST_CASE("paired experiment with identical legs has zero difference")
{
    PlPairingConfig c;
    c.n_realizations = 3;
    c.sounder.n_freq = 256;
    c.sounder.bandwidth_ghz = 1.0;
    c.isotropic_tx_both = true;
    for (const auto &row : run_pl_pairing(c).rows)
        CHECK(row.diff_db == 0.0);
}

TEST_CASE("paired experiment requires a flat zenith")
{
    PlPairingConfig c;
    c.sv.zen_spread_deg = 5.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("spectra marginals and files")
{
    const auto r = generate(SVParams{}, 31);
    SounderConfig s;
    s.n_freq = 256;
    s.bandwidth_ghz = 1.0;
    s.rx_beam = make_vonmises(180.0, 30.0);
    s.rx_phi = AxisGrid::azimuth(30.0);
    const auto dir = std::filesystem::temp_directory_path() / "isosynth_test_harness";
    std::filesystem::create_directories(dir);
    const auto sp = dump_spectra(r, s, dir / "run");
    CHECK(sp.delay_ns.size() == 256);
    CHECK(sp.rx_power.size() == 12);
    CHECK(sp.tx_power.size() == 1);
    double d = 0.0, a = 0.0;
    for (double v : sp.delay_power)
        d += v;
    for (double v : sp.rx_power)
        a += v;
    CHECK(d == doctest::Approx(a).epsilon(1e-12));
    for (const char *suffix : {"_delay.csv", "_tx_angle.csv", "_rx_angle.csv"})
        CHECK(std::filesystem::exists(dir / (std::string("run") + suffix)));
    std::ifstream in(dir / "run_rx_angle.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "theta_deg,phi_deg,power");
}

TEST_CASE("counting cells above a threshold")
{
    CHECK(count_above({1.0, 0.5, 0.1, 0.01}, 3.1) == 2);
    CHECK(count_above({1.0, 0.5, 0.1, 0.01}, 30.0) == 4);
    CHECK(count_above({}, 3.0) == 0);
}

TEST_CASE("spectra of a single on-grid path")
{
    MultipathRealization r;
    Mpc m;
    m.tau_ns = 10.0;
    m.phi_r = 45.0;
    m.gain = {1.0, 0.0};
    r.mpcs.push_back(m);
    r.total_power = 1.0;

    auto scan = [&](double hpbw)
    {
        SounderConfig s;
        s.n_freq = 256;
        s.bandwidth_ghz = 1.0;
        s.rx_beam = make_vonmises(180.0, hpbw);
        s.rx_phi = AxisGrid::azimuth(5.0);
        return compute_spectra(synthesize_coherent(r, s));
    };
    const auto narrow = scan(15.0);
    const auto peak = std::max_element(narrow.rx_power.begin(), narrow.rx_power.end()) - narrow.rx_power.begin();
    CHECK(narrow.rx_phi[std::size_t(peak)] == 45.0);
    CHECK(count_above(scan(60.0).rx_power, 20.0) > count_above(narrow.rx_power, 20.0));

    SounderConfig iso;
    iso.n_freq = 256;
    iso.bandwidth_ghz = 1.0;
    iso.rx_phi = AxisGrid::azimuth(30.0);
    const auto flat = compute_spectra(synthesize_coherent(r, iso));
    for (double v : flat.rx_power)
        CHECK(v == doctest::Approx(flat.rx_power.front()).epsilon(1e-14));
}

TEST_CASE("standard errors shrink with the number of realizations")
{
    auto c = small_experiment();
    c.hpbw_list = {30.0};
    c.zeta_modes = {EstimateMode::averaged};
    c.n_phase_trials = 2;
    auto mean_variance = [&](int n)
    {
        c.n_realizations = n;
        double v = 0.0;
        for (std::uint64_t seed = 1; seed <= 12; ++seed)
        {
            c.seed = seed;
            v += std::pow(run_error_sweep(c).points.front().eps_db_stderr, 2) / 12.0;
        }
        return v;
    };
    const double small = std::sqrt(mean_variance(16));
    const double large = std::sqrt(mean_variance(64));
    CHECK(small / large > 1.3);
    CHECK(small / large < 3.0);
}
