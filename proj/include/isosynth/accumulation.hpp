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

#ifndef ISOSYNTH_ACCUMULATION_HPP
#define ISOSYNTH_ACCUMULATION_HPP

#include "isosynth/beams.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace isosynth
{

// Uniform scan axis: angle(n) = start + n * step, n = 0 .. n_points-1.
struct AxisGrid
{
    int n_points = 1;
    double step = 360.0; // degrees
    double span = 360.0; // 360 for azimuth, 180 for co-elevation
    double start = 0.0;

    double angle(int n) const { return start + n * step; }
    bool scanned() const { return n_points > 1; }
    // span == 360 and n_points * step == 360 exactly
    bool full_circle() const;
    // Throws std::invalid_argument when the invariants do not hold.
    void validate() const;

    // Full-circle azimuth scan; 360/asi must be an integer.
    static AxisGrid azimuth(double asi_deg);
    // Co-elevation scan over [0, 180); 180/asi must be an integer.
    static AxisGrid coelevation(double asi_deg);
    // Unscanned axis pointing at a fixed angle.
    static AxisGrid fixed(double angle_deg, double span_deg);
};

enum class Axis
{
    theta,
    phi
};

// 1-D amplitude cut a(offset_deg).
using AmplitudeCut = std::function<double(double)>;

// Principal cut of a pattern through boresight.
AmplitudeCut pattern_cut(const BeamPattern &pattern, Axis axis);

// Reference column used for the column-sum: grid index 0 on full-circle
// grids, the node nearest mid-span otherwise.
int reference_index(const AxisGrid &grid);

// sum_n |a(theta_n - theta_ref - offset)|^2; for full-circle grids this is
// sum_n |a(n step - offset)|^2.
double zeta_axis_discrete(const AmplitudeCut &cut, const AxisGrid &grid, double offset_deg = 0.0);

// Fourier-Bessel series N e^{-2k} [I_0(2k) + 2 sum_m I_{mN}(2k) cos(m N offset)]
// for a von Mises cut on a uniform full-circle grid with N points.
double zeta_axis_series(double kappa, int n_points, double offset_deg = 0.0);
// Same, rejecting grids that are not uniform full circles.
double zeta_axis_series(double kappa, const AxisGrid &grid, double offset_deg = 0.0);

// Within-bin average over 128 uniformly spaced offsets in [0, step).
double zeta_axis_averaged(const AmplitudeCut &cut, const AxisGrid &grid);
// Closed form N e^{-2k} I_0(2k) (uniform full circle, von Mises).
double zeta_axis_averaged_closed(double kappa, int n_points);

enum class ZetaModeKind
{
    on_grid,
    offset,
    averaged
};

struct ZetaMode
{
    ZetaModeKind kind = ZetaModeKind::on_grid;
    double offset_theta = 0.0; // degrees, only for ZetaModeKind::offset
    double offset_phi = 0.0;

    static ZetaMode on_grid() { return {}; }
    static ZetaMode averaged() { return {ZetaModeKind::averaged, 0.0, 0.0}; }
    static ZetaMode offset(double theta_deg, double phi_deg) { return {ZetaModeKind::offset, theta_deg, phi_deg}; }
    std::string label() const;
};

// Angular 2-D factor. Separable patterns use the product of the 1-D factors,
// other patterns the direct double sum (averaged mode: 16x16 offsets).
double zeta_2d(const BeamPattern &pattern, const AxisGrid &theta_grid, const AxisGrid &phi_grid, ZetaMode mode);
// Always the direct double sum.
double zeta_2d_direct(const BeamPattern &pattern, const AxisGrid &theta_grid, const AxisGrid &phi_grid, ZetaMode mode);

struct CorrectionFactors
{
    double zeta_tau = 1.0;
    double zeta_theta_t = 1.0;
    double zeta_phi_t = 1.0;
    double zeta_theta_r = 1.0;
    double zeta_phi_r = 1.0;
    // Per-side angular factors; differ from the cut products only for
    // non-separable patterns scanned in both axes.
    double zeta_t = 1.0;
    double zeta_r = 1.0;
    ZetaMode mode;
    double total = 1.0; // zeta_tau * zeta_t * zeta_r

    // Uncorrected (naive power sum) factors.
    static CorrectionFactors unity();
};

// Delay and angle grids of one measurement.
struct ScanGrids
{
    AxisGrid tx_theta = AxisGrid::fixed(90.0, 180.0);
    AxisGrid tx_phi = AxisGrid::fixed(0.0, 360.0);
    AxisGrid rx_theta = AxisGrid::fixed(90.0, 180.0);
    AxisGrid rx_phi = AxisGrid::fixed(0.0, 360.0);
    int n_delay = 1;      // N_tau
    int n_freq = 1;       // N
    double delta_f = 1.0; // GHz
};

enum class ScanConfiguration
{
    omni_wideband,
    aoa_narrowband,          // Rx co-elevation + azimuth
    aod_narrowband,          // Tx co-elevation + azimuth
    double_directional,      // both sides, both axes
    aoa_az_narrowband,       // Rx azimuth only
    aod_az_narrowband,       // Tx azimuth only
    double_directional_az,   // Tx and Rx azimuth only
    aoa_coel_narrowband,     // Rx co-elevation only
};

struct ScanDomains
{
    bool tx_theta = false;
    bool tx_phi = false;
    bool rx_theta = false;
    bool rx_phi = false;
};

ScanDomains scan_domains(ScanConfiguration config);
ScanConfiguration parse_scan_configuration(const std::string &name);
std::string to_string(ScanConfiguration config);

// sum_{n < n_delay} |a_u(n / (n_freq delta_f))|^2; 1 when n_delay == n_freq.
double zeta_delay(int n_delay, int n_freq, double delta_f);

// Composes the per-domain factors. Unscanned axes contribute 1 and must have a
// single-point grid. The delay factor is evaluated from the Dirichlet kernel
// whenever n_delay > 1.
CorrectionFactors zeta_total(ScanConfiguration config, const BeamPattern &tx_pattern, const BeamPattern &rx_pattern,
                             const ScanGrids &grids, ZetaMode mode);

// Same, with the scanned axes taken from the grids (n_points > 1).
CorrectionFactors zeta_total(const BeamPattern &tx_pattern, const BeamPattern &rx_pattern, const ScanGrids &grids,
                             ZetaMode mode);

// Column-sum diagnostics for partial-span grids, where the shift-invariance
// behind a single zeta is only approximate.
struct ColumnSumDiagnostic
{
    double reference = 0.0;
    double min = 0.0;
    double max = 0.0;
    double max_relative_deviation = 0.0; // max |col - reference| / reference
    bool pole_warning = false;           // co-elevation node within one step of a pole
};

ColumnSumDiagnostic column_sum_diagnostic(const AmplitudeCut &cut, const AxisGrid &grid);

// One point of an ASI sweep on uniform full-circle grids.
struct SweepPoint
{
    double asi_deg = 0.0;
    double asi_over_hpbw = 0.0;
    double zeta_ongrid = 0.0;
    double zeta_avg = 0.0;
};

// All full-circle grids with asi/hpbw in [ratio_min, ratio_max], sorted by
// increasing ASI.
std::vector<SweepPoint> zeta_sweep(const AmplitudeCut &cut, double hpbw_deg, double ratio_min, double ratio_max,
                                   unsigned workers = 1);

// Row of a correction-factor table: which axes are scanned on each side.
struct TableRow
{
    std::string name;
    ScanDomains domains;
};

struct TableEntry
{
    std::string name;
    double zeta_ongrid = 1.0;
    double zeta_avg = 1.0;
};

// The five scan-domain combinations of the classic horn table.
std::vector<TableRow> default_table_rows();

std::vector<TableEntry> zeta_table(const BeamPattern &tx_pattern, const BeamPattern &rx_pattern, double asi_theta_deg,
                                   double asi_phi_deg, const std::vector<TableRow> &rows);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace isosynth

#endif
