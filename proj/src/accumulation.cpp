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

#include "isosynth/accumulation.hpp"
#include "isosynth/parallel.hpp"
#include "isosynth/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace isosynth
{

namespace
{

constexpr int offset_samples_1d = 128;
constexpr int offset_samples_2d = 16;
constexpr double series_cutoff = 1e-14;

int integer_count(double span, double asi, const char *what)
{
    if (!std::isfinite(asi) || asi <= 0.0)
        throw std::invalid_argument(std::string(what) + ": ASI must be positive");
    const double ratio = span / asi;
    const long n = std::lround(ratio);
    if (n < 1 || std::abs(ratio - double(n)) > 1e-9 * ratio)
        throw std::invalid_argument(std::string(what) + ": ASI " + std::to_string(asi) + " deg does not divide " +
                                    std::to_string(span) + " deg into an integer number of points");
    return int(n);
}

double wrap_if_azimuth(const AxisGrid &grid, double offset)
{
    return grid.span == 360.0 ? wrap_azimuth(offset) : offset;
}

double squared(double x) { return x * x; }

// Factor for one axis under a mode; unscanned axes see only their own offset.
double axis_factor(const AmplitudeCut &cut, const AxisGrid &grid, ZetaMode mode, double offset)
{
    switch (mode.kind)
    {
    case ZetaModeKind::on_grid:
        return grid.scanned() ? zeta_axis_discrete(cut, grid, 0.0) : 1.0;
    case ZetaModeKind::offset:
        return zeta_axis_discrete(cut, grid, offset);
    case ZetaModeKind::averaged:
        return grid.scanned() ? zeta_axis_averaged(cut, grid) : 1.0;
    }
    return 1.0;
}

} // namespace

bool AxisGrid::full_circle() const
{
    return span == 360.0 && std::abs(n_points * step - 360.0) <= 1e-9 * 360.0;
}

void AxisGrid::validate() const
{
    if (n_points < 1)
        throw std::invalid_argument("AxisGrid: n_points must be >= 1");
    if (!std::isfinite(step) || step <= 0.0)
        throw std::invalid_argument("AxisGrid: step must be positive");
    if (span != 360.0 && span != 180.0)
        throw std::invalid_argument("AxisGrid: span must be 360 (azimuth) or 180 (co-elevation)");
    if (n_points * step > span + 0.5 * step)
        throw std::invalid_argument("AxisGrid: n_points * step exceeds the axis span");
}

AxisGrid AxisGrid::azimuth(double asi_deg)
{
    const int n = integer_count(360.0, asi_deg, "azimuth grid");
    return {n, 360.0 / n, 360.0, 0.0};
}

AxisGrid AxisGrid::coelevation(double asi_deg)
{
    const int n = integer_count(180.0, asi_deg, "co-elevation grid");
    return {n, 180.0 / n, 180.0, 0.0};
}

AxisGrid AxisGrid::fixed(double angle_deg, double span_deg)
{
    return {1, span_deg, span_deg, angle_deg};
}

AmplitudeCut pattern_cut(const BeamPattern &pattern, Axis axis)
{
    if (axis == Axis::theta)
        return [pattern](double offset) { return evaluate(pattern, offset, 0.0); };
    return [pattern](double offset) { return evaluate(pattern, 0.0, offset); };
}

int reference_index(const AxisGrid &grid)
{
    if (grid.n_points == 1 || grid.full_circle())
        return 0;
    const double middle = grid.start + 0.5 * grid.span;
    const long idx = std::lround((middle - grid.start) / grid.step);
    return int(std::clamp<long>(idx, 0, grid.n_points - 1));
}

double zeta_axis_discrete(const AmplitudeCut &cut, const AxisGrid &grid, double offset_deg)
{
    grid.validate();
    const double ref = grid.angle(reference_index(grid));
    double sum = 0.0;
    for (int n = 0; n < grid.n_points; ++n)
        sum += squared(cut(wrap_if_azimuth(grid, grid.angle(n) - ref - offset_deg)));
    return sum;
}

double zeta_axis_series(double kappa, int n_points, double offset_deg)
{
    if (n_points < 1)
        throw std::invalid_argument("zeta_axis_series: n_points must be >= 1");
    if (!std::isfinite(kappa) || kappa < 0.0)
        throw std::invalid_argument("zeta_axis_series: kappa must be non-negative");
    if (kappa == 0.0)
        return double(n_points);

    const double x = 2.0 * kappa;
    const double delta = offset_deg * std::numbers::pi / 180.0;
    double sum = bessel_i_scaled(0, x);
    for (int m = 1; m < 100000; ++m)
    {
        const double term = 2.0 * bessel_i_scaled(m * n_points, x);
        sum += term * std::cos(double(m) * n_points * delta);
        if (term < series_cutoff * std::abs(sum))
            break;
    }
    return n_points * sum;
}

double zeta_axis_series(double kappa, const AxisGrid &grid, double offset_deg)
{
    grid.validate();
    if (!grid.full_circle())
        throw std::invalid_argument("zeta_axis_series: the Fourier-Bessel identity requires a uniform full-circle grid");
    return zeta_axis_series(kappa, grid.n_points, offset_deg);
}

double zeta_axis_averaged(const AmplitudeCut &cut, const AxisGrid &grid)
{
    // Periodic trapezoidal rule over one bin.
    double sum = 0.0;
    for (int j = 0; j < offset_samples_1d; ++j)
        sum += zeta_axis_discrete(cut, grid, grid.step * j / offset_samples_1d);
    return sum / offset_samples_1d;
}

double zeta_axis_averaged_closed(double kappa, int n_points)
{
    if (kappa == 0.0)
        return double(n_points);
    return n_points * bessel_i_scaled(0, 2.0 * kappa);
}

std::string ZetaMode::label() const
{
    switch (kind)
    {
    case ZetaModeKind::on_grid:
        return "ongrid";
    case ZetaModeKind::averaged:
        return "avg";
    case ZetaModeKind::offset:
        return "offset";
    }
    return "?";
}

double zeta_2d_direct(const BeamPattern &pattern, const AxisGrid &theta_grid, const AxisGrid &phi_grid, ZetaMode mode)
{
    theta_grid.validate();
    phi_grid.validate();
    const double theta_ref = theta_grid.angle(reference_index(theta_grid));
    const double phi_ref = phi_grid.angle(reference_index(phi_grid));

    auto column_sum = [&](double d_theta, double d_phi)
    {
        double s = 0.0;
        for (int i = 0; i < theta_grid.n_points; ++i)
        {
            const double dt = wrap_if_azimuth(theta_grid, theta_grid.angle(i) - theta_ref - d_theta);
            for (int j = 0; j < phi_grid.n_points; ++j)
                s += evaluate_power(pattern, dt, phi_grid.angle(j) - phi_ref - d_phi);
        }
        return s;
    };

    switch (mode.kind)
    {
    case ZetaModeKind::on_grid:
        return column_sum(0.0, 0.0);
    case ZetaModeKind::offset:
        return column_sum(mode.offset_theta, mode.offset_phi);
    case ZetaModeKind::averaged:
        break;
    }

    const int nt = theta_grid.scanned() ? offset_samples_2d : 1;
    const int np = phi_grid.scanned() ? offset_samples_2d : 1;
    double sum = 0.0;
    for (int a = 0; a < nt; ++a)
        for (int b = 0; b < np; ++b)
            sum += column_sum(theta_grid.step * a / nt, phi_grid.step * b / np);
    return sum / (nt * np);
}

double zeta_2d(const BeamPattern &pattern, const AxisGrid &theta_grid, const AxisGrid &phi_grid, ZetaMode mode)
{
    if (!pattern.separable())
        return zeta_2d_direct(pattern, theta_grid, phi_grid, mode);
    return axis_factor(pattern_cut(pattern, Axis::theta), theta_grid, mode, mode.offset_theta) *
           axis_factor(pattern_cut(pattern, Axis::phi), phi_grid, mode, mode.offset_phi);
}

CorrectionFactors CorrectionFactors::unity()
{
    return {};
}

ScanDomains scan_domains(ScanConfiguration config)
{
    switch (config)
    {
    case ScanConfiguration::omni_wideband:
        return {};
    case ScanConfiguration::aoa_narrowband:
        return {false, false, true, true};
    case ScanConfiguration::aod_narrowband:
        return {true, true, false, false};
    case ScanConfiguration::double_directional:
        return {true, true, true, true};
    case ScanConfiguration::aoa_az_narrowband:
        return {false, false, false, true};
    case ScanConfiguration::aod_az_narrowband:
        return {false, true, false, false};
    case ScanConfiguration::double_directional_az:
        return {false, true, false, true};
    case ScanConfiguration::aoa_coel_narrowband:
        return {false, false, true, false};
    }
    return {};
}

namespace
{
struct ConfigName
{
    ScanConfiguration config;
    const char *name;
};
constexpr ConfigName config_names[] = {
    {ScanConfiguration::omni_wideband, "omni-wideband"},
    {ScanConfiguration::aoa_narrowband, "aoa-narrowband"},
    {ScanConfiguration::aod_narrowband, "aod-narrowband"},
    {ScanConfiguration::double_directional, "double-directional"},
    {ScanConfiguration::aoa_az_narrowband, "aoa-az"},
    {ScanConfiguration::aod_az_narrowband, "aod-az"},
    {ScanConfiguration::double_directional_az, "double-directional-az"},
    {ScanConfiguration::aoa_coel_narrowband, "aoa-coel"},
};
} // namespace

ScanConfiguration parse_scan_configuration(const std::string &name)
{
    for (const auto &entry : config_names)
        if (name == entry.name)
            return entry.config;
    throw std::invalid_argument("unknown scan configuration '" + name + "'");
}

std::string to_string(ScanConfiguration config)
{
    for (const auto &entry : config_names)
        if (config == entry.config)
            return entry.name;
    return "?";
}

double zeta_delay(int n_delay, int n_freq, double delta_f)
{
    if (n_delay < 1 || n_freq < 1)
        throw std::invalid_argument("zeta_delay: bin counts must be >= 1");
    const double delta_tau = 1.0 / (n_freq * delta_f);
    double sum = 0.0;
    for (int n = 0; n < n_delay; ++n)
        sum += std::norm(dirichlet_autocorr(n * delta_tau, n_freq, delta_f));
    return sum;
}

CorrectionFactors zeta_total(ScanConfiguration config, const BeamPattern &tx_pattern, const BeamPattern &rx_pattern,
                             const ScanGrids &grids, ZetaMode mode)
{
    const ScanDomains domains = scan_domains(config);
    auto check = [&](const AxisGrid &grid, bool scanned, const char *name)
    {
        grid.validate();
        if (scanned && !grid.scanned())
            throw std::invalid_argument(std::string("zeta_total: ") + to_string(config) + " scans " + name +
                                        " but its grid has a single point");
        if (!scanned && grid.scanned())
            throw std::invalid_argument(std::string("zeta_total: ") + to_string(config) + " does not scan " + name +
                                        " but its grid has " + std::to_string(grid.n_points) + " points");
    };
    check(grids.tx_theta, domains.tx_theta, "Tx co-elevation");
    check(grids.tx_phi, domains.tx_phi, "Tx azimuth");
    check(grids.rx_theta, domains.rx_theta, "Rx co-elevation");
    check(grids.rx_phi, domains.rx_phi, "Rx azimuth");
    return zeta_total(tx_pattern, rx_pattern, grids, mode);
}

CorrectionFactors zeta_total(const BeamPattern &tx_pattern, const BeamPattern &rx_pattern, const ScanGrids &grids,
                             ZetaMode mode)
{
    CorrectionFactors out;
    out.mode = mode;
    out.zeta_tau = grids.n_delay > 1 ? zeta_delay(grids.n_delay, grids.n_freq, grids.delta_f) : 1.0;

    auto side = [&](const BeamPattern &pattern, const AxisGrid &theta, const AxisGrid &phi, double &z_theta,
                    double &z_phi)
    {
        theta.validate();
        phi.validate();
        z_theta = theta.scanned() ? axis_factor(pattern_cut(pattern, Axis::theta), theta, mode, mode.offset_theta) : 1.0;
        z_phi = phi.scanned() ? axis_factor(pattern_cut(pattern, Axis::phi), phi, mode, mode.offset_phi) : 1.0;
        if (theta.scanned() && phi.scanned() && !pattern.separable())
            return zeta_2d_direct(pattern, theta, phi, mode);
        return z_theta * z_phi;
    };

    out.zeta_t = side(tx_pattern, grids.tx_theta, grids.tx_phi, out.zeta_theta_t, out.zeta_phi_t);
    out.zeta_r = side(rx_pattern, grids.rx_theta, grids.rx_phi, out.zeta_theta_r, out.zeta_phi_r);
    out.total = out.zeta_tau * out.zeta_t * out.zeta_r;
    return out;
}

ColumnSumDiagnostic column_sum_diagnostic(const AmplitudeCut &cut, const AxisGrid &grid)
{
    grid.validate();
    ColumnSumDiagnostic diag;
    std::vector<double> columns(grid.n_points, 0.0);
    for (int m = 0; m < grid.n_points; ++m)
        for (int n = 0; n < grid.n_points; ++n)
            columns[m] += squared(cut(wrap_if_azimuth(grid, grid.angle(n) - grid.angle(m))));

    diag.reference = columns[reference_index(grid)];
    diag.min = *std::min_element(columns.begin(), columns.end());
    diag.max = *std::max_element(columns.begin(), columns.end());
    for (double c : columns)
        diag.max_relative_deviation = std::max(diag.max_relative_deviation, std::abs(c - diag.reference) / diag.reference);

    if (grid.span == 180.0)
        for (int n = 0; n < grid.n_points; ++n)
        {
            const double a = grid.angle(n);
            if (a < grid.step || a > 180.0 - grid.step)
                diag.pole_warning = true;
        }
    return diag;
}

std::vector<SweepPoint> zeta_sweep(const AmplitudeCut &cut, double hpbw_deg, double ratio_min, double ratio_max,
                                   unsigned workers)
{
    if (!(hpbw_deg > 0.0) || !(ratio_min > 0.0) || !(ratio_max >= ratio_min))
        throw std::invalid_argument("zeta_sweep: need hpbw > 0 and 0 < ratio_min <= ratio_max");

    const int n_lo = std::max(1, int(std::ceil(360.0 / (ratio_max * hpbw_deg) - 1e-9)));
    const int n_hi = int(std::floor(360.0 / (ratio_min * hpbw_deg) + 1e-9));
    std::vector<SweepPoint> points;
    for (int n = n_hi; n >= n_lo; --n)
    {
        SweepPoint p;
        p.asi_deg = 360.0 / n;
        p.asi_over_hpbw = p.asi_deg / hpbw_deg;
        points.push_back(p);
    }

    parallel_for(points.size(), workers,
                 [&](std::size_t i)
                 {
                     const AxisGrid grid = AxisGrid::azimuth(points[i].asi_deg);
                     points[i].zeta_ongrid = zeta_axis_discrete(cut, grid, 0.0);
                     points[i].zeta_avg = zeta_axis_averaged(cut, grid);
                 });
    return points;
}

std::vector<TableRow> default_table_rows()
{
    return {
        {"Az-omni|Az", {false, false, false, true}},
        {"El-omni|Co-El", {false, false, true, false}},
        {"Isotropic|Az,Co-El", {false, false, true, true}},
        {"Az|Az", {false, true, false, true}},
        {"Az,El|Az,Co-El", {true, true, true, true}},
    };
}

std::vector<TableEntry> zeta_table(const BeamPattern &tx_pattern, const BeamPattern &rx_pattern, double asi_theta_deg,
                                   double asi_phi_deg, const std::vector<TableRow> &rows)
{
    std::vector<TableEntry> out;
    for (const auto &row : rows)
    {
        ScanGrids grids;
        if (row.domains.tx_theta)
            grids.tx_theta = AxisGrid::coelevation(asi_theta_deg);
        if (row.domains.tx_phi)
            grids.tx_phi = AxisGrid::azimuth(asi_phi_deg);
        if (row.domains.rx_theta)
            grids.rx_theta = AxisGrid::coelevation(asi_theta_deg);
        if (row.domains.rx_phi)
            grids.rx_phi = AxisGrid::azimuth(asi_phi_deg);

        TableEntry entry;
        entry.name = row.name;
        entry.zeta_ongrid = zeta_total(tx_pattern, rx_pattern, grids, ZetaMode::on_grid()).total;
        entry.zeta_avg = zeta_total(tx_pattern, rx_pattern, grids, ZetaMode::averaged()).total;
        out.push_back(entry);
    }
    return out;
}

} // namespace isosynth
