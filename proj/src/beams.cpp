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

#include "isosynth/beams.hpp"
#include "isosynth/specfun.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace isosynth
{

namespace
{

constexpr double deg = std::numbers::pi / 180.0;
constexpr double separability_threshold = 1e-3;

double vm_axis(double kappa, double offset_deg)
{
    if (kappa == 0.0)
        return 1.0;
    return std::exp(kappa * (std::cos(offset_deg * deg) - 1.0));
}

// Index i with grid[i] <= x <= grid[i+1], and the fractional position.
bool locate(const std::vector<double> &grid, double x, std::size_t &i, double &t)
{
    if (x < grid.front() || x > grid.back())
        return false;
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.end())
        --it; // x == back
    i = std::size_t(it - grid.begin()) - 1;
    t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    return true;
}

double table_power(const TabulatedPattern &tab, double dtheta, double dphi)
{
    const std::size_t n_phi = tab.phi_grid.size();
    auto power_at = [&](std::size_t it, std::size_t ip)
    {
        const double a = tab.amplitude[it * n_phi + ip];
        return a * a;
    };

    std::size_t it = 0, ip = 0;
    double tt = 0.0, tp = 0.0;
    const bool theta_flat = tab.theta_grid.size() == 1;
    const bool phi_flat = n_phi == 1;

    if (!theta_flat && !locate(tab.theta_grid, dtheta, it, tt))
        throw PatternSupportError("pattern: co-elevation offset " + std::to_string(dtheta) +
                                  " deg outside tabulated support");
    if (!phi_flat && !locate(tab.phi_grid, dphi, ip, tp))
        throw PatternSupportError("pattern: azimuth offset " + std::to_string(dphi) +
                                  " deg outside tabulated support");

    if (theta_flat && phi_flat)
        return power_at(0, 0);
    if (theta_flat)
        return (1.0 - tp) * power_at(0, ip) + tp * power_at(0, ip + 1);
    if (phi_flat)
        return (1.0 - tt) * power_at(it, 0) + tt * power_at(it + 1, 0);

    const double p00 = power_at(it, ip);
    const double p01 = power_at(it, ip + 1);
    const double p10 = power_at(it + 1, ip);
    const double p11 = power_at(it + 1, ip + 1);
    return (1.0 - tt) * ((1.0 - tp) * p00 + tp * p01) + tt * ((1.0 - tp) * p10 + tp * p11);
}

void check_grid(const std::vector<double> &grid, const char *name)
{
    if (grid.empty())
        throw std::invalid_argument(std::string("pattern: empty ") + name + " grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(std::string("pattern: ") + name + " grid is not strictly increasing");
}

bool detect_separable(const TabulatedPattern &tab)
{
    const std::size_t n_theta = tab.theta_grid.size();
    const std::size_t n_phi = tab.phi_grid.size();
    const auto peak = std::size_t(std::max_element(tab.amplitude.begin(), tab.amplitude.end()) - tab.amplitude.begin());
    const std::size_t peak_theta = peak / n_phi;
    const std::size_t peak_phi = peak % n_phi;

    double max_dev = 0.0;
    for (std::size_t i = 0; i < n_theta; ++i)
    {
        const double pt = std::pow(tab.amplitude[i * n_phi + peak_phi], 2);
        for (std::size_t j = 0; j < n_phi; ++j)
        {
            const double pp = std::pow(tab.amplitude[peak_theta * n_phi + j], 2);
            const double p = std::pow(tab.amplitude[i * n_phi + j], 2);
            max_dev = std::max(max_dev, std::abs(p - pt * pp));
        }
    }
    return max_dev <= separability_threshold;
}

} // namespace

BeamPattern::BeamPattern(TabulatedPattern table) : impl_(std::make_shared<const TabulatedPattern>(std::move(table)))
{
}

bool BeamPattern::separable() const
{
    if (is_tabulated())
        return table().separable;
    return true;
}

double BeamPattern::boresight_gain() const
{
    if (is_vonmises())
        return vonmises().boresight_gain;
    if (is_tabulated())
        return table().boresight_gain;
    return 1.0;
}

bool BeamPattern::flat_theta() const
{
    if (is_isotropic())
        return true;
    if (is_vonmises())
        return vonmises().kappa_theta == 0.0;
    const auto &tab = table();
    return tab.theta_grid.size() == 1;
}

bool BeamPattern::flat_phi() const
{
    if (is_isotropic())
        return true;
    if (is_vonmises())
        return vonmises().kappa_phi == 0.0;
    return table().phi_grid.size() == 1;
}

std::string BeamPattern::kind() const
{
    if (is_isotropic())
        return "isotropic";
    if (is_vonmises())
        return "vonmises";
    return "tabulated";
}

double wrap_azimuth(double degrees)
{
    double w = std::fmod(degrees, 360.0);
    if (w <= -180.0)
        w += 360.0;
    else if (w > 180.0)
        w -= 360.0;
    return w;
}

double vonmises_kappa(double hpbw_deg, double span_deg)
{
    if (!std::isfinite(hpbw_deg) || hpbw_deg <= 0.0)
        throw std::invalid_argument("make_vonmises: HPBW must be positive");
    if (hpbw_deg >= span_deg)
        return 0.0;
    return std::log(std::sqrt(2.0)) / (1.0 - std::cos(0.5 * hpbw_deg * deg));
}

double vonmises_axis_gain(double kappa)
{
    if (kappa == 0.0)
        return 1.0;
    return 1.0 / bessel_i_scaled(0, kappa);
}

VonMisesBeam make_vonmises(double hpbw_theta_deg, double hpbw_phi_deg)
{
    VonMisesBeam beam;
    beam.hpbw_theta = hpbw_theta_deg;
    beam.hpbw_phi = hpbw_phi_deg;
    beam.kappa_theta = vonmises_kappa(hpbw_theta_deg, 180.0);
    beam.kappa_phi = vonmises_kappa(hpbw_phi_deg, 360.0);
    beam.boresight_gain = vonmises_axis_gain(beam.kappa_theta) * vonmises_axis_gain(beam.kappa_phi);
    return beam;
}

double evaluate_power(const BeamPattern &pattern, double dtheta_deg, double dphi_deg)
{
    if (pattern.is_isotropic())
        return 1.0;
    const double dphi = wrap_azimuth(dphi_deg);
    if (pattern.is_vonmises())
    {
        const auto &vm = pattern.vonmises();
        const double a = vm_axis(vm.kappa_theta, dtheta_deg) * vm_axis(vm.kappa_phi, dphi);
        return a * a;
    }
    return table_power(pattern.table(), dtheta_deg, dphi);
}

double evaluate(const BeamPattern &pattern, double dtheta_deg, double dphi_deg)
{
    if (pattern.is_vonmises())
    {
        const auto &vm = pattern.vonmises();
        return vm_axis(vm.kappa_theta, dtheta_deg) * vm_axis(vm.kappa_phi, wrap_azimuth(dphi_deg));
    }
    return std::sqrt(evaluate_power(pattern, dtheta_deg, dphi_deg));
}

TabulatedPattern make_tabulated(std::vector<double> theta_grid, std::vector<double> phi_grid,
                                std::vector<double> amplitude, double boresight_gain, std::string description)
{
    check_grid(theta_grid, "theta");
    check_grid(phi_grid, "phi");
    if (amplitude.size() != theta_grid.size() * phi_grid.size())
        throw std::invalid_argument("pattern: amplitude table does not match grid dimensions");

    double peak = 0.0;
    for (double a : amplitude)
    {
        if (!std::isfinite(a) || a < 0.0)
            throw std::invalid_argument("pattern: amplitudes must be finite and non-negative");
        peak = std::max(peak, a);
    }
    if (peak <= 0.0)
        throw std::invalid_argument("pattern: all-zero amplitude table");
    for (double &a : amplitude)
        a /= peak;

    TabulatedPattern tab;
    tab.theta_grid = std::move(theta_grid);
    tab.phi_grid = std::move(phi_grid);
    tab.amplitude = std::move(amplitude);
    tab.boresight_gain = boresight_gain;
    tab.description = std::move(description);
    tab.separable = detect_separable(tab);
    return tab;
}

TabulatedPattern import_pattern(const std::filesystem::path &csv)
{
    std::ifstream in(csv);
    if (!in)
        throw std::runtime_error("pattern: cannot open " + csv.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("pattern: empty file " + csv.string());
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "theta_deg,phi_deg,amplitude_linear")
        throw std::invalid_argument("pattern: unexpected header '" + line + "'");

    std::vector<double> theta_grid, phi_grid, amplitude;
    std::vector<double> block_phi;
    std::size_t line_no = 1;
    bool first_block = true;

    auto close_block = [&]
    {
        if (block_phi.empty())
            return;
        if (first_block)
        {
            phi_grid = block_phi;
            first_block = false;
        }
        else if (block_phi != phi_grid)
            throw std::invalid_argument("pattern: co-elevation block " + std::to_string(theta_grid.back()) +
                                        " deg has missing or extra azimuth cells");
        block_phi.clear();
    };

    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        std::istringstream row(line);
        std::string f_theta, f_phi, f_amp;
        if (!std::getline(row, f_theta, ',') || !std::getline(row, f_phi, ',') || !std::getline(row, f_amp))
            throw std::invalid_argument("pattern: malformed row at line " + std::to_string(line_no));
        double theta = 0.0, phi = 0.0, amp = 0.0;
        try
        {
            theta = std::stod(f_theta);
            phi = std::stod(f_phi);
            amp = std::stod(f_amp);
        }
        catch (const std::exception &)
        {
            throw std::invalid_argument("pattern: non-numeric field at line " + std::to_string(line_no));
        }
        if (!std::isfinite(amp) || amp < 0.0)
            throw std::invalid_argument("pattern: negative or non-finite amplitude at line " + std::to_string(line_no));

        if (theta_grid.empty() || theta != theta_grid.back())
        {
            if (!theta_grid.empty() && !(theta > theta_grid.back()))
                throw std::invalid_argument("pattern: co-elevation grid not monotone at line " + std::to_string(line_no));
            close_block();
            theta_grid.push_back(theta);
        }
        if (!block_phi.empty() && !(phi > block_phi.back()))
            throw std::invalid_argument("pattern: azimuth grid not monotone at line " + std::to_string(line_no));
        block_phi.push_back(phi);
        amplitude.push_back(amp);
    }
    close_block();
    if (theta_grid.empty())
        throw std::invalid_argument("pattern: no data rows in " + csv.string());

    double gain = 1.0;
    std::string description;
    auto sidecar = csv;
    sidecar.replace_extension(".json");
    if (std::filesystem::exists(sidecar))
    {
        std::ifstream meta_in(sidecar);
        const auto meta = nlohmann::json::parse(meta_in);
        if (meta.contains("gain_dbi"))
            gain = std::pow(10.0, meta.at("gain_dbi").get<double>() / 10.0);
        description = meta.value("description", std::string{});
    }
    auto table = make_tabulated(std::move(theta_grid), std::move(phi_grid), std::move(amplitude), gain,
                                std::move(description));
    table.source = csv.string();
    return table;
}

void export_pattern(const TabulatedPattern &table, const std::filesystem::path &csv)
{
    std::ofstream out(csv);
    if (!out)
        throw std::runtime_error("pattern: cannot write " + csv.string());
    out << "theta_deg,phi_deg,amplitude_linear\n" << std::setprecision(17);
    const std::size_t n_phi = table.phi_grid.size();
    for (std::size_t i = 0; i < table.theta_grid.size(); ++i)
        for (std::size_t j = 0; j < n_phi; ++j)
            out << table.theta_grid[i] << ',' << table.phi_grid[j] << ',' << table.amplitude[i * n_phi + j] << '\n';

    if (table.boresight_gain != 1.0 || !table.description.empty())
    {
        auto sidecar = csv;
        sidecar.replace_extension(".json");
        nlohmann::json meta = {{"gain_dbi", 10.0 * std::log10(table.boresight_gain)},
                               {"description", table.description}};
        std::ofstream(sidecar) << meta.dump(2) << '\n';
    }
}

TabulatedPattern tabulate(const BeamPattern &pattern, double theta_step_deg, double phi_step_deg,
                          double theta_max_deg, double phi_max_deg)
{
    auto axis = [](double step, double max)
    {
        const int n = int(std::lround(max / step));
        std::vector<double> grid;
        for (int i = -n; i <= n; ++i)
            grid.push_back(i * step);
        return grid;
    };
    auto theta = axis(theta_step_deg, theta_max_deg);
    auto phi = axis(phi_step_deg, phi_max_deg);
    std::vector<double> amp;
    amp.reserve(theta.size() * phi.size());
    for (double t : theta)
        for (double p : phi)
            amp.push_back(evaluate(pattern, t, p));
    return make_tabulated(std::move(theta), std::move(phi), std::move(amp), pattern.boresight_gain(), pattern.kind());
}

TabulatedPattern make_horn_fixture()
{
    const VonMisesBeam main = make_vonmises(8.0, 9.0);
    const double side_kappa_theta = vonmises_kappa(16.0, 180.0);
    constexpr double sidelobe_power = 0.01; // -20 dB
    constexpr double sidelobe_offset = 20.0;

    std::vector<double> theta, phi;
    for (int i = -360; i <= 360; ++i)
        theta.push_back(0.5 * i);
    phi = theta;

    std::vector<double> amp;
    amp.reserve(theta.size() * phi.size());
    for (double t : theta)
    {
        const double main_t = std::pow(vm_axis(main.kappa_theta, t), 2);
        const double side_t = std::pow(vm_axis(side_kappa_theta, t), 2);
        for (double p : phi)
        {
            const double main_p = std::pow(vm_axis(main.kappa_phi, p), 2);
            const double side_p = std::pow(vm_axis(main.kappa_phi, p - sidelobe_offset), 2) +
                                  std::pow(vm_axis(main.kappa_phi, p + sidelobe_offset), 2);
            amp.push_back(std::sqrt(main_t * main_p + sidelobe_power * side_t * side_p));
        }
    }
    // 26 dBi nominal horn gain.
    auto table = make_tabulated(std::move(theta), std::move(phi), std::move(amp), std::pow(10.0, 2.6),
                                "synthetic horn-like fixture: 8/9 deg von Mises main lobe, -20 dB azimuth sidelobes at "
                                "+-20 deg");
    table.source = "horn_fixture";
    return table;
}

} // namespace isosynth
