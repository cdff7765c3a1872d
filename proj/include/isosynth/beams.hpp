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

#ifndef ISOSYNTH_BEAMS_HPP
#define ISOSYNTH_BEAMS_HPP

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace isosynth
{

// Requested angle lies outside a tabulated pattern's measured support.
class PatternSupportError : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

// Separable von Mises beam a(dtheta, dphi) = e^{k_t (cos dtheta - 1)} e^{k_p (cos dphi - 1)}.
struct VonMisesBeam
{
    double kappa_theta = 0.0;
    double kappa_phi = 0.0;
    double hpbw_theta = 180.0; // degrees
    double hpbw_phi = 360.0;   // degrees
    double boresight_gain = 1.0;
};

// Measured (or synthetic) peak-normalized amplitude table over angular
// offsets from boresight. Row-major: amplitude[i_theta * phi_grid.size() + i_phi].
// An axis with a single node is treated as constant along that axis.
struct TabulatedPattern
{
    std::vector<double> theta_grid; // degrees, strictly increasing
    std::vector<double> phi_grid;   // degrees, strictly increasing
    std::vector<double> amplitude;  // linear amplitude, max = 1
    bool separable = false;
    double boresight_gain = 1.0;
    std::string description;
    std::string source; // file path, or "horn_fixture"
};

struct Isotropic
{
};

// Immutable pattern handle. Tabulated tables are shared, not copied.
class BeamPattern
{
public:
    BeamPattern() : impl_(Isotropic{}) {}
    BeamPattern(VonMisesBeam beam) : impl_(beam) {}
    BeamPattern(Isotropic iso) : impl_(iso) {}
    BeamPattern(TabulatedPattern table);

    bool is_isotropic() const { return std::holds_alternative<Isotropic>(impl_); }
    bool is_vonmises() const { return std::holds_alternative<VonMisesBeam>(impl_); }
    bool is_tabulated() const { return std::holds_alternative<std::shared_ptr<const TabulatedPattern>>(impl_); }

    const VonMisesBeam &vonmises() const { return std::get<VonMisesBeam>(impl_); }
    const TabulatedPattern &table() const { return *std::get<std::shared_ptr<const TabulatedPattern>>(impl_); }

    // |a|^2 factorizes into theta and phi cuts.
    bool separable() const;
    double boresight_gain() const;

    // Flat along the axis (constant response for any offset).
    bool flat_theta() const;
    bool flat_phi() const;

    std::string kind() const;

private:
    std::variant<Isotropic, VonMisesBeam, std::shared_ptr<const TabulatedPattern>> impl_;
};

// Wraps an azimuth difference into (-180, 180].
double wrap_azimuth(double degrees);

// von Mises concentration from a half-power beamwidth; 0 when the beamwidth
// covers the axis span (360 deg azimuth, 180 deg co-elevation).
double vonmises_kappa(double hpbw_deg, double span_deg);

// G(kappa) = e^kappa / I_0(kappa).
double vonmises_axis_gain(double kappa);

VonMisesBeam make_vonmises(double hpbw_theta_deg, double hpbw_phi_deg);

// Amplitude in [0, 1] at angular offsets (degrees) from boresight. Azimuth is
// wrapped; co-elevation is not. Tabulated patterns are interpolated bilinearly
// in linear power and square-rooted. Throws PatternSupportError outside a
// table's support.
double evaluate(const BeamPattern &pattern, double dtheta_deg, double dphi_deg);

// Squared amplitude, avoiding the square root for tables.
double evaluate_power(const BeamPattern &pattern, double dtheta_deg, double dphi_deg);

// Builds a table from raw rows; renormalizes to unit peak and detects
// separability (max |P - P_theta P_phi| <= 1e-3 in power).
TabulatedPattern make_tabulated(std::vector<double> theta_grid, std::vector<double> phi_grid,
                                std::vector<double> amplitude, double boresight_gain = 1.0,
                                std::string description = {});

// Pattern CSV: header `theta_deg,phi_deg,amplitude_linear`, theta-major rows
// with increasing theta and, within each theta block, increasing phi. An
// optional sidecar `<file>.json` carries {gain_dbi, frequency_ghz, description}.
TabulatedPattern import_pattern(const std::filesystem::path &csv);

// Writes the CSV (and a sidecar when gain or description are set).
void export_pattern(const TabulatedPattern &table, const std::filesystem::path &csv);

// Samples any pattern on a regular offset grid.
TabulatedPattern tabulate(const BeamPattern &pattern, double theta_step_deg, double phi_step_deg,
                          double theta_max_deg = 180.0, double phi_max_deg = 180.0);

// Synthetic horn-like fixture: von Mises main lobe (8 deg co-elevation /
// 9 deg azimuth HPBW) plus two -20 dB sidelobes 20 deg off axis in the
// azimuth (E-plane) cut, tabulated at 0.5 deg over the full offset sphere.
// It stands in for a measured horn pattern and is not separable.
TabulatedPattern make_horn_fixture();

} // namespace isosynth

#endif
