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

#ifndef ISOSYNTH_IO_HPP
#define ISOSYNTH_IO_HPP

#include "isosynth/accumulation.hpp"
#include "isosynth/beams.hpp"
#include "isosynth/channelgen.hpp"
#include "isosynth/harness.hpp"
#include "isosynth/sounder.hpp"
#include "isosynth/synthesis.hpp"

#include <json.hpp>

#include <filesystem>

namespace isosynth
{

using json = nlohmann::json;

json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const json &value);

json sv_params_to_json(const SVParams &params);
// Missing keys keep their defaults.
SVParams sv_params_from_json(const json &j);

// {seed, params, mpcs:[{tau_ns, theta_t, phi_t, theta_r, phi_r, gain_re, gain_im}]}
json realization_to_json(const MultipathRealization &realization);
MultipathRealization realization_from_json(const json &j);

// {"type": "vonmises", "hpbw_theta", "hpbw_phi"} | {"type": "isotropic"} |
// {"type": "pattern_file", "path"} | {"type": "horn_fixture"}.
// Relative pattern paths are resolved against base_dir.
json beam_to_json(const BeamPattern &beam);
BeamPattern beam_from_json(const json &j, const std::filesystem::path &base_dir = {});

// Full form {n_points, step, span, start}, or the shortcuts {"scan_asi": D}
// and {"fixed": D} for an axis of the given span.
json axis_to_json(const AxisGrid &grid);
AxisGrid axis_from_json(const json &j, double span_deg);

json sounder_to_json(const SounderConfig &config);
SounderConfig sounder_from_json(const json &j, const std::filesystem::path &base_dir = {});

// Header line {format, dims, dim_order, config, units}, '\n', then the cells as
// little-endian float64 in row-major order.
void save_tensor(const std::filesystem::path &path, const PowerTensor &tensor);
PowerTensor load_tensor(const std::filesystem::path &path);

json correction_to_json(const CorrectionFactors &correction);
json synthesis_result_to_json(const SynthesisResult &result);

ExperimentConfig experiment_from_json(const json &j, const std::filesystem::path &base_dir = {});
PlPairingConfig pl_config_from_json(const json &j, const std::filesystem::path &base_dir = {});

ZetaMode parse_zeta_mode(const std::string &text); // "ongrid", "avg", "offset=D" or "offset=Dt,Dp"

} // namespace isosynth

#endif
