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

#include "isosynth/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace isosynth
{

namespace
{

constexpr const char *tensor_format = "isosynth-power-tensor/1";

template <typename T>
void get_if(const json &j, const char *key, T &target)
{
    if (j.contains(key))
        j.at(key).get_to(target);
}

std::filesystem::path resolve(const std::filesystem::path &p, const std::filesystem::path &base_dir)
{
    if (p.is_absolute() || base_dir.empty())
        return std::filesystem::absolute(p);
    return std::filesystem::absolute(base_dir / p);
}

} // namespace

json read_json_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path &path, const json &value)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << value.dump(2) << '\n';
}

json sv_params_to_json(const SVParams &p)
{
    return {{"cluster_decay_ns", p.cluster_decay_ns},
            {"ray_decay_ns", p.ray_decay_ns},
            {"cluster_rate", p.cluster_rate},
            {"ray_rate", p.ray_rate},
            {"cluster_shadow_sigma_db", p.cluster_shadow_sigma_db},
            {"az_spread_deg", p.az_spread_deg},
            {"zen_spread_deg", p.zen_spread_deg},
            {"zen_cluster_mean_deg", p.zen_cluster_mean_deg},
            {"zen_cluster_spread_deg", p.zen_cluster_spread_deg},
            {"max_delay_window_ns", p.max_delay_window_ns},
            {"ray_window_ns", p.ray_window_ns},
            {"anchor_first_arrival", p.anchor_first_arrival},
            {"coupling", to_string(p.coupling)},
            {"seed", p.seed}};
}

SVParams sv_params_from_json(const json &j)
{
    SVParams p;
    get_if(j, "cluster_decay_ns", p.cluster_decay_ns);
    get_if(j, "ray_decay_ns", p.ray_decay_ns);
    get_if(j, "cluster_rate", p.cluster_rate);
    get_if(j, "ray_rate", p.ray_rate);
    get_if(j, "cluster_shadow_sigma_db", p.cluster_shadow_sigma_db);
    get_if(j, "az_spread_deg", p.az_spread_deg);
    get_if(j, "zen_spread_deg", p.zen_spread_deg);
    get_if(j, "zen_cluster_mean_deg", p.zen_cluster_mean_deg);
    get_if(j, "zen_cluster_spread_deg", p.zen_cluster_spread_deg);
    get_if(j, "max_delay_window_ns", p.max_delay_window_ns);
    get_if(j, "ray_window_ns", p.ray_window_ns);
    get_if(j, "anchor_first_arrival", p.anchor_first_arrival);
    if (j.contains("coupling"))
        p.coupling = parse_angle_coupling(j.at("coupling").get<std::string>());
    get_if(j, "seed", p.seed);
    return p;
}

json realization_to_json(const MultipathRealization &r)
{
    json mpcs = json::array();
    for (const auto &m : r.mpcs)
        mpcs.push_back({{"tau_ns", m.tau_ns},
                        {"theta_t", m.theta_t},
                        {"phi_t", m.phi_t},
                        {"theta_r", m.theta_r},
                        {"phi_r", m.phi_r},
                        {"gain_re", m.gain.real()},
                        {"gain_im", m.gain.imag()}});
    return {{"seed", r.seed}, {"params", sv_params_to_json(r.params)}, {"mpcs", mpcs}};
}

MultipathRealization realization_from_json(const json &j)
{
    MultipathRealization r;
    get_if(j, "seed", r.seed);
    if (j.contains("params"))
        r.params = sv_params_from_json(j.at("params"));
    for (const auto &e : j.at("mpcs"))
    {
        Mpc m;
        m.tau_ns = e.at("tau_ns").get<double>();
        m.theta_t = e.at("theta_t").get<double>();
        m.phi_t = e.at("phi_t").get<double>();
        m.theta_r = e.at("theta_r").get<double>();
        m.phi_r = e.at("phi_r").get<double>();
        m.gain = {e.at("gain_re").get<double>(), e.at("gain_im").get<double>()};
        if (!(m.tau_ns >= 0.0) || m.theta_t < 0.0 || m.theta_t > 180.0 || m.theta_r < 0.0 || m.theta_r > 180.0 ||
            m.phi_t < 0.0 || m.phi_t >= 360.0 || m.phi_r < 0.0 || m.phi_r >= 360.0)
            throw std::invalid_argument("mpc json: path parameters outside their domains");
        r.mpcs.push_back(m);
    }
    if (r.mpcs.empty())
        throw std::invalid_argument("mpc json: no paths");
    r.total_power = total_power(r.mpcs);
    return r;
}

json beam_to_json(const BeamPattern &beam)
{
    if (beam.is_isotropic())
        return {{"type", "isotropic"}};
    if (beam.is_vonmises())
        return {{"type", "vonmises"}, {"hpbw_theta", beam.vonmises().hpbw_theta}, {"hpbw_phi", beam.vonmises().hpbw_phi}};
    const auto &t = beam.table();
    if (t.source == "horn_fixture")
        return {{"type", "horn_fixture"}};
    if (!t.source.empty())
        return {{"type", "pattern_file"}, {"path", t.source}};
    return {{"type", "tabulated"}, {"description", t.description}};
}

BeamPattern beam_from_json(const json &j, const std::filesystem::path &base_dir)
{
    const auto type = j.at("type").get<std::string>();
    if (type == "isotropic")
        return Isotropic{};
    if (type == "vonmises")
        return make_vonmises(j.value("hpbw_theta", 180.0), j.value("hpbw_phi", 360.0));
    if (type == "horn_fixture")
        return make_horn_fixture();
    if (type == "pattern_file")
        return import_pattern(resolve(j.at("path").get<std::string>(), base_dir));
    throw std::invalid_argument("beam json: unsupported type '" + type + "'");
}

json axis_to_json(const AxisGrid &g)
{
    return {{"n_points", g.n_points}, {"step", g.step}, {"span", g.span}, {"start", g.start}};
}

AxisGrid axis_from_json(const json &j, double span_deg)
{
    if (j.contains("scan_asi"))
        return span_deg == 360.0 ? AxisGrid::azimuth(j.at("scan_asi").get<double>())
                                 : AxisGrid::coelevation(j.at("scan_asi").get<double>());
    if (j.contains("fixed"))
        return AxisGrid::fixed(j.at("fixed").get<double>(), span_deg);
    AxisGrid g;
    g.span = span_deg;
    get_if(j, "n_points", g.n_points);
    get_if(j, "step", g.step);
    get_if(j, "span", g.span);
    get_if(j, "start", g.start);
    g.validate();
    return g;
}

json sounder_to_json(const SounderConfig &c)
{
    return {{"center_frequency_ghz", c.center_frequency_ghz},
            {"bandwidth_ghz", c.bandwidth_ghz},
            {"n_freq", c.n_freq},
            {"n_delay", c.delay_bins()},
            {"delta_f_ghz", c.delta_f()},
            {"delta_tau_ns", c.delta_tau()},
            {"tx_beam", beam_to_json(c.tx_beam)},
            {"rx_beam", beam_to_json(c.rx_beam)},
            {"tx_theta", axis_to_json(c.tx_theta)},
            {"tx_phi", axis_to_json(c.tx_phi)},
            {"rx_theta", axis_to_json(c.rx_theta)},
            {"rx_phi", axis_to_json(c.rx_phi)},
            {"noise_power", c.noise_power},
            {"noise_seed", c.noise_seed},
            {"max_cells", c.max_cells}};
}

SounderConfig sounder_from_json(const json &j, const std::filesystem::path &base_dir)
{
    SounderConfig c;
    get_if(j, "center_frequency_ghz", c.center_frequency_ghz);
    get_if(j, "bandwidth_ghz", c.bandwidth_ghz);
    get_if(j, "n_freq", c.n_freq);
    get_if(j, "n_delay", c.n_delay);
    if (j.contains("tx_beam"))
        c.tx_beam = beam_from_json(j.at("tx_beam"), base_dir);
    if (j.contains("rx_beam"))
        c.rx_beam = beam_from_json(j.at("rx_beam"), base_dir);
    if (j.contains("tx_theta"))
        c.tx_theta = axis_from_json(j.at("tx_theta"), 180.0);
    if (j.contains("tx_phi"))
        c.tx_phi = axis_from_json(j.at("tx_phi"), 360.0);
    if (j.contains("rx_theta"))
        c.rx_theta = axis_from_json(j.at("rx_theta"), 180.0);
    if (j.contains("rx_phi"))
        c.rx_phi = axis_from_json(j.at("rx_phi"), 360.0);
    get_if(j, "noise_power", c.noise_power);
    get_if(j, "noise_seed", c.noise_seed);
    get_if(j, "max_cells", c.max_cells);
    return c;
}

void save_tensor(const std::filesystem::path &path, const PowerTensor &tensor)
{
    tensor.validate();
    json header = {{"format", tensor_format},
                   {"dims", tensor.dims},
                   {"dim_order", tensor_dim_order},
                   {"config", sounder_to_json(tensor.config)},
                   {"units", "linear_power"},
                   {"byte_order", "little"},
                   {"value_type", "float64"}};
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << header.dump() << '\n';

    std::vector<unsigned char> buffer(tensor.values.size() * 8);
    for (std::size_t i = 0; i < tensor.values.size(); ++i)
    {
        const auto bits = std::bit_cast<std::uint64_t>(tensor.values[i]);
        for (int b = 0; b < 8; ++b)
            buffer[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
    }
    out.write(reinterpret_cast<const char *>(buffer.data()), std::streamsize(buffer.size()));
    if (!out)
        throw std::runtime_error("write failed for " + path.string());
}

PowerTensor load_tensor(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    json header;
    try
    {
        header = json::parse(line);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(path.string() + ": bad tensor header: " + e.what());
    }
    if (header.value("format", std::string{}) != tensor_format)
        throw std::invalid_argument(path.string() + ": not a power tensor file");
    const auto order = header.at("dim_order").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < tensor_dim_order.size(); ++i)
        if (order.size() != tensor_dim_order.size() || order[i] != tensor_dim_order[i])
            throw std::invalid_argument(path.string() + ": unsupported dimension order");

    PowerTensor t;
    t.dims = header.at("dims").get<std::array<std::size_t, 5>>();
    t.config = sounder_from_json(header.at("config"));
    std::size_t n = 1;
    for (std::size_t d : t.dims)
        n *= d;

    std::vector<unsigned char> buffer(n * 8);
    in.read(reinterpret_cast<char *>(buffer.data()), std::streamsize(buffer.size()));
    if (std::size_t(in.gcount()) != buffer.size())
        throw std::invalid_argument(path.string() + ": payload shorter than dims require");
    t.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= std::uint64_t(buffer[i * 8 + b]) << (8 * b);
        t.values[i] = std::bit_cast<double>(bits);
    }
    if (t.config.dims() != t.dims)
        throw std::invalid_argument(path.string() + ": dims do not match the embedded configuration");
    t.validate();
    return t;
}

json correction_to_json(const CorrectionFactors &c)
{
    auto entry = [](double v) { return json{{"linear", v}, {"db", to_db(v)}}; };
    return {{"mode", c.mode.label()},
            {"zeta_tau", entry(c.zeta_tau)},
            {"zeta_theta_t", entry(c.zeta_theta_t)},
            {"zeta_phi_t", entry(c.zeta_phi_t)},
            {"zeta_theta_r", entry(c.zeta_theta_r)},
            {"zeta_phi_r", entry(c.zeta_phi_r)},
            {"zeta_t", entry(c.zeta_t)},
            {"zeta_r", entry(c.zeta_r)},
            {"total", entry(c.total)}};
}

json synthesis_result_to_json(const SynthesisResult &r)
{
    json pdp = json::array();
    for (const auto &s : r.pdp)
        pdp.push_back({s.tau_ns, s.power});
    json out = {{"channel_power_hat", r.channel_power_hat},
                {"path_loss_db", r.path_loss_db},
                {"rms_delay_spread_ns", r.rms_delay_spread_ns},
                {"correction", correction_to_json(r.correction)},
                {"pdp_columns", {"tau_ns", "power"}},
                {"pdp", pdp}};
    if (r.label)
    {
        out["config_label"] = to_string(*r.label);
        out["applied_correction"] = {{"linear", label_correction(r.correction, *r.label)},
                                     {"db", to_db(label_correction(r.correction, *r.label))}};
    }
    return out;
}

ExperimentConfig experiment_from_json(const json &j, const std::filesystem::path &base_dir)
{
    ExperimentConfig c;
    if (j.contains("scan_configuration"))
        c.scan_configuration = parse_experiment_kind(j.at("scan_configuration").get<std::string>());
    get_if(j, "hpbw_list", c.hpbw_list);
    if (j.contains("asi_rule"))
    {
        const auto &a = j.at("asi_rule");
        if (a.is_string())
            c.asi_rule = parse_asi_rule(a.get<std::string>(), 1.0);
        else
            c.asi_rule = parse_asi_rule(a.at("kind").get<std::string>(), a.value("value", 1.0));
    }
    get_if(j, "n_realizations", c.n_realizations);
    get_if(j, "n_phase_trials", c.n_phase_trials);
    if (j.contains("sv"))
        c.sv = sv_params_from_json(j.at("sv"));
    if (j.contains("sounder"))
        c.sounder = sounder_from_json(j.at("sounder"), base_dir);
    if (j.contains("zeta_modes"))
    {
        c.zeta_modes.clear();
        for (const auto &m : j.at("zeta_modes"))
            c.zeta_modes.push_back(parse_estimate_mode(m.get<std::string>()));
    }
    if (j.contains("synthesis"))
    {
        const auto s = j.at("synthesis").get<std::string>();
        if (s == "coherent")
            c.synthesis = SynthesisKind::coherent;
        else if (s == "incoherent")
            c.synthesis = SynthesisKind::incoherent;
        else
            throw std::invalid_argument("experiment json: synthesis must be coherent or incoherent");
    }
    get_if(j, "seed", c.seed);
    get_if(j, "workers", c.workers);
    get_if(j, "keep_traces", c.keep_traces);
    return c;
}

PlPairingConfig pl_config_from_json(const json &j, const std::filesystem::path &base_dir)
{
    PlPairingConfig c;
    get_if(j, "n_realizations", c.n_realizations);
    get_if(j, "n_phase_trials", c.n_phase_trials);
    if (j.contains("sv"))
    {
        // Zenith spread defaults to zero here, unlike the generic SV defaults.
        json sv = sv_params_to_json(PlPairingConfig::zero_zenith_spread());
        sv.update(j.at("sv"));
        c.sv = sv_params_from_json(sv);
    }
    get_if(j, "asi_deg", c.asi_deg);
    if (j.contains("beam"))
        c.beam = beam_from_json(j.at("beam"), base_dir);
    if (j.contains("zeta_mode"))
        c.mode = parse_zeta_mode(j.at("zeta_mode").get<std::string>());
    if (j.contains("sounder"))
        c.sounder = sounder_from_json(j.at("sounder"), base_dir);
    get_if(j, "seed", c.seed);
    get_if(j, "workers", c.workers);
    get_if(j, "isotropic_tx_both", c.isotropic_tx_both);
    return c;
}

ZetaMode parse_zeta_mode(const std::string &text)
{
    if (text == "ongrid" || text == "on_grid")
        return ZetaMode::on_grid();
    if (text == "avg" || text == "averaged")
        return ZetaMode::averaged();
    if (text.rfind("offset=", 0) == 0)
    {
        const std::string rest = text.substr(7);
        try
        {
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
            {
                const double d = std::stod(rest);
                return ZetaMode::offset(d, d);
            }
            return ZetaMode::offset(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
        }
        catch (const std::logic_error &)
        {
            throw std::invalid_argument("bad zeta mode '" + text + "'");
        }
    }
    throw std::invalid_argument("unknown zeta mode '" + text + "' (expected ongrid, avg or offset=D)");
}

} // namespace isosynth
