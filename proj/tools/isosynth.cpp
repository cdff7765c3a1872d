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
#include "isosynth/beams.hpp"
#include "isosynth/channelgen.hpp"
#include "isosynth/harness.hpp"
#include "isosynth/io.hpp"
#include "isosynth/sounder.hpp"
#include "isosynth/synthesis.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

using namespace isosynth;

namespace
{

constexpr int exit_guard = 3;
constexpr int exit_error = 1;

struct BeamOptions
{
    std::string beam = "vonmises";
    std::string pattern;
    double hpbw_theta = 180.0;
    double hpbw_phi = 360.0;

    void add(CLI::App *app)
    {
        app->add_option("--beam", beam, "vonmises, isotropic, pattern-file or horn-fixture")
            ->check(CLI::IsMember({"vonmises", "isotropic", "pattern-file", "horn-fixture"}));
        app->add_option("--pattern", pattern, "pattern CSV for --beam pattern-file");
        app->add_option("--hpbw-theta", hpbw_theta, "co-elevation HPBW, degrees");
        app->add_option("--hpbw-phi", hpbw_phi, "azimuth HPBW, degrees");
    }

    BeamPattern make() const
    {
        if (beam == "isotropic")
            return Isotropic{};
        if (beam == "horn-fixture")
            return make_horn_fixture();
        if (beam == "pattern-file")
        {
            if (pattern.empty())
                throw std::invalid_argument("--beam pattern-file needs --pattern");
            return import_pattern(pattern);
        }
        return make_vonmises(hpbw_theta, hpbw_phi);
    }
};

std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

void write_text(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-")
        std::cout << text;
    else
        open_out(path) << text;
}

std::filesystem::path parent_of(const std::string &file)
{
    return std::filesystem::absolute(file).parent_path();
}

std::optional<std::uint64_t> seed_override()
{
    const char *env = std::getenv("ISOSYNTH_SEED");
    if (!env || !*env)
        return std::nullopt;
    return std::stoull(env);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"isosynth: omni-equivalent channel synthesis from angle-resolved measurements"};
    app.require_subcommand(1);

    // zeta
    auto *zeta = app.add_subcommand("zeta", "beam-accumulation factors");
    zeta->require_subcommand(1);

    BeamOptions compute_beam;
    double compute_asi = 9.0, compute_span = 360.0;
    std::string compute_mode = "ongrid";
    auto *compute = zeta->add_subcommand("compute", "1-D factor on one scan axis");
    compute_beam.add(compute);
    compute->add_option("--asi", compute_asi, "scan step, degrees");
    compute->add_option("--span", compute_span, "360 (azimuth) or 180 (co-elevation)")->check(CLI::IsMember({180.0, 360.0}));
    compute->add_option("--mode", compute_mode, "ongrid, avg or offset=D");

    BeamOptions sweep_beam;
    double sweep_hpbw = 9.0, sweep_min = 0.2, sweep_max = 3.0;
    std::string sweep_axis = "phi", sweep_out;
    auto *sweep = zeta->add_subcommand("sweep", "factor versus ASI/HPBW on full-circle grids");
    sweep_beam.add(sweep);
    sweep->add_option("--hpbw", sweep_hpbw, "beamwidth used for the vonmises cut and the ratio axis");
    sweep->add_option("--ratio-min", sweep_min);
    sweep->add_option("--ratio-max", sweep_max);
    sweep->add_option("--axis", sweep_axis, "pattern cut: phi or theta")->check(CLI::IsMember({"phi", "theta"}));
    sweep->add_option("--out", sweep_out, "CSV output (default stdout)");

    std::string table_config, table_out;
    auto *table = zeta->add_subcommand("table", "factor table over named scan configurations");
    table->add_option("--config", table_config, "table JSON")->required();
    table->add_option("--out", table_out, "CSV output (default stdout)");

    // channel
    auto *channel = app.add_subcommand("channel", "multipath channel generation");
    channel->require_subcommand(1);
    std::string gen_params, gen_out;
    std::optional<std::uint64_t> gen_seed;
    auto *gen = channel->add_subcommand("generate", "draw one clustered realization");
    gen->add_option("--params", gen_params, "SV parameter JSON");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out, "MPC JSON output")->required();

    // sound
    std::string sound_mpcs, sound_config, sound_mode = "coherent", sound_out;
    int sound_trials = 1;
    std::uint64_t sound_seed = 1;
    unsigned sound_workers = 1;
    auto *sound = app.add_subcommand("sound", "synthesize the angle-resolved power tensor");
    sound->add_option("--mpcs", sound_mpcs)->required();
    sound->add_option("--config", sound_config, "sounder JSON")->required();
    sound->add_option("--mode", sound_mode)->check(CLI::IsMember({"coherent", "incoherent"}));
    sound->add_option("--trials", sound_trials, "random-phase trials averaged in coherent mode");
    sound->add_option("--seed", sound_seed);
    sound->add_option("--workers", sound_workers);
    sound->add_option("--out", sound_out)->required();

    // synthesize
    std::string syn_power, syn_mode = "avg", syn_label, syn_out;
    std::optional<double> syn_threshold;
    auto *syn = app.add_subcommand("synthesize", "omni-equivalent parameters from a power tensor");
    syn->add_option("--power", syn_power)->required();
    syn->add_option("--zeta-mode", syn_mode, "ongrid, avg or offset=D");
    syn->add_option("--config-label", syn_label)->check(CLI::IsMember({"h2h", "o2h", "dd", "omni"}));
    syn->add_option("--noise-threshold-db", syn_threshold, "drop cells this far below the peak");
    syn->add_option("--out", syn_out, "result JSON (default stdout)");

    // montecarlo
    std::string mc_config, mc_out;
    bool mc_full = false;
    std::optional<unsigned> mc_workers;
    auto *mc = app.add_subcommand("montecarlo", "estimation error versus HPBW");
    mc->add_option("--config", mc_config)->required();
    mc->add_option("--out", mc_out)->required();
    mc->add_flag("--full-scale", mc_full, "1000 realizations x 100 phase trials");
    mc->add_option("--workers", mc_workers);

    // plcompare
    std::string pl_config, pl_out;
    std::optional<unsigned> pl_workers;
    auto *pl = app.add_subcommand("plcompare", "paired horn-to-horn / omni-to-horn path loss");
    pl->add_option("--config", pl_config)->required();
    pl->add_option("--out", pl_out)->required();
    pl->add_option("--workers", pl_workers);

    // spectra
    std::string sp_mpcs, sp_config, sp_prefix;
    auto *sp = app.add_subcommand("spectra", "delay and angle power marginals of one realization");
    sp->add_option("--mpcs", sp_mpcs)->required();
    sp->add_option("--config", sp_config, "sounder JSON")->required();
    sp->add_option("--out-prefix", sp_prefix)->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (compute->parsed())
        {
            const BeamPattern beam = compute_beam.make();
            const Axis axis = compute_span == 360.0 ? Axis::phi : Axis::theta;
            const AxisGrid grid = axis == Axis::phi ? AxisGrid::azimuth(compute_asi) : AxisGrid::coelevation(compute_asi);
            const auto cut = pattern_cut(beam, axis);
            const ZetaMode mode = parse_zeta_mode(compute_mode);
            double z = 0.0;
            if (mode.kind == ZetaModeKind::averaged)
                z = zeta_axis_averaged(cut, grid);
            else
                z = zeta_axis_discrete(cut, grid, mode.kind == ZetaModeKind::offset
                                                      ? (axis == Axis::phi ? mode.offset_phi : mode.offset_theta)
                                                      : 0.0);
            const json out = {{"zeta_linear", z}, {"zeta_db", to_db(z)}, {"mode", mode.label()}, {"n_points", grid.n_points}};
            std::cout << out.dump(2) << '\n';
        }
        else if (sweep->parsed())
        {
            if (sweep_beam.beam == "vonmises")
            {
                sweep_beam.hpbw_theta = sweep_axis == "theta" ? sweep_hpbw : 180.0;
                sweep_beam.hpbw_phi = sweep_axis == "phi" ? sweep_hpbw : 360.0;
            }
            const auto cut = pattern_cut(sweep_beam.make(), sweep_axis == "phi" ? Axis::phi : Axis::theta);
            std::ostringstream csv;
            csv << "asi_over_hpbw,zeta_ongrid,zeta_avg\n" << std::setprecision(12);
            for (const auto &p : zeta_sweep(cut, sweep_hpbw, sweep_min, sweep_max))
                csv << p.asi_over_hpbw << ',' << p.zeta_ongrid << ',' << p.zeta_avg << '\n';
            write_text(sweep_out, csv.str());
        }
        else if (table->parsed())
        {
            const json j = read_json_file(table_config);
            const auto base = parent_of(table_config);
            const BeamPattern tx = j.contains("tx_beam") ? beam_from_json(j.at("tx_beam"), base) : BeamPattern(make_horn_fixture());
            const BeamPattern rx = j.contains("rx_beam") ? beam_from_json(j.at("rx_beam"), base) : tx;
            std::vector<TableRow> rows = default_table_rows();
            if (j.contains("rows"))
            {
                rows.clear();
                for (const auto &r : j.at("rows"))
                {
                    TableRow row;
                    row.name = r.at("name").get<std::string>();
                    auto axes = [](const json &list, bool &theta, bool &phi)
                    {
                        for (const auto &a : list)
                        {
                            const auto s = a.get<std::string>();
                            if (s == "az")
                                phi = true;
                            else if (s == "coel")
                                theta = true;
                            else
                                throw std::invalid_argument("table rows: axis must be az or coel");
                        }
                    };
                    axes(r.value("tx", json::array()), row.domains.tx_theta, row.domains.tx_phi);
                    axes(r.value("rx", json::array()), row.domains.rx_theta, row.domains.rx_phi);
                    rows.push_back(row);
                }
            }
            const auto entries = zeta_table(tx, rx, j.value("asi_theta", 9.0), j.value("asi_phi", 9.0), rows);
            std::ostringstream csv;
            csv << "config,zeta_ongrid,zeta_ongrid_db,zeta_avg,zeta_avg_db\n" << std::setprecision(10);
            for (const auto &e : entries)
                csv << '"' << e.name << "\"," << e.zeta_ongrid << ',' << to_db(e.zeta_ongrid) << ',' << e.zeta_avg << ','
                    << to_db(e.zeta_avg) << '\n';
            write_text(table_out, csv.str());
        }
        else if (gen->parsed())
        {
            SVParams params;
            if (!gen_params.empty())
                params = sv_params_from_json(read_json_file(gen_params));
            if (gen_seed)
                params.seed = *gen_seed;
            write_json_file(gen_out, realization_to_json(generate(params)));
        }
        else if (sound->parsed())
        {
            const auto realization = realization_from_json(read_json_file(sound_mpcs));
            const auto config = sounder_from_json(read_json_file(sound_config), parent_of(sound_config));
            PowerTensor tensor;
            if (sound_mode == "incoherent")
                tensor = synthesize_incoherent(realization, config, sound_workers);
            else if (sound_trials > 1)
                tensor = synthesize_phase_averaged(realization, config, sound_trials, sound_seed, sound_workers);
            else
                tensor = synthesize_coherent(realization, config, sound_workers);
            save_tensor(sound_out, tensor);
        }
        else if (syn->parsed())
        {
            const auto tensor = load_tensor(syn_power);
            SynthesisOptions options;
            options.noise_threshold_db = syn_threshold;
            std::optional<PathLossLabel> label;
            if (!syn_label.empty())
                label = parse_path_loss_label(syn_label);
            const auto result = synthesize(tensor, parse_zeta_mode(syn_mode), label, options);
            write_text(syn_out, synthesis_result_to_json(result).dump(2) + "\n");
        }
        else if (mc->parsed())
        {
            auto config = experiment_from_json(read_json_file(mc_config), parent_of(mc_config));
            if (mc_full)
                config = config.full_scale();
            if (mc_workers)
                config.workers = *mc_workers;
            if (auto s = seed_override())
                config.seed = *s;
            std::ostringstream csv;
            write_error_csv(run_error_sweep(config), csv);
            write_text(mc_out, csv.str());
        }
        else if (pl->parsed())
        {
            auto config = pl_config_from_json(read_json_file(pl_config), parent_of(pl_config));
            if (pl_workers)
                config.workers = *pl_workers;
            if (auto s = seed_override())
                config.seed = *s;
            const auto result = run_pl_pairing(config);
            std::ostringstream csv;
            write_pl_csv(result.rows, csv);
            write_text(pl_out, csv.str());
            std::cerr << "mean PL difference: " << result.mean_diff_db << " dB over " << result.rows.size()
                      << " realizations\n";
        }
        else if (sp->parsed())
        {
            const auto realization = realization_from_json(read_json_file(sp_mpcs));
            const auto config = sounder_from_json(read_json_file(sp_config), parent_of(sp_config));
            dump_spectra(realization, config, sp_prefix);
        }
    }
    catch (const AliasingError &e)
    {
        std::cerr << "guard violation: " << e.what() << '\n';
        return exit_guard;
    }
    catch (const TensorSizeError &e)
    {
        std::cerr << "guard violation: " << e.what() << '\n';
        return exit_guard;
    }
    catch (const PatternSupportError &e)
    {
        std::cerr << "guard violation: " << e.what() << '\n';
        return exit_guard;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return 0;
}
