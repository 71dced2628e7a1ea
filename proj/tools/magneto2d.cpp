#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "magneto/scenario.hpp"

using namespace magneto;

int main(int argc, char** argv) {
    CLI::App app{"magneto2d: planar magnetic Hamiltonian dynamics, confinement certificates and scattering angles"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", figure_name;
    double t_max_override = -1.0, tol_override = -1.0, horizon_override = -1.0;

    auto add_common = [&](CLI::App* cmd, bool need_config) {
        auto* opt = cmd->add_option("--config", config_path, "scenario config (JSON)");
        if (need_config) opt->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--t-max", t_max_override, "override simulation horizon");
        cmd->add_option("--tol", tol_override, "override integrator relative tolerance");
        cmd->add_option("--T", horizon_override, "override certificate horizon T");
    };

    auto* sim = app.add_subcommand("simulate", "integrate a trajectory");
    add_common(sim, true);
    auto* sca = app.add_subcommand("scatter", "compute the scattering angle");
    add_common(sca, true);
    auto* con = app.add_subcommand("confine-check", "radial H1/H2 confinement certificate");
    add_common(con, true);
    auto* bnd = app.add_subcommand("bound", "collar lower-bound certificate");
    add_common(bnd, true);
    auto* swp = app.add_subcommand("sweep", "scattering sweep over (p_theta, H0) entries");
    add_common(swp, true);
    auto* fig = app.add_subcommand("figure", "run a named figure preset");
    add_common(fig, false);
    fig->add_option("--name", figure_name, "preset name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        Scenario sc;
        if (app.got_subcommand(fig)) {
            sc = figure_preset(figure_name);
        } else {
            sc = Scenario::load(config_path);
            sc.task = app.get_subcommands().front()->get_name();
        }
        if (t_max_override > 0.0) sc.t_max = t_max_override;
        if (horizon_override > 0.0) sc.horizon_T = horizon_override;
        if (tol_override > 0.0) sc.tol.rel_tol = tol_override;

        RunOutcome outcome = run_scenario(sc, out_dir);
        std::printf("%s\n", outcome.message.c_str());
        return outcome.exit_code;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
