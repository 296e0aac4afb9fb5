#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lfctune/commands.hpp"

// CLI front end: simulate | tune | compare | nominal-config.

int main(int argc, char** argv) {
    CLI::App app{"Three-area load-frequency-control simulation and controller tuning"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lfctune::kToolVersion));

    lfctune::SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Run one disturbance scenario");
    sim->add_option("--config", sim_args.config_path, "Configuration file");
    sim->add_flag("--nominal", sim_args.nominal, "Use the built-in nominal configuration");
    sim->add_option("--decision", sim_args.decision_path,
                    "Decision file (defaults to the nominal decision)");
    sim->add_option("--load-area", sim_args.load_area, "Disturbed area, 1-based")
        ->default_val(1);
    sim->add_option("--load-pu", sim_args.load_pu, "Step magnitude, pu MW")->default_val(0.01);
    sim->add_option("--load-start", sim_args.load_start, "Step start time, s")->default_val(0.0);
    sim->add_option("--out", sim_args.out_dir, "Output directory")->default_val(".");

    lfctune::TuneArgs tune_args;
    CLI::App* tune = app.add_subcommand("tune", "Tune the twelve parameters with one method");
    tune->add_option("--config", tune_args.config_path, "Configuration file");
    tune->add_flag("--nominal", tune_args.nominal, "Use the built-in nominal configuration");
    tune->add_option("--method", tune_args.method, "bfo | pso | gd")->required();
    tune->add_option("--profile", tune_args.profile, "Budget profile: desk | paper | config")
        ->default_val("desk");
    tune->add_option("--seed", tune_args.seed, "RNG seed")->default_val(0);
    tune->add_option("--load-area", tune_args.load_area, "Disturbed area, 1-based")
        ->default_val(1);
    tune->add_option("--load-pu", tune_args.load_pu, "Step magnitude, pu MW")->default_val(0.01);
    tune->add_option("--load-start", tune_args.load_start, "Step start time, s")->default_val(0.0);
    tune->add_option("--out", tune_args.out_dir, "Output directory")->default_val(".");

    lfctune::CompareArgs cmp_args;
    CLI::App* cmp = app.add_subcommand("compare", "Compare tuned results from three runs");
    cmp->add_option("dirs", cmp_args.result_dirs, "Result directories from tune runs")
        ->required()
        ->expected(1, -1);
    cmp->add_option("--out", cmp_args.out_dir, "Output directory")->default_val(".");

    lfctune::NominalConfigArgs nom_args;
    CLI::App* nom = app.add_subcommand("nominal-config", "Write the nominal configuration file");
    nom->add_option("--out", nom_args.out_dir, "Output directory")->default_val(".");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lfctune::exit_usage;
    }

    if (sim->parsed()) {
        if (!sim_args.nominal && sim_args.config_path.empty()) {
            std::cerr << "error: either --config or --nominal is required\n";
            return lfctune::exit_usage;
        }
        return lfctune::cmd_simulate(sim_args, std::cerr);
    }
    if (tune->parsed()) {
        if (!tune_args.nominal && tune_args.config_path.empty()) {
            std::cerr << "error: either --config or --nominal is required\n";
            return lfctune::exit_usage;
        }
        return lfctune::cmd_tune(tune_args, std::cerr);
    }
    if (cmp->parsed()) return lfctune::cmd_compare(cmp_args, std::cerr);
    if (nom->parsed()) return lfctune::cmd_nominal_config(nom_args, std::cerr);
    return lfctune::exit_usage;
}
