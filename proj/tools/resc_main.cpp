#include <iostream>

#include <CLI11.hpp>

#include "resc/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Relay extremum-seeking control simulator"};
    app.require_subcommand(1);

    resc::cli::RunOptions run;
    std::uint64_t seed = 0;
    auto* run_cmd = app.add_subcommand("run", "Run one closed-loop experiment");
    run_cmd->add_option("config", run.config, "Scenario file or preset name")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the configured seed");
    run_cmd->add_option("--out", run.out_dir, "Output directory")->capture_default_str();

    resc::cli::SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep over seeds");
    sweep_cmd->add_option("config", sweep.config, "Scenario file or preset name")->required();
    sweep_cmd->add_option("--param", sweep.param, "k0, t_hold, zeta or dt")
        ->required()
        ->check(CLI::IsMember({"k0", "t_hold", "zeta", "dt"}));
    sweep_cmd->add_option("--values", sweep.values, "Comma separated values")->required()->delimiter(',');
    sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds per value, counting up from the configured seed")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sweep.out_dir, "Output directory")->capture_default_str();

    std::string write_dir;
    auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");
    auto* write_opt = presets_cmd->add_option("--write", write_dir, "Also save each preset as <name>.cfg here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : resc::cli::kUsage;
    }

    if (*run_cmd) {
        if (*seed_opt) {
            run.seed = seed;
        }
        return resc::cli::cmd_run(run, std::cout, std::cerr);
    }
    if (*sweep_cmd) {
        return resc::cli::cmd_sweep(sweep, std::cout, std::cerr);
    }
    std::optional<std::string> dir;
    if (*write_opt) {
        dir = write_dir;
    }
    return resc::cli::cmd_presets(dir, std::cout, std::cerr);
}
