#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lucas/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Lucas-Uzawa two-sector growth model: saddle-path calibration, "
        "closed-form trajectories, and numerical verification"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double forced_u0 = 0.0;

    CLI::App* solve = app.add_subcommand(
        "solve", "Calibrate and write trajectory.csv + solution.json");
    CLI::App* verify = app.add_subcommand(
        "verify", "Run the verification suite and write verification.json");
    CLI::App* compare = app.add_subcommand(
        "compare", "Simulate the dynamics and write compare.csv");
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Visit the configured parameter grid and write sweep.csv");
    for (CLI::App* sub : {solve, verify, compare, sweep}) {
        sub->add_option("--config", config_path, "Path to the JSON run configuration")
            ->required();
        sub->add_option("--out", out_dir, "Override the configured output directory");
    }
    CLI::Option* force_opt = verify->add_option(
        "--force-u0", forced_u0,
        "Debug hook: bypass calibration and start from this labor share");

    CLI11_PARSE(app, argc, argv);

    lucas::RunConfig cfg;
    try {
        cfg = lucas::load_config(config_path);
    } catch (const lucas::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return lucas::kExitIoFailure;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (force_opt->count() > 0) cfg.force_u0 = forced_u0;

    try {
        if (solve->parsed()) return lucas::cmd_solve(cfg, std::cout);
        if (verify->parsed()) return lucas::cmd_verify(cfg, std::cout);
        if (compare->parsed()) return lucas::cmd_compare(cfg, std::cout);
        if (sweep->parsed()) return lucas::cmd_sweep(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return lucas::kExitCalibrationFailure;
    }
    return lucas::kExitOk;
}
