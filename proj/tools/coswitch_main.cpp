#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coswitch/cli.hpp"

namespace {

int env_threads_fallback() {
    const char* env = std::getenv("COSINE_SWITCH_THREADS");
    if (!env) return 1;
    try {
        return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coswitch: simulator, fitter and design tool for a flux-tunable "
                 "four-port superconducting switch"};
    app.require_subcommand(1);

    std::string config_path, out_path, data_path, in_path;
    int threads = env_threads_fallback();
    double z0 = 0.0;
    double threshold_db = 20.0;

    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", config_path, "run configuration file")->required();
        if (needs_out) cmd->add_option("--out", out_path, "output file")->required();
        cmd->add_option("--threads", threads, "worker threads for sweeps");
        cmd->add_option("--z0", z0, "override reference impedance (Ohm)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "single-flux frequency sweep to .s4p");
    add_common(simulate, true);
    CLI::App* sweep = app.add_subcommand("sweep", "flux-frequency map to CSV");
    add_common(sweep, true);
    CLI::App* fit = app.add_subcommand("fit", "extract coupling phase and fit L_coup");
    add_common(fit, true);
    fit->add_option("--data", data_path, "measured CSV (f_Hz,S21,S31[,flux])")->required();
    CLI::App* design = app.add_subcommand("design", "synthesize device parameters");
    design->add_option("--config", config_path, "run configuration file")->required();
    design->add_option("--z0", z0, "override reference impedance (Ohm)");
    CLI::App* points = app.add_subcommand("points", "operating-point report from a sweep CSV");
    points->add_option("--in", in_path, "sweep CSV produced by the sweep command")->required();
    points->add_option("--threshold", threshold_db, "isolation threshold in dB");

    CLI11_PARSE(app, argc, argv);

    try {
        coswitch::cli::CommonOptions opt;
        opt.threads = threads;
        if (z0 > 0.0) opt.z0_override = z0;

        if (simulate->parsed()) {
            coswitch::cli::cmd_simulate(coswitch::cli::load_config_file(config_path), out_path,
                                        opt, std::cout);
        } else if (sweep->parsed()) {
            coswitch::cli::cmd_sweep(coswitch::cli::load_config_file(config_path), out_path, opt);
        } else if (fit->parsed()) {
            coswitch::cli::cmd_fit(coswitch::cli::load_config_file(config_path), data_path,
                                   out_path, std::cout);
        } else if (design->parsed()) {
            coswitch::cli::cmd_design(coswitch::cli::load_config_file(config_path), opt,
                                      std::cout);
        } else if (points->parsed()) {
            coswitch::cli::cmd_points(in_path, threshold_db, std::cout);
        }
    } catch (const coswitch::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
