#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "flexwing/config.hpp"
#include "flexwing/model.hpp"
#include "flexwing/runner.hpp"
#include "flexwing/sim.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Flexible wing simulator and stability certifier"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    };
    auto* certify = app.add_subcommand("certify", "evaluate the stability certificate");
    auto* simulate = app.add_subcommand("simulate", "time-integrate the wing");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the closed-loop system");
    auto* sweep = app.add_subcommand("sweep", "vary sweep.key over sweep.values");
    for (auto* s : {certify, simulate, spectrum, sweep}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : flexwing::BadConfig;
    }

    try {
        flexwing::RunConfig cfg = flexwing::load_config(config_path);
        const std::string out = out_dir.empty() ? cfg.out_dir : out_dir;
        if (certify->parsed()) return flexwing::run_certify(cfg, out, std::cout);
        if (simulate->parsed()) return flexwing::run_simulate(cfg, out, std::cout);
        if (spectrum->parsed()) return flexwing::run_spectrum(cfg, out, std::cout);
        return flexwing::run_sweep(cfg, out, std::cout);
    } catch (const flexwing::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return flexwing::BadConfig;
    } catch (const flexwing::InvalidParameters& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return flexwing::BadConfig;
    } catch (const flexwing::sim::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return flexwing::NumericFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return flexwing::BadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return flexwing::NumericFailure;
    }
}
