// Command-line front end for the separated-representation studies.

#include <parasep/experiment.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace ex = parasep::experiment;

int main(int argc, char** argv) {
    CLI::App app{"parasep: nonintrusive separated representations of parametric matrices"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    bool svg = false;
    auto* study = app.add_subcommand("run-study", "convergence sweep over the configured d^g list");
    study->add_option("-c,--config", config_path, "JSON configuration")->required();
    study->add_option("-o,--output", output_dir, "override the configured output directory");
    study->add_flag("--svg", svg, "also write SVG charts of log10 error against mu");

    auto* audit = app.add_subcommand("audit", "count provider calls and check the nonintrusivity contract");
    audit->add_option("-c,--config", config_path, "JSON configuration")->required();
    audit->add_option("-o,--output", output_dir, "override the configured output directory");

    auto* rbm = app.add_subcommand("run-rbm", "reduced-basis pipeline on top of the separated model");
    rbm->add_option("-c,--config", config_path, "JSON configuration")->required();
    rbm->add_option("-o,--output", output_dir, "override the configured output directory");

    std::string manifest, payload_out;
    double mu = 0.0;
    auto* replay = app.add_subcommand("replay", "evaluate a saved model at one parameter value");
    replay->add_option("-m,--manifest", manifest, "model manifest.json")->required();
    replay->add_option("--mu", mu, "parameter value")->required();
    replay->add_option("-o,--output", payload_out, "write the evaluated payload to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (replay->parsed()) {
            std::cout << ex::replay(manifest, mu, payload_out).dump(2) << '\n';
            return 0;
        }
        auto cfg = ex::load_config(config_path);
        if (!output_dir.empty())
            cfg.output_dir = output_dir;
        if (study->parsed())
            ex::run_study(cfg, {.svg = svg});
        else if (audit->parsed())
            ex::run_audit(cfg);
        else if (rbm->parsed())
            ex::run_rbm(cfg);
        std::cerr << "outputs in " << cfg.output_dir.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ex::exit_code(e);
    }
    return 0;
}
