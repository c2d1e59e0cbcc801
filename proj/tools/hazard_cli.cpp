#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hazard/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time termination-hazard surface analysis"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int chains = 0;

    bool have_seed = false, have_chains = false, have_out = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration");
        sub->add_option("--seed", seed, "override the sampler seed")->each([&](const std::string&) {
            have_seed = true;
        });
        sub->add_option("--chains", chains, "override the chain count")->each([&](const std::string&) {
            have_chains = true;
        });
        sub->add_option("--out", out_dir, "override the output directory")->each([&](const std::string&) {
            have_out = true;
        });
    };

    CLI::App* ingest = app.add_subcommand("ingest", "parse the flow file and write the binned panel");
    CLI::App* analyze = app.add_subcommand("analyze", "run the sampler and export posterior summaries");
    CLI::App* baseline = app.add_subcommand("baseline", "run the classical comparison analyses");
    add_common(ingest);
    add_common(analyze);
    add_common(baseline);

    CLI11_PARSE(app, argc, argv);

    try {
        hazard::RunConfig cfg =
            config_path.empty() ? hazard::default_config() : hazard::load_config(config_path);
        if (have_seed) cfg.sampler.seed = seed;
        if (have_chains) cfg.chains = chains;
        if (have_out) cfg.output_dir = out_dir;

        if (ingest->parsed()) return hazard::cmd_ingest(cfg);
        if (analyze->parsed()) return hazard::cmd_analyze(cfg);
        return hazard::cmd_baseline(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
