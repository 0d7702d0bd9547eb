#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cogcap/cli/run.hpp"
#include "cogcap/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "cogcap - effective capacity of a sensing-based cognitive radio link under "
        "QoS constraints and imperfect channel estimation"};

    std::string subcommand;
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::uint64_t seed = 0;
    bool seed_set = false;

    app.add_option("subcommand", subcommand,
                   "sense-roc | capacity | optimize | sweep-pd | sweep-eta | eta-vs-pd | "
                   "compare-estimators | simulate | validate")
        ->required();
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "output data file (sidecar written next to it)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "override the configured RNG seed")
        ->each([&](const std::string&) { seed_set = true; });

    CLI11_PARSE(app, argc, argv);

    std::string config_text;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read config file '" << config_path << "'\n";
            return cogcap::cli::kExitError;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        config_text = buf.str();
    }

    cogcap::cli::RunConfig config;
    try {
        config = cogcap::cli::parse_config(config_text);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return cogcap::cli::kExitError;
    }
    if (seed_set) config.seed = seed;

    cogcap::cli::OutputOptions options;
    options.out_path = out_path;
    options.format = format;
    return cogcap::cli::run(subcommand, config, options);
}
