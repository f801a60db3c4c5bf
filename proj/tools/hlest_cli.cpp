#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hlest/experiments.hpp"

namespace {

// Returns the --config path if present, so file values can be loaded before flags.
std::string find_config_path(int argc, char** argv)
{
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
        if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
    }
    return {};
}

}  // namespace

int main(int argc, char** argv)
{
    hlest::ExperimentConfig cfg;

    if (const auto path = find_config_path(argc, argv); !path.empty()) {
        std::ifstream in(path);
        if (!in) {
            std::cerr << "error: cannot open config " << path << "\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            hlest::apply_config_json(ss.str(), cfg);
        } catch (const hlest::ConfigError& e) {
            std::cerr << path << ": " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"Adaptive multi-observable gradient estimation: simulations and resource accounting"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", std::string(hlest::kVersion));
    std::string config_path;
    app.add_option("--config", config_path, "flat JSON config; flags override its values");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--M", cfg.M, "number of observables");
        sub->add_option("--d", cfg.d, "system dimension (power of 2)");
        sub->add_option("--eps", cfg.eps, "target root MSE");
        sub->add_option("--eps-add", cfg.eps_add, "baseline additive precision grid");
        sub->add_option("--delta", cfg.delta, "baseline failure probability grid");
        sub->add_option("--c", cfg.c, "confidence constant (0: command default)");
        sub->add_option("--runs", cfg.runs, "Monte-Carlo runs");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--model", cfg.model, "probing model")->check(CLI::IsMember({"ideal", "hs", "grover"}));
        sub->add_option("--out", cfg.out, "output CSV path (default stdout)");
        sub->add_option("--overhead", cfg.overhead, "oracle conversion overhead");
        sub->add_option("--g-sets", cfg.g_sets, "number of random g-sets");
        sub->add_option("--n-mc", cfg.n_mc, "Monte-Carlo samples for the baseline marginal");
        sub->add_option("--a", cfg.a, "ancillas per observable block encoding");
        sub->add_option("--config", config_path, "flat JSON config; flags override its values");
    };
    for (const char* name : {"adaptive", "baseline", "resources", "threshold", "micro", "fig4", "fig5", "fig6"}) {
        auto* sub = app.add_subcommand(name);
        add_common(sub);
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string csv;
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        csv = hlest::run_command(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!(out << csv)) {
            std::cerr << "error: cannot write " << cfg.out << "\n";
            return 1;
        }
    }
    return 0;
}
