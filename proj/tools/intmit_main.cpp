// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: loads the experiment config, applies the seed and
// output-directory overrides, and dispatches one benchmark subcommand.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"

#include "intmit/bench/config.hpp"
#include "intmit/bench/runner.hpp"

namespace {

struct SubcommandSpec {
    const char* name;
    const char* help;
};

constexpr SubcommandSpec kSubcommands[] = {
    {"gen-data", "synthesize the paired channel-estimate datasets"},
    {"train-ul", "train the estimate-recovery network and the single-chain baseline"},
    {"eval-ul", "held-out NMSE of the trained estimate-recovery networks"},
    {"train-dl", "train the constellation-recovery network"},
    {"eval-dl", "BLER and symbol diagnostics of the trained receiver"},
    {"sweep-sinr", "BLER vs SINR curve for the learned, IRC, and MRC receivers"},
    {"sweep-sf", "retrain the recovery network across width multipliers"},
    {"grad-check", "finite-difference verification of every network gradient"},
    {"timing", "per-frame inference latency report (excluded from determinism)"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level interference estimation and mitigation benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    uint64_t seed = 0;
    bool seed_given = false;
    std::string out_override;
    for (const auto& spec : kSubcommands) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("--config", config_path, "experiment config JSON file")->required();
        sub->add_option_function<uint64_t>(
               "--seed",
               [&seed, &seed_given](uint64_t v) {
                   seed = v;
                   seed_given = true;
               },
               "override the run seed (default: train.seed from the config)");
        sub->add_option("--out", out_override, "override the config's output_dir");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // bad invocation is a config error
    }

    intmit::bench::ExperimentConfig cfg;
    try {
        cfg = intmit::bench::load_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    if (!out_override.empty()) {
        cfg.output_dir = out_override;
    } else if (const char* env_out = std::getenv("INTMIT_OUT"); env_out && *env_out) {
        cfg.output_dir = env_out;
    }
    if (const char* threads = std::getenv("INTMIT_THREADS"); threads && *threads) {
        if (std::string(threads) != "1")
            std::fprintf(stderr,
                         "note: the compute engine is strictly sequential; INTMIT_THREADS=%s "
                         "is ignored\n",
                         threads);
    }

    const uint64_t run_seed = seed_given ? seed : cfg.train.seed;
    const std::string name = app.get_subcommands().front()->get_name();
    return intmit::bench::run_subcommand(name, cfg, run_seed);
}
