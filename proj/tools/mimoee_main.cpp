// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mimoee/experiments.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"energy efficient massive MIMO power allocation experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment scenario from a config file");
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int trials = 0;
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--out", out_path, "output CSV path (overrides config)");
    auto* seed_opt = run->add_option("--seed", seed, "base seed (overrides config)");
    auto* trials_opt = run->add_option("--trials", trials, "trials per sweep point (overrides config)");

    CLI11_PARSE(app, argc, argv);

    mimoee::ExperimentConfig cfg;
    try
    {
        cfg = mimoee::load_config_file(config_path);
        if (!out_path.empty())
            cfg.out_path = out_path;
        if (seed_opt->count() > 0)
            cfg.base_seed = seed;
        if (trials_opt->count() > 0)
        {
            cfg.trials = trials;
            cfg.validate();
        }
    }
    catch (const mimoee::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try
    {
        mimoee::ExperimentResult result = mimoee::run_scenario(cfg);
        mimoee::emit_csv(result, cfg.out_path);
        std::cout << mimoee::scenario_name(cfg.scenario) << ": wrote " << result.rows.size()
                  << " rows to " << cfg.out_path << "\n";
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
