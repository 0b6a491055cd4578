// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "mimoee/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace mimoee
{

const char* scenario_name(Scenario s)
{
    switch (s)
    {
    case Scenario::convergence: return "convergence";
    case Scenario::ee_vs_m: return "ee_vs_m";
    case Scenario::ee_vs_k: return "ee_vs_k";
    case Scenario::power_vs_m: return "power_vs_m";
    case Scenario::multicell_vs_m: return "multicell_vs_m";
    }
    return "?";
}

namespace
{

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value)
{
    try
    {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    }
    catch (const std::exception&)
    {
        throw ConfigError("invalid numeric value for key '" + key + "': " + value);
    }
}

long parse_int(const std::string& key, const std::string& value)
{
    try
    {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument(value);
        return v;
    }
    catch (const std::exception&)
    {
        throw ConfigError("invalid integer value for key '" + key + "': " + value);
    }
}

std::vector<int> parse_sweep(const std::string& value)
{
    std::vector<int> out;
    if (value.find(':') != std::string::npos)
    {
        // start:step:stop, inclusive
        std::istringstream ss(value);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
            throw ConfigError("invalid sweep range: " + value);
        long start = parse_int("sweep", trim(a));
        long step = parse_int("sweep", trim(b));
        long stop = parse_int("sweep", trim(c));
        if (step <= 0 || stop < start)
            throw ConfigError("invalid sweep range: " + value);
        for (long v = start; v <= stop; v += step)
            out.push_back(int(v));
    }
    else
    {
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            item = trim(item);
            if (!item.empty())
                out.push_back(int(parse_int("sweep", item)));
        }
    }
    if (out.empty())
        throw ConfigError("sweep must not be empty");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "1" || value == "true")
        return true;
    if (value == "0" || value == "false")
        return false;
    throw ConfigError("invalid boolean value for key '" + key + "': " + value);
}

void format_row(std::string& out, const SweepRow& row)
{
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%d,%d,%llu\n", row.sweep, row.mean,
                  row.stderr_mean, row.trials, row.failures,
                  static_cast<unsigned long long>(row.seed));
    out += buf;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write output file: " + path);
    f << content;
    if (!f)
        throw std::runtime_error("write failed: " + path);
}

std::string sibling_path(const std::string& out_path, const std::string& name)
{
    auto slash = out_path.find_last_of("/\\");
    return slash == std::string::npos ? name : out_path.substr(0, slash + 1) + name;
}

std::string stem_suffix_path(const std::string& out_path, const std::string& suffix)
{
    auto dot = out_path.find_last_of('.');
    auto slash = out_path.find_last_of("/\\");
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + suffix;
    return out_path.substr(0, dot) + suffix + out_path.substr(dot);
}

struct TrialOutcome
{
    std::optional<double> value; // empty when the solver threw
    std::optional<double> aux;
    bool clean = false; // converged and feasible
};

} // namespace

void ExperimentConfig::validate() const
{
    if (sweep.empty())
        throw ConfigError("sweep must not be empty");
    for (int v : sweep)
        if (v < 1)
            throw ConfigError("sweep values must be >= 1");
    if (trials < 1)
        throw ConfigError("trials must be >= 1");
    try
    {
        params.validate();
        if (scenario == Scenario::multicell_vs_m)
        {
            MultiCellParams mc = multicell;
            mc.cell = params;
            mc.validate();
        }
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    std::set<std::string> seen;
    bool have_scenario = false;

    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line))
    {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("expected 'key = value', got: " + line);
        if (!seen.insert(key).second)
            throw ConfigError("duplicate key: " + key);

        if (key == "scenario")
        {
            have_scenario = true;
            if (value == "convergence")
                cfg.scenario = Scenario::convergence;
            else if (value == "ee_vs_m")
                cfg.scenario = Scenario::ee_vs_m;
            else if (value == "ee_vs_k")
                cfg.scenario = Scenario::ee_vs_k;
            else if (value == "power_vs_m")
                cfg.scenario = Scenario::power_vs_m;
            else if (value == "multicell_vs_m")
                cfg.scenario = Scenario::multicell_vs_m;
            else
                throw ConfigError("unknown scenario: " + value);
        }
        else if (key == "sweep")
            cfg.sweep = parse_sweep(value);
        else if (key == "trials")
            cfg.trials = int(parse_int(key, value));
        else if (key == "seed")
            cfg.base_seed = std::uint64_t(parse_int(key, value));
        else if (key == "out")
            cfg.out_path = value;
        else if (key == "antennas")
            cfg.params.antennas = int(parse_int(key, value));
        else if (key == "users")
            cfg.params.users = int(parse_int(key, value));
        else if (key == "bandwidth_hz")
            cfg.params.bandwidth_hz = parse_double(key, value);
        else if (key == "noise_dbm_per_hz")
            cfg.params.noise_dbm_per_hz = parse_double(key, value);
        else if (key == "shadow_std_db")
            cfg.params.shadow_std_db = parse_double(key, value);
        else if (key == "p_max_w")
            cfg.params.p_max_w = parse_double(key, value);
        else if (key == "p_antenna_w")
            cfg.params.p_antenna_w = parse_double(key, value);
        else if (key == "p_fix_w")
            cfg.params.p_fix_w = parse_double(key, value);
        else if (key == "p_user_w")
            cfg.params.p_user_w = parse_double(key, value);
        else if (key == "r_min_bps")
            cfg.params.r_min_bps = parse_double(key, value);
        else if (key == "ber_target")
            cfg.params.ber_target = parse_double(key, value);
        else if (key == "cell_radius_m")
            cfg.params.cell_radius_m = parse_double(key, value);
        else if (key == "min_distance_m")
            cfg.params.min_distance_m = parse_double(key, value);
        else if (key == "path_loss_exponent")
            cfg.params.path_loss_exponent = parse_double(key, value);
        else if (key == "cells")
            cfg.multicell.cells = int(parse_int(key, value));
        else if (key == "pilot_power_w")
            cfg.multicell.pilot_power_w = parse_double(key, value);
        else if (key == "pilot_length")
            cfg.multicell.pilot_length = int(parse_int(key, value));
        else if (key == "ring_radius_factor")
            cfg.multicell.ring_radius_factor = parse_double(key, value);
        else if (key == "eps_dinkelbach")
            cfg.params.solver.eps_dinkelbach = parse_double(key, value);
        else if (key == "tol_power")
            cfg.params.solver.tol_power = parse_double(key, value);
        else if (key == "tol_sca")
            cfg.params.solver.tol_sca = parse_double(key, value);
        else if (key == "tol_dual")
            cfg.params.solver.tol_dual = parse_double(key, value);
        else if (key == "max_dinkelbach")
            cfg.params.solver.max_dinkelbach = int(parse_int(key, value));
        else if (key == "max_sca")
            cfg.params.solver.max_sca = int(parse_int(key, value));
        else if (key == "max_subgradient")
            cfg.params.solver.max_subgradient = int(parse_int(key, value));
        else if (key == "gamma_phi")
            cfg.params.solver.gamma_phi = parse_double(key, value);
        else if (key == "gamma_lambda")
            cfg.params.solver.gamma_lambda = parse_double(key, value);
        else if (key == "diminishing_steps")
            cfg.params.solver.diminishing_steps = parse_bool(key, value);
        else if (key == "p_floor")
            cfg.params.solver.p_floor = parse_double(key, value);
        else
            throw ConfigError("unknown key: " + key);
    }

    if (!have_scenario)
        throw ConfigError("missing key: scenario");

    // Scenario defaults for anything not set explicitly
    auto unset = [&seen](const char* key) { return seen.find(key) == seen.end(); };
    auto range = [](int a, int b, int s) {
        std::vector<int> v;
        for (int x = a; x <= b; x += s)
            v.push_back(x);
        return v;
    };
    switch (cfg.scenario)
    {
    case Scenario::convergence:
        if (unset("sweep"))
            cfg.sweep = {100};
        if (unset("trials"))
            cfg.trials = 1;
        break;
    case Scenario::ee_vs_m:
    case Scenario::power_vs_m:
        if (unset("sweep"))
            cfg.sweep = range(10, 200, 10);
        if (unset("trials"))
            cfg.trials = 200;
        break;
    case Scenario::ee_vs_k:
        if (unset("sweep"))
            cfg.sweep = range(1, 20, 1);
        if (unset("trials"))
            cfg.trials = 200;
        if (unset("antennas"))
            cfg.params.antennas = 82;
        break;
    case Scenario::multicell_vs_m:
        if (unset("sweep"))
            cfg.sweep = {60, 100, 140, 180};
        if (unset("trials"))
            cfg.trials = 200;
        break;
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace
{

SweepRow aggregate(int sweep_value, const std::vector<double>& values, int attempted,
                   int failures, std::uint64_t seed)
{
    SweepRow row;
    row.sweep = sweep_value;
    row.trials = attempted;
    row.failures = failures;
    row.seed = seed;
    const int n = int(values.size());
    if (n > 0)
    {
        double sum = 0.0;
        for (double v : values)
            sum += v;
        row.mean = sum / n;
        if (n > 1)
        {
            double ss = 0.0;
            for (double v : values)
                ss += (v - row.mean) * (v - row.mean);
            row.stderr_mean = std::sqrt(ss / double(n - 1)) / std::sqrt(double(n));
        }
    }
    return row;
}

} // namespace

ExperimentResult run_scenario(const ExperimentConfig& config)
{
    config.validate();
    ExperimentResult result;
    result.scenario = config.scenario;

    const bool sweep_is_users = config.scenario == Scenario::ee_vs_k;
    const bool is_multicell = config.scenario == Scenario::multicell_vs_m;

    for (std::size_t si = 0; si < config.sweep.size(); ++si)
    {
        const int sv = config.sweep[si];
        SystemParams params = config.params;
        if (sweep_is_users)
            params.users = sv;
        else
            params.antennas = sv;
        try
        {
            params.validate();
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(e.what());
        }

        std::vector<double> values, aux_values;
        int failures = 0;
        for (int t = 0; t < config.trials; ++t)
        {
            const std::uint64_t seed = config.base_seed + std::uint64_t(t);
            Rng rng(seed);
            TrialOutcome outcome;
            try
            {
                if (is_multicell)
                {
                    MultiCellParams mc = config.multicell;
                    mc.cell = params;
                    MultiCellChannels chans = layout_and_draw(mc, rng);
                    ls_estimate(chans, mc, rng);
                    MultiCellAllocation alloc = multicell_solve(mc, chans);
                    outcome.value = evaluate_on_true(mc, chans, alloc);
                    ChannelSet own = own_cell_channelset(chans, 0);
                    SolveResult single = dinkelbach_solve(params, own, mrt_beamformers(own));
                    outcome.aux = single.eta;
                    outcome.clean = alloc.converged && single.converged;
                }
                else
                {
                    ChannelSet chans = draw_channels(params, rng);
                    SolveResult res = dinkelbach_solve(params, chans, mrt_beamformers(chans));
                    if (config.scenario == Scenario::power_vs_m)
                        outcome.value = res.p.sum() / double(params.users);
                    else
                        outcome.value = res.eta;
                    outcome.clean = res.converged;
                    if (config.scenario == Scenario::convergence && si == 0 && t == 0)
                        for (const auto& it : res.trace)
                            result.trace.push_back(
                                {double(it.t1), it.eta_achieved, it.residual});
                }
            }
            catch (const SolverError&)
            {
                outcome = {};
            }
            if (!outcome.clean)
                ++failures;
            if (outcome.value)
                values.push_back(*outcome.value);
            if (outcome.aux)
                aux_values.push_back(*outcome.aux);
        }

        result.per_trial.push_back(values);
        result.rows.push_back(aggregate(sv, values, config.trials, failures, config.base_seed));
        if (is_multicell)
        {
            result.single_cell_per_trial.push_back(aux_values);
            result.single_cell_rows.push_back(
                aggregate(sv, aux_values, config.trials, failures, config.base_seed));
        }
    }
    return result;
}

void emit_csv(const ExperimentResult& result, const std::string& path)
{
    if (result.rows.empty())
        throw std::invalid_argument("empty result");
    std::string csv = "sweep,mean,stderr,trials,failures,seed\n";
    for (const auto& row : result.rows)
        format_row(csv, row);
    write_file(path, csv);

    if (result.scenario == Scenario::convergence && !result.trace.empty())
    {
        std::string tr = "t1,eta,residual\n";
        for (const auto& row : result.trace)
        {
            char buf[120];
            std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g\n", int(row[0]), row[1], row[2]);
            tr += buf;
        }
        write_file(sibling_path(path, "trace.csv"), tr);
    }
    if (result.scenario == Scenario::multicell_vs_m && !result.single_cell_rows.empty())
    {
        std::string sc = "sweep,mean,stderr,trials,failures,seed\n";
        for (const auto& row : result.single_cell_rows)
            format_row(sc, row);
        write_file(stem_suffix_path(path, "_single"), sc);
    }
}

} // namespace mimoee
