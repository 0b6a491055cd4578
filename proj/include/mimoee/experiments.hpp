// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_EXPERIMENTS_HPP
#define MIMOEE_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimoee/multicell.hpp"
#include "mimoee/sysmodel.hpp"

namespace mimoee
{

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Scenario
{
    convergence,    // single realization, solver trace per outer iteration
    ee_vs_m,        // mean EE over an antenna sweep
    ee_vs_k,        // mean EE over a user-count sweep
    power_vs_m,     // mean per-user transmit power over an antenna sweep
    multicell_vs_m, // realized multi-cell EE vs isolated-cell EE over an antenna sweep
};

const char* scenario_name(Scenario s);

struct ExperimentConfig
{
    Scenario scenario = Scenario::convergence;
    std::vector<int> sweep;
    int trials = 1;
    std::uint64_t base_seed = 1;
    std::string out_path = "result.csv";
    SystemParams params;
    MultiCellParams multicell; // .cell mirrors params at run time

    void validate() const;
};

// Parse the flat `key = value` configuration text: Table-I defaults,
// scenario-specific sweep/trial defaults, full validation. Unknown
// keys, unparsable or out-of-range values raise ConfigError naming the
// key. '#' starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

struct SweepRow
{
    int sweep = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    int trials = 0;   // attempted
    int failures = 0; // trials without a cleanly converged feasible solve
    std::uint64_t seed = 0;
};

struct ExperimentResult
{
    Scenario scenario = Scenario::convergence;
    std::vector<SweepRow> rows;
    // per sweep point, metric of every trial that produced a result
    std::vector<std::vector<double>> per_trial;
    // multicell_vs_m: isolated single-cell reference means
    std::vector<SweepRow> single_cell_rows;
    std::vector<std::vector<double>> single_cell_per_trial;
    // convergence: (t1, achieved eta, residual) of the first trial
    std::vector<std::array<double, 3>> trace;
};

// Run the configured scenario: seeded trials (seed = base_seed + t),
// sequential deterministic aggregation. A trial that throws inside the
// solver is dropped from the aggregates; a trial that returns a
// best-effort allocation (caps hit or R^min diagnosed infeasible) is
// averaged and counted in `failures`.
ExperimentResult run_scenario(const ExperimentConfig& config);

// Write the result as CSV: header `sweep,mean,stderr,trials,failures,seed`,
// floats with 9 significant digits, byte-deterministic. The convergence
// scenario also writes `trace.csv` next to the output; multicell_vs_m
// also writes `<stem>_single.csv` with the isolated-cell reference.
void emit_csv(const ExperimentResult& result, const std::string& path);

} // namespace mimoee

#endif
