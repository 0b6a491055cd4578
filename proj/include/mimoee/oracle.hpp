// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_ORACLE_HPP
#define MIMOEE_ORACLE_HPP

#include <Eigen/Dense>

#include "mimoee/sysmodel.hpp"

// Brute-force baselines for validating the solver. This module only
// evaluates the system-model formulas by exhaustive enumeration and
// must stay independent of the solver code paths.

namespace mimoee
{

// Per-dimension log-spaced power grid over [p_min, p_max], endpoints
// included. Total grid size is capped so oracle runs stay short.
struct GridSpec
{
    int points_per_dim = 1000;
    double p_min = 1e-12;
    double p_max = 1.0;

    void validate(int dims) const; // throws on oversize or bad range
};

struct GridSearchResult
{
    PowerVec p;
    double eta = 0.0;
    long feasible_points = 0;
};

// Evaluate the EE objective at every grid point satisfying the total
// power and minimum rate constraints; returns the maximizer. K <= 3
// only. Throws "infeasible at grid resolution" when no point passes.
GridSearchResult grid_search_ee(const SystemParams& params, const ChannelSet& channels,
                                const Beamformers& beams, const GridSpec& grid, double r_min);

// Count violations of a log2(s) + b <= log2(1 + s) beyond `slack` over
// the given samples of s > 0.
int sca_bound_check(const Eigen::VectorXd& s_samples, double a, double b, double slack = 1e-12);

} // namespace mimoee

#endif
