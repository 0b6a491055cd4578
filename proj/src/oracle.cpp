// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "mimoee/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mimoee
{

void GridSpec::validate(int dims) const
{
    if (points_per_dim < 16)
        throw std::invalid_argument("points_per_dim must be >= 16");
    if (!(p_min > 0.0) || !(p_max > p_min))
        throw std::invalid_argument("grid range must satisfy 0 < p_min < p_max");
    double total = std::pow(double(points_per_dim), dims);
    if (total > 1e7)
        throw std::invalid_argument("grid too large (more than 1e7 points)");
}

GridSearchResult grid_search_ee(const SystemParams& params, const ChannelSet& channels,
                                const Beamformers& beams, const GridSpec& grid, double r_min)
{
    const int k = params.users;
    if (k > 3)
        throw std::invalid_argument("grid oracle limited to K <= 3");
    grid.validate(k);

    const Eigen::MatrixXd gains = link_gains(channels, beams);
    const double noise = params.noise_power_w();
    const double gap = params.snr_gap();
    const double bw = params.bandwidth_hz;
    const double circuit = params.circuit_power_w();
    // True-rate feasibility threshold expressed on the SINR axis
    const double sinr_min =
        r_min > 0.0 ? (std::pow(2.0, r_min / bw) - 1.0) / gap : 0.0;

    std::vector<double> axis(grid.points_per_dim);
    const double log_lo = std::log(grid.p_min);
    const double log_hi = std::log(grid.p_max);
    for (int i = 0; i < grid.points_per_dim; ++i)
        axis[i] = std::exp(log_lo + (log_hi - log_lo) * double(i) /
                                        double(grid.points_per_dim - 1));

    GridSearchResult best;
    best.eta = -1.0;
    PowerVec p(k);
    std::vector<int> idx(k, 0);
    const long total = long(std::pow(double(grid.points_per_dim), k));
    for (long flat = 0; flat < total; ++flat)
    {
        long rem = flat;
        double sum = 0.0;
        for (int d = 0; d < k; ++d)
        {
            idx[d] = int(rem % grid.points_per_dim);
            rem /= grid.points_per_dim;
            p[d] = axis[idx[d]];
            sum += p[d];
        }
        if (sum > params.p_max_w)
            continue;

        bool rate_ok = true;
        double rate_sum = 0.0;
        for (int i = 0; i < k && rate_ok; ++i)
        {
            double interf = noise;
            for (int u = 0; u < k; ++u)
                if (u != i)
                    interf += p[u] * gains(i, u);
            double s = p[i] * gains(i, i) / interf;
            if (s < sinr_min)
                rate_ok = false;
            else
                rate_sum += bw * std::log2(1.0 + gap * s);
        }
        if (!rate_ok)
            continue;

        ++best.feasible_points;
        double eta = rate_sum / (sum + circuit);
        if (eta > best.eta)
        {
            best.eta = eta;
            best.p = p;
        }
    }
    if (best.feasible_points == 0)
        throw std::runtime_error("infeasible at grid resolution");
    return best;
}

int sca_bound_check(const Eigen::VectorXd& s_samples, double a, double b, double slack)
{
    int violations = 0;
    for (Eigen::Index i = 0; i < s_samples.size(); ++i)
    {
        double s = s_samples[i];
        if (a * std::log2(s) + b > std::log2(1.0 + s) + slack)
            ++violations;
    }
    return violations;
}

} // namespace mimoee
