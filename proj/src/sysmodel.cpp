// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "mimoee/sysmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace mimoee
{

std::pair<Eigen::VectorXd, Eigen::VectorXd> draw_large_scale(const SystemParams& params, Rng& rng)
{
    const int k = params.users;
    Eigen::VectorXd beta(k), dist(k);
    const double d0 = params.min_distance_m;
    const double r = params.cell_radius_m;
    for (int i = 0; i < k; ++i)
    {
        // Uniform over the annulus area: d = sqrt(d0^2 + u (R^2 - d0^2))
        double u = rng.uniform();
        double d = std::sqrt(d0 * d0 + u * (r * r - d0 * d0));
        rng.uniform(); // angle; irrelevant for a single BS at the center
        double shadow_db = params.shadow_std_db * rng.normal();
        double psi = std::pow(10.0, shadow_db / 10.0);
        dist[i] = d;
        beta[i] = psi * std::pow(d0 / d, params.path_loss_exponent);
    }
    return {beta, dist};
}

Eigen::MatrixXcd draw_fast_fading(const SystemParams& params, Rng& rng)
{
    Eigen::MatrixXcd h(params.antennas, params.users);
    for (int k = 0; k < params.users; ++k)
        for (int i = 0; i < params.antennas; ++i)
            h(i, k) = rng.cnormal();
    return h;
}

ChannelSet draw_channels(const SystemParams& params, Rng& rng)
{
    ChannelSet cs;
    auto [beta, dist] = draw_large_scale(params, rng);
    cs.beta = std::move(beta);
    cs.distance = std::move(dist);
    cs.h = draw_fast_fading(params, rng);
    cs.g = cs.h;
    for (int k = 0; k < params.users; ++k)
        cs.g.col(k) *= std::sqrt(cs.beta[k]);
    return cs;
}

Beamformers mrt_beamformers(const ChannelSet& channels)
{
    Beamformers b;
    b.w = channels.g;
    for (Eigen::Index k = 0; k < b.w.cols(); ++k)
    {
        double n = b.w.col(k).norm();
        if (n <= 0.0 || !std::isfinite(n))
            throw std::invalid_argument("degenerate channel: zero-norm g for user " +
                                        std::to_string(k));
        b.w.col(k) /= n;
    }
    return b;
}

Eigen::MatrixXd link_gains(const ChannelSet& channels, const Beamformers& beams)
{
    const Eigen::Index k = channels.g.cols();
    Eigen::MatrixXd gains(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            gains(i, j) = std::norm(channels.g.col(i).dot(beams.w.col(j)));
    return gains;
}

Eigen::VectorXd sinr_from_gains(const Eigen::MatrixXd& gains, const PowerVec& p, double noise_w)
{
    const Eigen::Index k = gains.rows();
    Eigen::VectorXd out(k);
    for (Eigen::Index i = 0; i < k; ++i)
    {
        double interf = noise_w;
        for (Eigen::Index u = 0; u < k; ++u)
            if (u != i)
                interf += p[u] * gains(i, u);
        out[i] = p[i] * gains(i, i) / interf;
    }
    return out;
}

Eigen::VectorXd sinr(const SystemParams& params, const ChannelSet& channels,
                     const Beamformers& beams, const PowerVec& p)
{
    return sinr_from_gains(link_gains(channels, beams), p, params.noise_power_w());
}

Eigen::VectorXd rate(const SystemParams& params, const Eigen::VectorXd& sinr_values)
{
    const double gap = params.snr_gap();
    return (params.bandwidth_hz * (1.0 + gap * sinr_values.array()).log2()).matrix();
}

double power_consumption(const SystemParams& params, const PowerVec& p)
{
    return p.sum() + params.circuit_power_w();
}

double energy_efficiency_from_gains(const SystemParams& params, const Eigen::MatrixXd& gains,
                                    const PowerVec& p)
{
    Eigen::VectorXd s = sinr_from_gains(gains, p, params.noise_power_w());
    return rate(params, s).sum() / power_consumption(params, p);
}

double energy_efficiency(const SystemParams& params, const ChannelSet& channels,
                         const Beamformers& beams, const PowerVec& p)
{
    return energy_efficiency_from_gains(params, link_gains(channels, beams), p);
}

} // namespace mimoee
