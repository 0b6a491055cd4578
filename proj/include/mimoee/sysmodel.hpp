// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_SYSMODEL_HPP
#define MIMOEE_SYSMODEL_HPP

#include <Eigen/Dense>

#include "mimoee/params.hpp"
#include "mimoee/rng.hpp"

namespace mimoee
{

using PowerVec = Eigen::VectorXd; // per-user transmit power in watts

// One channel realization for a single cell: K users, M antennas.
// Composite channel g = sqrt(beta) * h, column per user.
struct ChannelSet
{
    Eigen::VectorXd beta;     // large-scale gain, linear, K
    Eigen::VectorXd distance; // BS-user distance in meters, K
    Eigen::MatrixXcd h;       // fast fading, M x K, entries CN(0,1)
    Eigen::MatrixXcd g;       // composite channel, M x K
};

// Unit-norm MRT beamforming vectors, column per user.
struct Beamformers
{
    Eigen::MatrixXcd w; // M x K
};

// Large-scale part of a draw: user distances uniform over the annulus
// area between d_0 and the cell radius, log-normal shadow fading,
// beta = psi * (d_0 / d)^v. The in-cell angle is drawn too so that the
// stream matches the planar multi-cell layout.
// Returns (beta, distance).
std::pair<Eigen::VectorXd, Eigen::VectorXd> draw_large_scale(const SystemParams& params, Rng& rng);

// M x K matrix of i.i.d. CN(0,1) fast fading entries, column per user.
Eigen::MatrixXcd draw_fast_fading(const SystemParams& params, Rng& rng);

// Full channel draw: large-scale pass for all users, then fading pass.
ChannelSet draw_channels(const SystemParams& params, Rng& rng);

// w_k = g_k / ||g_k||. Throws on a zero-norm channel.
Beamformers mrt_beamformers(const ChannelSet& channels);

// Link gain table G(i, k) = |<g_i, w_k>|^2 (channel of user i against
// the beam of user k); the diagonal is the useful signal gain.
Eigen::MatrixXd link_gains(const ChannelSet& channels, const Beamformers& beams);

// sinr_i = p_i G(i,i) / (sum_{k != i} p_k G(i,k) + sigma^2)
Eigen::VectorXd sinr_from_gains(const Eigen::MatrixXd& gains, const PowerVec& p, double noise_w);
Eigen::VectorXd sinr(const SystemParams& params, const ChannelSet& channels,
                     const Beamformers& beams, const PowerVec& p);

// r_i = B log2(1 + Gamma * sinr_i)
Eigen::VectorXd rate(const SystemParams& params, const Eigen::VectorXd& sinr_values);

// P = sum p_k + M P^a + P^fix + K P^ue
double power_consumption(const SystemParams& params, const PowerVec& p);

// eta = sum r_k / P in bit/Joule
double energy_efficiency(const SystemParams& params, const ChannelSet& channels,
                         const Beamformers& beams, const PowerVec& p);
double energy_efficiency_from_gains(const SystemParams& params, const Eigen::MatrixXd& gains,
                                    const PowerVec& p);

} // namespace mimoee

#endif
