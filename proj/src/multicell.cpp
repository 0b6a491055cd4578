// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "mimoee/multicell.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace mimoee
{

namespace
{
constexpr double two_pi = 6.283185307179586476925286766559;
}

std::vector<Eigen::Vector2d> MultiCellParams::cell_centers() const
{
    std::vector<Eigen::Vector2d> centers;
    centers.emplace_back(0.0, 0.0);
    const double ring = ring_radius_factor * cell.cell_radius_m;
    for (int l = 1; l < cells; ++l)
    {
        double angle = two_pi * double(l - 1) / double(cells - 1);
        centers.emplace_back(ring * std::cos(angle), ring * std::sin(angle));
    }
    return centers;
}

void MultiCellParams::validate() const
{
    cell.validate();
    if (cells < 1)
        throw std::invalid_argument("cells must be >= 1");
    if (pilot_power_w <= 0.0)
        throw std::invalid_argument("pilot_power_w must be positive");
    if (tau() < cell.users)
        throw std::invalid_argument("pilot_length must be >= users");
    if (ring_radius_factor <= 0.0)
        throw std::invalid_argument("ring_radius_factor must be positive");
}

MultiCellChannels layout_and_draw(const MultiCellParams& params, Rng& rng)
{
    params.validate();
    const int L = params.cells;
    const int K = params.cell.users;
    const int M = params.cell.antennas;
    const double d0 = params.cell.min_distance_m;
    const double radius = params.cell.cell_radius_m;
    const double v = params.cell.path_loss_exponent;
    const auto centers = params.cell_centers();

    MultiCellChannels mc;
    mc.user_x.resize(L, K);
    mc.user_y.resize(L, K);
    mc.beta.assign(L, Eigen::MatrixXd(L, K));
    mc.distance.assign(L, Eigen::MatrixXd(L, K));
    mc.h.assign(L, std::vector<Eigen::MatrixXcd>(L));
    mc.g.assign(L, std::vector<Eigen::MatrixXcd>(L));

    // Positions and per-link shadowing; at L = 1 this is the
    // single-cell large-scale stream (radius, angle, shadow per user).
    for (int l = 0; l < L; ++l)
    {
        for (int k = 0; k < K; ++k)
        {
            double u = rng.uniform();
            double d_own = std::sqrt(d0 * d0 + u * (radius * radius - d0 * d0));
            double angle = two_pi * rng.uniform();
            double x = centers[l].x() + d_own * std::cos(angle);
            double y = centers[l].y() + d_own * std::sin(angle);
            mc.user_x(l, k) = x;
            mc.user_y(l, k) = y;
            for (int j = 0; j < L; ++j)
            {
                double shadow_db = params.cell.shadow_std_db * rng.normal();
                double psi = std::pow(10.0, shadow_db / 10.0);
                double d = (j == l) ? d_own
                                    : std::hypot(x - centers[j].x(), y - centers[j].y());
                mc.distance[j](l, k) = d;
                mc.beta[j](l, k) = psi * std::pow(d0 / d, v);
            }
        }
    }

    // Fast fading pass, BS-major to match the single-cell stream at L = 1
    for (int j = 0; j < L; ++j)
        for (int l = 0; l < L; ++l)
        {
            Eigen::MatrixXcd h(M, K);
            for (int k = 0; k < K; ++k)
                for (int i = 0; i < M; ++i)
                    h(i, k) = rng.cnormal();
            mc.h[j][l] = h;
            mc.g[j][l] = h;
            for (int k = 0; k < K; ++k)
                mc.g[j][l].col(k) *= std::sqrt(mc.beta[j](l, k));
        }

    // Reuse-1 pilots: first K rows of the tau-point DFT, orthonormal
    const int tau = params.tau();
    mc.pilots.resize(K, tau);
    const double scale = 1.0 / std::sqrt(double(tau));
    for (int k = 0; k < K; ++k)
        for (int t = 0; t < tau; ++t)
            mc.pilots(k, t) = std::polar(scale, -two_pi * double(k) * double(t) / double(tau));

    return mc;
}

void ls_estimate(MultiCellChannels& channels, const MultiCellParams& params, Rng& rng)
{
    const int L = params.cells;
    const int K = params.cell.users;
    const int M = params.cell.antennas;
    const int tau = params.tau();
    const double root_pu = std::sqrt(params.pilot_power_w);
    const double noise_sd = std::sqrt(params.cell.noise_power_w());

    channels.g_est.assign(L, Eigen::MatrixXcd(M, K));
    for (int j = 0; j < L; ++j)
    {
        Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(M, tau);
        for (int l = 0; l < L; ++l)
            y += root_pu * channels.g[j][l] * channels.pilots;
        for (int t = 0; t < tau; ++t)
            for (int i = 0; i < M; ++i)
                y(i, t) += noise_sd * rng.cnormal();
        channels.g_est[j] = y * channels.pilots.adjoint() / root_pu;
    }
    channels.has_estimates = true;
}

std::vector<Eigen::MatrixXcd> multicell_mrt_beams(const MultiCellChannels& channels,
                                                  bool on_estimates)
{
    if (on_estimates && !channels.has_estimates)
        throw std::logic_error("estimates not available, run ls_estimate first");
    const int L = int(channels.g.size());
    std::vector<Eigen::MatrixXcd> beams(L);
    for (int j = 0; j < L; ++j)
    {
        beams[j] = on_estimates ? channels.g_est[j] : channels.g[j][j];
        for (Eigen::Index k = 0; k < beams[j].cols(); ++k)
        {
            double n = beams[j].col(k).norm();
            if (n <= 0.0 || !std::isfinite(n))
                throw std::invalid_argument("degenerate channel: zero-norm beam input");
            beams[j].col(k) /= n;
        }
    }
    return beams;
}

Eigen::MatrixXd multicell_link_gains(const MultiCellChannels& channels,
                                     const std::vector<Eigen::MatrixXcd>& beams,
                                     bool use_estimates)
{
    if (use_estimates && !channels.has_estimates)
        throw std::logic_error("estimates not available, run ls_estimate first");
    const int L = int(channels.g.size());
    const int K = int(channels.g[0][0].cols());
    const int n = L * K;
    Eigen::MatrixXd gains(n, n);
    for (int j = 0; j < L; ++j)
        for (int m = 0; m < K; ++m)
        {
            const int u = j * K + m;
            for (int l = 0; l < L; ++l)
            {
                // Channel between BS l and user (j, m): the true vector,
                // or BS l's pilot-m estimate when designing on estimates.
                const auto chan = use_estimates ? channels.g_est[l].col(m)
                                                : channels.g[l][j].col(m);
                for (int k = 0; k < K; ++k)
                    gains(u, l * K + k) = std::norm(chan.dot(beams[l].col(k)));
            }
        }
    return gains;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd>
multicell_sinr_rate(const MultiCellParams& params, const Eigen::MatrixXd& gains,
                    const PowerVec& p)
{
    PowerControlProblem prob = make_multicell_problem(params, gains);
    Eigen::VectorXd interf = interference(prob, p);
    const Eigen::Index n = p.size();
    Eigen::VectorXd s(n);
    for (Eigen::Index u = 0; u < n; ++u)
        s[u] = p[u] * gains(u, u) / interf[u];
    Eigen::VectorXd r =
        (params.cell.bandwidth_hz * (1.0 + params.cell.snr_gap() * s.array()).log2()).matrix();
    return {s, r};
}

PowerControlProblem make_multicell_problem(const MultiCellParams& params,
                                           const Eigen::MatrixXd& gains)
{
    params.validate();
    const int K = params.cell.users;
    PowerControlProblem prob;
    prob.gains = gains;
    prob.cells = params.cells;
    prob.cell_of.resize(gains.rows());
    for (Eigen::Index u = 0; u < gains.rows(); ++u)
        prob.cell_of[u] = int(u) / K;
    prob.p_max_w = params.cell.p_max_w;
    prob.r_min_bps = params.cell.r_min_bps;
    prob.bandwidth_hz = params.cell.bandwidth_hz;
    prob.gap = params.cell.snr_gap();
    prob.noise_w = params.cell.noise_power_w();
    prob.circuit_power_w = params.cells * params.cell.circuit_power_w();
    prob.opt = params.cell.solver;
    return prob;
}

PowerVec multicell_power_update(const MultiCellParams& params, const Eigen::MatrixXd& gains,
                                const ScaCoefficients& sca, const DualMultipliers& duals,
                                double eta, const Eigen::VectorXd& interf)
{
    return power_step(make_multicell_problem(params, gains), sca, duals, eta, interf);
}

MultiCellAllocation multicell_solve(const MultiCellParams& params,
                                    const MultiCellChannels& channels)
{
    const auto beams = multicell_mrt_beams(channels, true);
    const Eigen::MatrixXd gains = multicell_link_gains(channels, beams, true);
    SolveResult res = dinkelbach_solve(make_multicell_problem(params, gains));

    const int L = params.cells;
    const int K = params.cell.users;
    MultiCellAllocation out;
    out.p = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(res.p.data(), L, K);
    out.lambda = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(res.duals.lambda.data(), L, K);
    out.phi = res.duals.phi;
    out.eta_designed = res.eta;
    out.converged = res.converged;
    out.feasible = res.feasible;
    out.rmin_possibly_infeasible = res.rmin_possibly_infeasible;
    out.dinkelbach_iterations = res.dinkelbach_iterations;
    out.trace = std::move(res.trace);
    return out;
}

double evaluate_on_true(const MultiCellParams& params, const MultiCellChannels& channels,
                        const MultiCellAllocation& allocation)
{
    const auto beams = multicell_mrt_beams(channels, true);
    const Eigen::MatrixXd gains = multicell_link_gains(channels, beams, false);
    const int L = params.cells;
    const int K = params.cell.users;
    PowerVec p(L * K);
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
            p[l * K + k] = allocation.p(l, k);
    auto [s, r] = multicell_sinr_rate(params, gains, p);
    double consumed = p.sum() + L * params.cell.circuit_power_w();
    return r.sum() / consumed;
}

ChannelSet own_cell_channelset(const MultiCellChannels& channels, int j)
{
    ChannelSet cs;
    cs.beta = channels.beta[j].row(j).transpose();
    cs.distance = channels.distance[j].row(j).transpose();
    cs.h = channels.h[j][j];
    cs.g = channels.g[j][j];
    return cs;
}

} // namespace mimoee
