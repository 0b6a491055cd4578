// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "mimoee/solver.hpp"

#include <algorithm>
#include <cmath>

namespace mimoee
{

namespace
{
constexpr double ln2 = 0.69314718055994530942;

double max_rel_change(const PowerVec& next, const PowerVec& prev, double floor)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < next.size(); ++i)
        worst = std::max(worst, std::abs(next[i] - prev[i]) / std::max(prev[i], floor));
    return worst;
}

bool power_budgets_ok(const PowerControlProblem& prob, const PowerVec& p)
{
    Eigen::VectorXd per_cell = Eigen::VectorXd::Zero(prob.cells);
    for (Eigen::Index u = 0; u < p.size(); ++u)
        per_cell[prob.cell_of[u]] += p[u];
    return (per_cell.array() <= prob.p_max_w + feasibility_power_tol_w).all();
}

bool rates_ok(const PowerControlProblem& prob, const Eigen::VectorXd& r)
{
    return (r.array() >= prob.r_min_bps * (1.0 - feasibility_rate_rel)).all();
}
} // namespace

void PowerControlProblem::validate() const
{
    if (gains.rows() != gains.cols())
        throw std::invalid_argument("gains must be square");
    if (cell_of.size() != gains.rows())
        throw std::invalid_argument("cell_of size must match gains");
    if (cells < 1)
        throw std::invalid_argument("cells must be >= 1");
    for (Eigen::Index u = 0; u < cell_of.size(); ++u)
        if (cell_of[u] < 0 || cell_of[u] >= cells)
            throw std::invalid_argument("cell_of entry out of range");
    if (p_max_w <= 0.0 || bandwidth_hz <= 0.0 || gap <= 0.0 || noise_w <= 0.0 ||
        circuit_power_w <= 0.0)
        throw std::invalid_argument("problem scalars must be positive");
    opt.validate();
}

ScaCoefficients sca_update(const Eigen::VectorXd& sinr_values, double gap, double clamp)
{
    ScaCoefficients c;
    const Eigen::Index n = sinr_values.size();
    c.a.resize(n);
    c.b.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        double s = std::max(gap * sinr_values[i], clamp);
        c.a[i] = s / (1.0 + s);
        c.b[i] = std::log2(1.0 + s) - c.a[i] * std::log2(s);
    }
    return c;
}

Eigen::VectorXd interference(const PowerControlProblem& prob, const PowerVec& p)
{
    const Eigen::Index n = p.size();
    Eigen::VectorXd out(n);
    for (Eigen::Index u = 0; u < n; ++u)
    {
        double acc = prob.noise_w;
        for (Eigen::Index v = 0; v < n; ++v)
            if (v != u)
                acc += p[v] * prob.gains(u, v);
        out[u] = acc;
    }
    return out;
}

Eigen::VectorXd rates_given_interference(const PowerControlProblem& prob, const PowerVec& p,
                                         const Eigen::VectorXd& interf)
{
    const Eigen::Index n = p.size();
    Eigen::VectorXd r(n);
    for (Eigen::Index u = 0; u < n; ++u)
        r[u] = prob.bandwidth_hz *
               std::log2(1.0 + prob.gap * p[u] * prob.gains(u, u) / interf[u]);
    return r;
}

PowerVec power_step(const PowerControlProblem& prob, const ScaCoefficients& sca,
                    const DualMultipliers& duals, double eta, const Eigen::VectorXd& interf)
{
    const Eigen::Index n = prob.n_users();
    const double b_ln2 = prob.bandwidth_hz / ln2;
    // weight_v = (lambda_v + 1) a_v / I_v, shared by every target user
    Eigen::VectorXd weight(n);
    for (Eigen::Index v = 0; v < n; ++v)
        weight[v] = (duals.lambda[v] + 1.0) * sca.a[v] / interf[v];

    PowerVec p(n);
    for (Eigen::Index u = 0; u < n; ++u)
    {
        double coupling = 0.0;
        for (Eigen::Index v = 0; v < n; ++v)
            if (v != u)
                coupling += weight[v] * prob.gains(v, u);
        double denom = b_ln2 * coupling + eta + duals.phi[prob.cell_of[u]];
        if (!(denom > 0.0))
            throw std::runtime_error("unbounded update: zero denominator in power update");
        double value = (duals.lambda[u] + 1.0) * b_ln2 * sca.a[u] / denom;
        p[u] = std::clamp(value, prob.opt.p_floor, prob.p_max_w);
    }
    return p;
}

void subgradient_step(const PowerControlProblem& prob, DualMultipliers& duals, const PowerVec& p,
                      const Eigen::VectorXd& rate_values, int t3)
{
    const double scale = prob.opt.diminishing_steps ? 1.0 / std::sqrt(double(t3)) : 1.0;
    Eigen::VectorXd per_cell = Eigen::VectorXd::Zero(prob.cells);
    for (Eigen::Index u = 0; u < p.size(); ++u)
        per_cell[prob.cell_of[u]] += p[u];
    for (int c = 0; c < prob.cells; ++c)
        duals.phi[c] = std::max(0.0, duals.phi[c] +
                                         prob.opt.gamma_phi * scale * (per_cell[c] - prob.p_max_w));
    for (Eigen::Index u = 0; u < rate_values.size(); ++u)
        duals.lambda[u] =
            std::max(0.0, duals.lambda[u] +
                              prob.opt.gamma_lambda * scale * (prob.r_min_bps - rate_values[u]));
}

InnerStatus inner_solve(const PowerControlProblem& prob, const ScaCoefficients& sca, double eta,
                        PowerVec& p, DualMultipliers& duals)
{
    InnerStatus st;
    Eigen::VectorXd last_rates;
    for (int t3 = 1; t3 <= prob.opt.max_subgradient; ++t3)
    {
        st.iterations = t3;
        Eigen::VectorXd interf = interference(prob, p);
        PowerVec p_next = power_step(prob, sca, duals, eta, interf);
        double dp = max_rel_change(p_next, p, prob.opt.p_floor);

        Eigen::VectorXd interf_next = interference(prob, p_next);
        last_rates = rates_given_interference(prob, p_next, interf_next);

        Eigen::VectorXd phi_prev = duals.phi;
        Eigen::VectorXd lambda_prev = duals.lambda;
        subgradient_step(prob, duals, p_next, last_rates, t3);
        double ddual = std::max((duals.phi - phi_prev).cwiseAbs().maxCoeff(),
                                (duals.lambda - lambda_prev).cwiseAbs().maxCoeff());

        p = std::move(p_next);

        if (duals.lambda.maxCoeff() > prob.opt.lambda_infeasible)
        {
            st.lambda_blowup = true;
            st.violation = true;
            return st;
        }
        if (dp < prob.opt.tol_power && ddual < prob.opt.tol_dual)
        {
            st.converged = true;
            return st;
        }
    }
    st.hit_cap = true;
    st.violation = !power_budgets_ok(prob, p) || !rates_ok(prob, last_rates);
    return st;
}

ScaStatus sca_loop(const PowerControlProblem& prob, double eta, PowerVec& p,
                   DualMultipliers& duals)
{
    ScaStatus st;
    const Eigen::Index n = prob.n_users();
    st.sca.a = Eigen::VectorXd::Ones(n);
    st.sca.b = Eigen::VectorXd::Zero(n);
    for (int t2 = 1; t2 <= prob.opt.max_sca; ++t2)
    {
        st.rounds = t2;
        PowerVec p_before = p;
        st.last_inner = inner_solve(prob, st.sca, eta, p, duals);
        st.inner_iterations += st.last_inner.iterations;

        Eigen::VectorXd interf = interference(prob, p);
        Eigen::VectorXd s(n);
        for (Eigen::Index u = 0; u < n; ++u)
            s[u] = p[u] * prob.gains(u, u) / interf[u];
        st.sca = sca_update(s, prob.gap, prob.opt.sinr_clamp);

        if (st.last_inner.lambda_blowup)
        {
            st.lambda_blowup = true;
            return st;
        }
        if (max_rel_change(p, p_before, prob.opt.p_floor) < prob.opt.tol_sca)
        {
            st.converged = true;
            return st;
        }
    }
    return st;
}

SolveResult dinkelbach_solve(const PowerControlProblem& prob)
{
    prob.validate();
    const Eigen::Index n = prob.n_users();

    SolveResult res;
    // Feasible start: the per-cell budget split evenly inside each cell
    Eigen::VectorXi cell_size = Eigen::VectorXi::Zero(prob.cells);
    for (Eigen::Index u = 0; u < n; ++u)
        cell_size[prob.cell_of[u]] += 1;
    res.p.resize(n);
    for (Eigen::Index u = 0; u < n; ++u)
        res.p[u] = prob.p_max_w / double(cell_size[prob.cell_of[u]]);

    res.duals.phi = Eigen::VectorXd::Constant(prob.cells, prob.opt.phi_init);
    res.duals.lambda = Eigen::VectorXd::Constant(n, prob.opt.lambda_init);

    double eta = 0.0;
    bool residual_met = false;
    Eigen::VectorXd final_rates;

    for (int t1 = 1; t1 <= prob.opt.max_dinkelbach; ++t1)
    {
        res.dinkelbach_iterations = t1;
        ScaStatus sca_st = sca_loop(prob, eta, res.p, res.duals);

        Eigen::VectorXd interf = interference(prob, res.p);
        final_rates = rates_given_interference(prob, res.p, interf);
        double rate_sum = final_rates.sum();
        double consumed = res.p.sum() + prob.circuit_power_w;
        double residual = rate_sum - eta * consumed;

        double surrogate = 0.0;
        for (Eigen::Index u = 0; u < n; ++u)
        {
            double s = std::max(prob.gap * res.p[u] * prob.gains(u, u) / interf[u],
                                prob.opt.sinr_clamp);
            surrogate +=
                prob.bandwidth_hz * (sca_st.sca.a[u] * std::log2(s) + sca_st.sca.b[u]);
        }

        DinkelbachIterate it;
        it.t1 = t1;
        it.eta = eta;
        it.eta_achieved = rate_sum / consumed;
        it.residual = residual;
        it.p = res.p;
        it.phi = res.duals.phi;
        it.lambda = res.duals.lambda;
        it.sca_rounds = sca_st.rounds;
        it.inner_iterations = sca_st.inner_iterations;
        it.rate_sum_true = rate_sum;
        it.rate_sum_surrogate = surrogate;
        res.trace.push_back(std::move(it));

        res.eta = rate_sum / consumed;
        if (sca_st.lambda_blowup)
        {
            res.rmin_possibly_infeasible = true;
            break;
        }
        if (std::abs(residual) <= prob.opt.eps_dinkelbach * consumed * std::max(eta, 1.0))
        {
            residual_met = true;
            break;
        }
        eta = res.eta;
    }

    const bool powers_ok = power_budgets_ok(prob, res.p);
    const bool min_rates_ok = rates_ok(prob, final_rates);
    res.feasible = powers_ok && min_rates_ok;
    res.converged = residual_met && res.feasible;
    if (!min_rates_ok)
        res.rmin_possibly_infeasible = true;

    if (!residual_met && !res.rmin_possibly_infeasible)
        throw SolverError("dinkelbach loop did not converge within the iteration cap",
                          res.trace);
    return res;
}

PowerControlProblem make_single_cell_problem(const SystemParams& params,
                                             const ChannelSet& channels, const Beamformers& beams)
{
    params.validate();
    PowerControlProblem prob;
    prob.gains = link_gains(channels, beams);
    prob.cell_of = Eigen::VectorXi::Zero(params.users);
    prob.cells = 1;
    prob.p_max_w = params.p_max_w;
    prob.r_min_bps = params.r_min_bps;
    prob.bandwidth_hz = params.bandwidth_hz;
    prob.gap = params.snr_gap();
    prob.noise_w = params.noise_power_w();
    prob.circuit_power_w = params.circuit_power_w();
    prob.opt = params.solver;
    return prob;
}

SolveResult dinkelbach_solve(const SystemParams& params, const ChannelSet& channels,
                             const Beamformers& beams)
{
    return dinkelbach_solve(make_single_cell_problem(params, channels, beams));
}

Eigen::VectorXd interference_feedback(const SystemParams& params, const ChannelSet& channels,
                                      const Beamformers& beams, const PowerVec& p)
{
    PowerControlProblem prob = make_single_cell_problem(params, channels, beams);
    return interference(prob, p);
}

} // namespace mimoee
