// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_SOLVER_HPP
#define MIMOEE_SOLVER_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "mimoee/sysmodel.hpp"

namespace mimoee
{

// Coefficients of the concave lower bound
//   a log2(s) + b <= log2(1 + s),   s = Gamma * sinr,
// tight at the expansion point. a = 1, b = 0 is the cold-start
// initializer (not a valid bound for small s).
struct ScaCoefficients
{
    Eigen::VectorXd a;
    Eigen::VectorXd b;
};

// a_i = s_i/(1+s_i), b_i = log2(1+s_i) - a_i log2(s_i), with
// s_i = gap * sinr_i clamped from below to `clamp`.
ScaCoefficients sca_update(const Eigen::VectorXd& sinr_values, double gap, double clamp = 1e-10);

// Lagrange multipliers of the dual problem; phi has one entry per cell
// (a single entry in the single-cell problem).
struct DualMultipliers
{
    Eigen::VectorXd phi;    // total-power constraints, >= 0
    Eigen::VectorXd lambda; // per-user rate constraints, >= 0
};

// A coupled power control instance over U users in C cells sharing one
// band: the closed-form power update, the subgradient multiplier
// updates and the Dinkelbach/SCA loops all run on this view. The
// single-cell problem is the C = 1 special case; the multi-cell module
// builds the same view from estimated channels.
struct PowerControlProblem
{
    Eigen::MatrixXd gains;   // U x U, gains(u, v) = |<chan_u, w_v>|^2
    Eigen::VectorXi cell_of; // U, cell index of each user
    int cells = 1;
    double p_max_w = 1.0;    // per-cell total transmit power budget
    double r_min_bps = 0.0;
    double bandwidth_hz = 10e3;
    double gap = 1.0;        // Gamma
    double noise_w = 1.0;
    double circuit_power_w = 1.0; // summed over cells
    SolverOptions opt;

    Eigen::Index n_users() const { return gains.rows(); }
    void validate() const;
};

// Per-user interference plus noise as measured at the user terminals:
// I_u = sum_{v != u} p_v gains(u, v) + sigma^2.
Eigen::VectorXd interference(const PowerControlProblem& prob, const PowerVec& p);

// True per-user rates at powers p given measured interference I.
Eigen::VectorXd rates_given_interference(const PowerControlProblem& prob, const PowerVec& p,
                                         const Eigen::VectorXd& interf);

// Closed-form KKT power update at fixed SCA coefficients, multipliers,
// eta and measured interference:
//   p_u = (lambda_u+1)(B a_u/ln2) /
//         ((B/ln2) sum_{v != u} (lambda_v+1) a_v gains(v,u)/I_v + eta + phi_cell(u))
// clamped to [p_floor, p_max]. Throws "unbounded update" when a
// denominator is not positive (eta = phi = 0 with no cross coupling).
PowerVec power_step(const PowerControlProblem& prob, const ScaCoefficients& sca,
                    const DualMultipliers& duals, double eta, const Eigen::VectorXd& interf);

// Projected subgradient step on the multipliers:
//   phi_c   <- [phi_c + gamma_phi (sum_{u in c} p_u - P^max)]+
//   lambda_u <- [lambda_u + gamma_lambda (R^min - r_u)]+
// With diminishing_steps the step sizes are scaled by 1/sqrt(t3).
void subgradient_step(const PowerControlProblem& prob, DualMultipliers& duals, const PowerVec& p,
                      const Eigen::VectorXd& rate_values, int t3);

struct InnerStatus
{
    bool converged = false;      // power and multiplier changes below tolerance
    bool hit_cap = false;        // t3 cap reached first
    bool violation = false;      // constraints violated at exit
    bool lambda_blowup = false;  // a rate multiplier passed the infeasibility threshold
    int iterations = 0;
};

// Fixed-point loop at fixed (a, b) and eta: measure interference,
// apply the closed-form power update, step the multipliers; p and the
// duals are updated in place (warm started between calls).
InnerStatus inner_solve(const PowerControlProblem& prob, const ScaCoefficients& sca, double eta,
                        PowerVec& p, DualMultipliers& duals);

struct ScaStatus
{
    bool converged = false;
    bool lambda_blowup = false;
    int rounds = 0;
    long inner_iterations = 0;
    InnerStatus last_inner;
    ScaCoefficients sca; // coefficients after the final tightening
};

// SCA rounds at fixed eta, starting from a = 1, b = 0: inner solve,
// re-tighten (a, b) at the resulting SINR, repeat until the relative
// power change between rounds drops below tol_sca.
ScaStatus sca_loop(const PowerControlProblem& prob, double eta, PowerVec& p,
                   DualMultipliers& duals);

// One outer (Dinkelbach) iteration record.
struct DinkelbachIterate
{
    int t1 = 0;
    double eta = 0.0;          // eta used by this round's subtractive problem
    double eta_achieved = 0.0; // rate/power ratio of the round's solution
    double residual = 0.0;     // A = sum r - eta * P at the round's solution
    Eigen::VectorXd p;
    Eigen::VectorXd phi;
    Eigen::VectorXd lambda;
    int sca_rounds = 0;
    long inner_iterations = 0;
    double rate_sum_true = 0.0;      // Eq.-5 rates
    double rate_sum_surrogate = 0.0; // SCA lower-bound rates
};

using SolverTrace = std::vector<DinkelbachIterate>;

struct SolveResult
{
    Eigen::VectorXd p; // flattened per-user powers (W)
    double eta = 0.0;  // achieved energy efficiency of p
    bool converged = false; // residual met within caps and output feasible
    bool feasible = false;  // constraints hold at the output
    bool rmin_possibly_infeasible = false;
    int dinkelbach_iterations = 0;
    DualMultipliers duals;
    SolverTrace trace;
};

// Output feasibility tolerances (fixed contract, used by tests as well).
inline constexpr double feasibility_power_tol_w = 1e-6;
inline constexpr double feasibility_rate_rel = 1e-3;

// Thrown when the Dinkelbach loop exhausts its cap without meeting the
// residual tolerance and without an infeasibility diagnosis.
class SolverError : public std::runtime_error
{
  public:
    SolverError(const std::string& what, SolverTrace trace)
        : std::runtime_error(what), trace(std::move(trace))
    {
    }
    SolverTrace trace;
};

// Full three-loop solve. eta starts at 0; each round maximizes
// sum r - eta P via the SCA/subgradient machinery, then eta is updated
// to the achieved rate/power ratio until the residual vanishes.
SolveResult dinkelbach_solve(const PowerControlProblem& prob);

// Single-cell convenience wrappers on ChannelSet/Beamformers inputs.
PowerControlProblem make_single_cell_problem(const SystemParams& params,
                                             const ChannelSet& channels,
                                             const Beamformers& beams);
SolveResult dinkelbach_solve(const SystemParams& params, const ChannelSet& channels,
                             const Beamformers& beams);

// Spec-level single-cell operation: I_k = sum_{u != k} p_u |<g_k, w_u>|^2 + sigma^2.
Eigen::VectorXd interference_feedback(const SystemParams& params, const ChannelSet& channels,
                                      const Beamformers& beams, const PowerVec& p);

} // namespace mimoee

#endif
