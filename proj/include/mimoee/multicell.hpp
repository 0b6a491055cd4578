// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_MULTICELL_HPP
#define MIMOEE_MULTICELL_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mimoee/solver.hpp"
#include "mimoee/sysmodel.hpp"

namespace mimoee
{

// L-cell network sharing the single-cell constants. Pilots are reused
// with factor 1: every cell uses the same K orthonormal sequences.
struct MultiCellParams
{
    SystemParams cell;
    int cells = 7;                  // L
    double pilot_power_w = 0.1;     // p^u
    int pilot_length = 0;           // tau in symbols; 0 means tau = K
    double ring_radius_factor = 2.0; // cell centers sit at this multiple of the radius

    int tau() const { return pilot_length > 0 ? pilot_length : cell.users; }
    // Cell 0 at the origin, the rest equally spaced on the ring.
    std::vector<Eigen::Vector2d> cell_centers() const;
    void validate() const;
};

// True channels of every (BS j, cell l, user k) triple plus, after
// ls_estimate, the per-BS pilot estimates. With pilot reuse a BS cannot
// separate same-pilot users, so estimates are indexed by pilot only.
struct MultiCellChannels
{
    // [j][l]: M x K, BS j against the users of cell l
    std::vector<std::vector<Eigen::MatrixXcd>> h;
    std::vector<std::vector<Eigen::MatrixXcd>> g;
    std::vector<Eigen::MatrixXd> beta;     // [j]: L x K
    std::vector<Eigen::MatrixXd> distance; // [j]: L x K
    Eigen::MatrixXd user_x, user_y;        // L x K absolute positions
    Eigen::MatrixXcd pilots;               // K x tau, orthonormal rows
    std::vector<Eigen::MatrixXcd> g_est;   // [j]: M x K, column per pilot
    bool has_estimates = false;
};

// Place users uniformly in their own cell and draw the full cross
// channel tensor. The draw order reduces to the single-cell stream at
// L = 1 (same seed, same channels).
MultiCellChannels layout_and_draw(const MultiCellParams& params, Rng& rng);

// Uplink pilot pass and LS estimation:
//   Y_j = sqrt(p^u) sum_l G_jl Phi + Z_j,   ghat_j = Y_j Phi^H / sqrt(p^u)
// With reuse-1 pilots the pilot-k estimate is sum_l g_jlk plus scaled noise.
void ls_estimate(MultiCellChannels& channels, const MultiCellParams& params, Rng& rng);

// MRT beams per BS, either on the BS's own-cell estimates (the
// contaminated design) or on the true own-cell channels (perfect CSI).
std::vector<Eigen::MatrixXcd> multicell_mrt_beams(const MultiCellChannels& channels,
                                                  bool on_estimates);

// Flattened link gain table over u = j*K + m users and v = l*K + k
// beams: gains(u, v) = |<chan(BS l -> user u), w_v>|^2. When
// use_estimates is set the BS-side estimates stand in for the channels
// (the quantities the solver sees); otherwise true channels (the
// realized quantities).
Eigen::MatrixXd multicell_link_gains(const MultiCellChannels& channels,
                                     const std::vector<Eigen::MatrixXcd>& beams,
                                     bool use_estimates);

// Per-user SINR and rate on a gains view, interference summed over all
// other (cell, user) pairs in the network.
std::pair<Eigen::VectorXd, Eigen::VectorXd>
multicell_sinr_rate(const MultiCellParams& params, const Eigen::MatrixXd& gains,
                    const PowerVec& p);

// The network-level power control view shared with the single-cell
// solver: per-cell budgets, one network eta, circuit power summed over
// cells.
PowerControlProblem make_multicell_problem(const MultiCellParams& params,
                                           const Eigen::MatrixXd& gains);

// Closed-form multi-cell power update (Eq.-14 structure with a per-cell
// total power multiplier).
PowerVec multicell_power_update(const MultiCellParams& params, const Eigen::MatrixXd& gains,
                                const ScaCoefficients& sca, const DualMultipliers& duals,
                                double eta, const Eigen::VectorXd& interf);

struct MultiCellAllocation
{
    Eigen::MatrixXd p;      // L x K transmit powers (W)
    Eigen::MatrixXd lambda; // L x K rate multipliers
    Eigen::VectorXd phi;    // L power multipliers
    double eta_designed = 0.0; // network EE on the estimated channels
    bool converged = false;
    bool feasible = false;
    bool rmin_possibly_infeasible = false;
    int dinkelbach_iterations = 0;
    SolverTrace trace;
};

// Three-loop network solve on the estimated channels (beams and gains
// from the contaminated estimates).
MultiCellAllocation multicell_solve(const MultiCellParams& params,
                                    const MultiCellChannels& channels);

// Re-evaluate a designed allocation on the true channels with the
// designed beams kept fixed; returns the realized network EE.
double evaluate_on_true(const MultiCellParams& params, const MultiCellChannels& channels,
                        const MultiCellAllocation& allocation);

// Own-cell slice (users of cell j against BS j) as a single-cell
// ChannelSet, used for isolated-cell reference solves.
ChannelSet own_cell_channelset(const MultiCellChannels& channels, int j);

} // namespace mimoee

#endif
