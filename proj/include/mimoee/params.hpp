// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_PARAMS_HPP
#define MIMOEE_PARAMS_HPP

#include <cstdint>

namespace mimoee
{

// Tolerances, step sizes and iteration caps of the three-loop solver
// (Dinkelbach outer / SCA middle / subgradient inner).
struct SolverOptions
{
    double eps_dinkelbach = 1e-4; // stop when |sum r - eta*P| <= eps * P * max(eta, 1)
    double tol_power = 1e-4;      // inner loop, max relative power change
    double tol_sca = 1e-4;        // SCA loop, relative power change between rounds
    double tol_dual = 1e-4;       // inner loop, absolute multiplier change
    int max_dinkelbach = 30;      // t1 cap
    int max_sca = 50;             // t2 cap
    int max_subgradient = 2000;   // t3 cap
    double gamma_phi = 0.01;      // step size, total power multiplier
    double gamma_lambda = 0.01;   // step size, per-user rate multipliers
    bool diminishing_steps = false; // use gamma / sqrt(t3) instead of constant steps
    double p_floor = 1e-12;       // W; log-power transform needs p > 0
    double phi_init = 0.1;
    double lambda_init = 0.1;
    double lambda_infeasible = 1e6; // rate constraint declared infeasible past this
    double sinr_clamp = 1e-10;    // floor on Gamma*sinr before the SCA coefficients

    void validate() const; // throws std::invalid_argument
};

// Scalar constants of the single-cell system (Table-I style defaults)
// plus the solver knobs.
struct SystemParams
{
    int antennas = 100;              // M
    int users = 5;                   // K
    double bandwidth_hz = 10e3;      // B
    double noise_dbm_per_hz = -174.0;
    double shadow_std_db = 8.0;      // std-dev of 10*log10(psi)
    double p_max_w = 1.0;            // total transmit power budget per cell
    double p_antenna_w = 1.0;        // P^a
    double p_fix_w = 20.0;           // P^fix
    double p_user_w = 0.1;           // P^ue
    double r_min_bps = 14e3;         // R^min
    double ber_target = 1e-3;        // e_k, shared by all users
    double cell_radius_m = 500.0;
    double min_distance_m = 50.0;    // d_0
    double path_loss_exponent = 3.0; // v
    SolverOptions solver;

    // Noise power in watts over the full band: the dBm/Hz density
    // integrated over B and converted from dBm.
    double noise_power_w() const;

    // SNR gap of the target-BER modulation scheme: -2 / (3 ln(5 e))
    double snr_gap() const;

    // M*P^a + P^fix + K*P^ue
    double circuit_power_w() const;

    void validate() const; // throws std::invalid_argument naming the field
};

} // namespace mimoee

#endif
