// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#include "mimoee/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mimoee
{

namespace
{
void require(bool ok, const std::string& what)
{
    if (!ok)
        throw std::invalid_argument(what);
}
} // namespace

void SolverOptions::validate() const
{
    require(eps_dinkelbach > 0.0, "eps_dinkelbach must be positive");
    require(tol_power > 0.0, "tol_power must be positive");
    require(tol_sca > 0.0, "tol_sca must be positive");
    require(tol_dual > 0.0, "tol_dual must be positive");
    require(max_dinkelbach >= 1, "max_dinkelbach must be >= 1");
    require(max_sca >= 1, "max_sca must be >= 1");
    require(max_subgradient >= 1, "max_subgradient must be >= 1");
    require(gamma_phi > 0.0, "gamma_phi must be positive");
    require(gamma_lambda > 0.0, "gamma_lambda must be positive");
    require(p_floor > 0.0, "p_floor must be positive");
    require(phi_init >= 0.0, "phi_init must be non-negative");
    require(lambda_init >= 0.0, "lambda_init must be non-negative");
    require(lambda_infeasible > 0.0, "lambda_infeasible must be positive");
    require(sinr_clamp > 0.0, "sinr_clamp must be positive");
}

double SystemParams::noise_power_w() const
{
    return std::pow(10.0, (noise_dbm_per_hz + 10.0 * std::log10(bandwidth_hz) - 30.0) / 10.0);
}

double SystemParams::snr_gap() const
{
    return -2.0 / (3.0 * std::log(5.0 * ber_target));
}

double SystemParams::circuit_power_w() const
{
    return antennas * p_antenna_w + p_fix_w + users * p_user_w;
}

void SystemParams::validate() const
{
    require(antennas >= 1, "antennas must be >= 1");
    require(users >= 1, "users must be >= 1");
    require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(shadow_std_db >= 0.0, "shadow_std_db must be non-negative");
    require(p_max_w > 0.0, "p_max_w must be positive");
    require(p_antenna_w > 0.0, "p_antenna_w must be positive");
    require(p_fix_w > 0.0, "p_fix_w must be positive");
    require(p_user_w > 0.0, "p_user_w must be positive");
    require(r_min_bps >= 0.0, "r_min_bps must be non-negative");
    require(ber_target > 0.0 && ber_target < 0.2, "ber_target must be in (0, 0.2)");
    require(cell_radius_m > 0.0, "cell_radius_m must be positive");
    require(min_distance_m > 0.0, "min_distance_m must be positive");
    require(min_distance_m < cell_radius_m, "min_distance_m must be below cell_radius_m");
    require(path_loss_exponent > 0.0, "path_loss_exponent must be positive");
    require(noise_power_w() > 0.0, "derived noise power must be positive");
    solver.validate();
}

} // namespace mimoee
