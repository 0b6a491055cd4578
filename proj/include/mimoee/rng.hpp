// SPDX-License-Identifier: Apache-2.0
//
// mimoee - downlink massive MIMO energy efficiency simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------

#ifndef MIMOEE_RNG_HPP
#define MIMOEE_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mimoee
{

// Seeded random source. All draws go through explicit transforms of the
// 64-bit engine output so that a given seed produces the same stream on
// every platform (std::normal_distribution et al. are implementation
// defined and would break regression fixtures).
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1), 53-bit resolution
    double uniform()
    {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal, Box-Muller cosine branch (consumes 2 uniforms)
    double normal()
    {
        double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Circularly-symmetric complex normal CN(0,1): real and imaginary
    // parts are independent N(0, 1/2). One Box-Muller pair per draw.
    std::complex<double> cnormal()
    {
        double u1 = 1.0 - uniform();
        double u2 = uniform();
        double r = std::sqrt(-std::log(u1)); // sqrt(-2 ln u) / sqrt(2)
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

  private:
    static constexpr double two_pi = 6.283185307179586476925286766559;
    std::mt19937_64 engine_;
};

} // namespace mimoee

#endif
