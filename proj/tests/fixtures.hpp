#pragma once

// Shared parameter sets and a small deterministic generator for the tests.

#include <cstdint>
#include <random>

#include "fluxres/model.hpp"

namespace fluxres::test {

/// Fig. 1 caption: omega_r = 0.5, Q = 5, eps = 0.1, beta = 1, omega_p = 1, C = 1.
inline ResonatorParams fig1_params() {
    ResonatorParams p;
    p.omega_r = 0.5;
    p.q_factor = 5;
    p.epsilon = 0.1;
    p.omega_p = 1;
    p.beta = 1;
    p.capacitance = 1;
    return p;
}

inline SinusoidDrive fig1_drive() { return {0.2, 1.0, 0.0}; }

/// omega_r = 2, omega_p = 2, eps = 0.5, beta = 0.5, Q = 10.
inline ResonatorParams fig3_params() {
    ResonatorParams p;
    p.omega_r = 2;
    p.q_factor = 10;
    p.epsilon = 0.5;
    p.omega_p = 2;
    p.beta = 0.5;
    p.capacitance = 1;
    return p;
}

/// Unpumped, undamped, undriven unit oscillator.
inline ResonatorParams sho_params() {
    ResonatorParams p;
    p.omega_r = 1;
    p.q_factor = 1;
    p.damped = false;
    return p;
}

/// Adiabatic base for the convergence ladder: pump and drive well below omega_r, high Q.
inline ResonatorParams adiabatic_params() {
    ResonatorParams p;
    p.omega_r = 1;
    p.q_factor = 50;
    p.epsilon = 0.1;
    p.omega_p = 0.4;
    p.beta = 0.1;
    return p;
}

/// Random parameter sets that satisfy the positivity bound with margin.
class ParamGenerator {
public:
    explicit ParamGenerator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    ResonatorParams params() {
        for (;;) {
            ResonatorParams p;
            p.omega_r = uniform(0.2, 3.0);
            p.q_factor = uniform(1.0, 100.0);
            p.epsilon = uniform(-0.8, 0.8) * p.omega_r * p.omega_r;
            p.omega_p = uniform(0.05, 20.0);
            p.beta = uniform(0.0, 2.0);
            p.lambda_corr = uniform(-1.0, 1.0);
            p.capacitance = uniform(0.2, 5.0);
            if (omega_squared_lower_bound(p) > 0.05 * p.omega_r * p.omega_r) return p;
        }
    }

    DriveSpec drive() {
        switch (std::uniform_int_distribution<int>(0, 2)(rng_)) {
            case 0: return ZeroDrive{};
            case 1: return SinusoidDrive{uniform(-2, 2), uniform(0, 20), 0.0};
            default: return PowerOfOmegaDrive{uniform(-2, 2), uniform(0, 4)};
        }
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace fluxres::test
