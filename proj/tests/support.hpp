#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "ckomit/constants.hpp"
#include "ckomit/system.hpp"

namespace ckomit::testing {

// Single-mode set used throughout the figures: 50 MHz mechanics, kappa = 1 MHz,
// control at 10 GHz, Delta_a = w_m.
inline SystemParams single_mode(double g0 = -3.3e6, double power = 0.07e-9) {
    SystemParams p;
    p.modes = ModeCount::single;
    p.control_frequency = kTwoPi * 10e9 - kTwoPi * 50e6;
    p.control_power = power;
    p.kappa = 1e6;
    auto& m = p.mech[0];
    m.frequency = kTwoPi * 50e6;
    m.damping = 5e5;
    m.radiation_pressure = g0;
    m.cross_kerr = 0.01 * g0;
    m.generalized_ck = 0.003 * g0;
    p.detuning = m.frequency;
    return p.normalized();
}

inline SystemParams two_mode(double g0 = -3.1e6, double power = 0.09e-9, double ratio = 1.0) {
    SystemParams p;
    p.modes = ModeCount::two;
    p.control_frequency = kTwoPi * 10e9 - kTwoPi * 50e6;
    p.control_power = power;
    p.kappa = 1e6;
    for (int k = 0; k < 2; ++k) {
        auto& m = p.mech[k];
        m.frequency = kTwoPi * 50e6 * (k == 0 ? 1.0 : ratio);
        m.damping = 5e5;
        m.radiation_pressure = g0;
        m.cross_kerr = -0.02 * g0;
        m.generalized_ck = 0.0009 * g0;
    }
    p.three_mode_ck = 0.0018 * g0;
    p.detuning = p.mech[0].frequency;
    return p;
}

// Two-mode parameters with couplings drawn within a decade of the figure scales.
inline SystemParams random_two_mode(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto decade = [&](double scale) { return scale * std::pow(10.0, 2.0 * u(rng) - 1.0); };
    auto sign = [&] { return u(rng) < 0.5 ? -1.0 : 1.0; };
    SystemParams p;
    p.modes = ModeCount::two;
    p.control_frequency = kTwoPi * 10e9;
    p.control_power = decade(0.05e-9);
    p.kappa = decade(1e6);
    p.detuning = kTwoPi * 50e6 * (0.5 + u(rng));
    const double g0 = -decade(3e6);
    for (int k = 0; k < 2; ++k) {
        auto& m = p.mech[k];
        m.frequency = kTwoPi * 50e6 * (0.8 + 0.4 * u(rng));
        m.damping = decade(5e5);
        m.radiation_pressure = k == 0 ? g0 : sign() * decade(3e6);
        m.cross_kerr = sign() * decade(0.01) * g0;
        m.generalized_ck = sign() * decade(0.003) * g0;
    }
    p.three_mode_ck = sign() * decade(0.002) * g0;
    return p;
}

inline double rel_err(std::complex<double> a, std::complex<double> b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel_err(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

} // namespace ckomit::testing
