#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "ckomit/stability.hpp"
#include "ckomit/steady_state.hpp"

namespace ckomit {

struct ResponseCoefficients {
    cd xi0{}, xi1{}, xi2{}, f{};
};

enum class Sideband { lower, upper };

// First-order sideband amplitudes; starred entries are independent unknowns.
struct SidebandAmplitudes {
    cd a{}, a_conj{};
    std::array<cd, 2> b{}, b_conj{};
};

// Probe amplitude used for A-: eps_p at w_c + delta, or 1 when P_p = 0
// (the response is linear, so eps_t does not depend on it).
double probe_scale(const SystemParams& p, double delta);

ResponseCoefficients response_coefficients(const SteadyState& ss, const SystemParams& p, double delta);

cd probe_amplitude_closed_form(const SteadyState& ss, const SystemParams& p, double delta);

SidebandAmplitudes solve_sidebands(const SteadyState& ss, const SystemParams& p, double delta,
                                   Sideband sideband = Sideband::lower);

cd probe_amplitude_linear_solve(const SteadyState& ss, const SystemParams& p, double delta);

// eps_t = 2 kappa A- / eps_p.
cd output_field(const SteadyState& ss, const SystemParams& p, double delta);

// Single movable mirror form; requires the second mode to be decoupled.
cd single_mode_response(const SteadyState& ss, const SystemParams& p, double delta);

struct ProbeGrid {
    std::vector<double> detunings; // rad/s, strictly increasing
    double normalization = 1.0;    // usually w_m1

    static ProbeGrid uniform(double lo, double hi, std::size_t points, double normalization);
    void validate(bool group_delay = true) const;
};

struct ResponsePoint {
    double delta = 0.0;
    ResponseCoefficients coefficients;
    cd a_minus{};
    cd eps{};
    double phase = 0.0;       // unwrapped arg eps_t
    double group_delay = 0.0; // s
};

struct ResponseSpectrum {
    std::vector<ResponsePoint> points;
    double normalization = 1.0;
    SteadyState steady;
    StabilityReport stability;
};

enum class StabilityPolicy {
    require, // throw UnstableDrift for an unstable working point
    report   // compute anyway; the report travels with the spectrum
};

struct SpectrumOptions {
    SolverOptions solver;
    StabilityPolicy stability = StabilityPolicy::require;
    int threads = 1;
};

ResponseSpectrum spectrum(const SystemParams& p, const ProbeGrid& grid, const SpectrumOptions& options = {});

// Spectrum at an already solved working point, gated by options.stability.
ResponseSpectrum spectrum(const WorkingPoint& w, const ProbeGrid& grid, const SpectrumOptions& options = {});

// Spectrum at an already solved working point (no stability gate).
ResponseSpectrum spectrum(const SteadyState& ss, const SystemParams& p, const ProbeGrid& grid, int threads = 1);

std::vector<double> unwrap_phase(std::vector<double> phase);

// d(phase)/d(delta) by three-point differences; one-sided at the ends.
std::vector<double> group_delay(const std::vector<double>& delta, const std::vector<double>& phase);
std::vector<double> group_delay(const ResponseSpectrum& s);

// tau_g at one detuning from a three-point stencil of half-width step.
double group_delay_at(const SteadyState& ss, const SystemParams& p, double delta, double step);

} // namespace ckomit
