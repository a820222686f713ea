#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ckomit/system.hpp"

namespace ckomit {

using cd = std::complex<double>;

struct Detunings {
    double cavity = 0.0;            // Delta~_a
    std::array<double, 2> mech{};   // Delta~_mk
};

struct LinearizedCouplings {
    std::array<double, 2> effective{}; // g_eff,k
    std::array<double, 2> self{};      // g_11, g_22
    double mutual = 0.0;               // g_mm
};

enum class SolverMethod { fixed_point, newton, continuation };

// How solve_steady_state picks a working point.
enum class BranchPolicy {
    unique,    // distinct fixed points from the seed set raise MultistabilityDetected
    power_ramp // follow the state reached by ramping the control drive up from zero
};

struct SteadyState {
    cd a0{};
    std::array<cd, 2> b0{};
    Detunings detuning;
    LinearizedCouplings coupling;
    int iterations = 0;
    double residual = 0.0;
    SolverMethod method = SolverMethod::fixed_point;
    int solutions_found = 1; // distinct fixed points seen by the seed set
};

struct SolverOptions {
    double relaxation = 0.5;
    double tolerance = 1e-12;
    int max_iterations = 10000;
    bool multistart = true;
    int seeds = 8;
    double distinct_tolerance = 1e-6;
    BranchPolicy branch = BranchPolicy::unique;
};

Detunings effective_detunings(const SystemParams& p, cd a0, const std::array<cd, 2>& b0);

LinearizedCouplings linearized_couplings(const SystemParams& p, cd a0, const std::array<cd, 2>& b0);

// Relative max-norm residual of the self-consistency map at (a0, b0).
double fixed_point_residual(const SystemParams& p, cd a0, const std::array<cd, 2>& b0);

// Solve from the decoupled seed; with options.multistart the extra seeds are
// also converged and any distinct fixed point raises MultistabilityDetected.
SteadyState solve_steady_state(const SystemParams& p, const SolverOptions& options = {});

// Natural continuation in the drive amplitude from the undriven state; a fold
// before full drive raises NonConvergence.
SteadyState follow_power_ramp(const SystemParams& p, const SolverOptions& options = {});

// Every distinct fixed point reached from the seed set (primary seed first).
std::vector<SteadyState> find_steady_states(const SystemParams& p, const SolverOptions& options = {});

struct WorkingPoint {
    SystemParams params; // detuning set so that Delta~_a hits the target
    SteadyState steady;
};

// Pin Delta~_a = target. |a0|^2 = eps^2 / (kappa^2 + target^2) is then explicit,
// the phonon amplitudes follow by continuation in |a0|^2 from zero, and Delta_a
// is read off. With BranchPolicy::unique, several phonon solutions at the
// pinned photon number raise MultistabilityDetected.
WorkingPoint solve_at_effective_detuning(const SystemParams& p, double target, const SolverOptions& options = {});

// Delta~_a = sign * Delta~_m1 self-consistently (sign +1 red, -1 blue), found
// by secant iteration on the pinned-detuning solve.
WorkingPoint solve_at_mechanical_resonance(const SystemParams& p, double sign, const SolverOptions& options = {});

// Delta_a for which the working point has Delta~_a = target.
SystemParams retune_detuning(const SystemParams& p, double target, const SolverOptions& options = {});

} // namespace ckomit
