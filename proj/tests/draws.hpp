#pragma once

#include <random>
#include <vector>

#include "ckomit/errors.hpp"
#include "ckomit/stability.hpp"
#include "ckomit/steady_state.hpp"
#include "support.hpp"

namespace ckomit::testing {

struct Draw {
    SystemParams params;
    SteadyState steady;
};

// Stable working points from random two-mode parameters; draws that fail to
// converge or land on an unstable branch are skipped.
inline std::vector<Draw> stable_draws(std::size_t count, std::uint64_t seed, std::size_t* attempts = nullptr) {
    std::mt19937_64 rng(seed);
    SolverOptions o;
    o.multistart = false;
    std::vector<Draw> out;
    std::size_t tries = 0;
    while (out.size() < count && tries < 50 * count) {
        ++tries;
        const SystemParams p = random_two_mode(rng);
        try {
            const SteadyState ss = solve_steady_state(p, o);
            if (is_stable(drift_matrix(ss, p)).stable) out.push_back({p, ss});
        } catch (const NumericalError&) {
        }
    }
    if (attempts) *attempts = tries;
    return out;
}

} // namespace ckomit::testing
