#pragma once

#include <numbers>

namespace ckomit {

inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kElementaryCharge = 1.602176634e-19; // C
inline constexpr double kBoltzmann = 1.380649e-23;        // J/K
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Frequencies given as f = omega / 2pi enter through here.
constexpr double angular_from_hz(double hz) { return kTwoPi * hz; }

} // namespace ckomit
