#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

#include "ckomit/steady_state.hpp"

namespace ckomit {

// Quadrature ordering: X_a, Y_a, X_b1, Y_b1, X_b2, Y_b2.
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using DriftMatrix = Matrix6;
using DiffusionMatrix = Matrix6;

enum class DiffusionConvention {
    printed, // diag(kappa, kappa, gamma n, ...)
    doubled  // diag(2 kappa, 2 kappa, 2 gamma n, ...)
};

struct StabilityReport {
    std::array<std::complex<double>, 6> eigenvalues{};
    double max_real_part = 0.0;
    std::array<double, 7> characteristic{}; // monic, highest power first, after scaling
    bool eigen_stable = false;
    bool routh_hurwitz = false;
    bool stable = false;
    bool agree = true;
};

struct CovarianceMatrix {
    Matrix6 v = Matrix6::Zero();
    double residual = 0.0; // max|AV + VA^T + D| / max|D|
};

DriftMatrix drift_matrix(const SteadyState& ss, const SystemParams& p);

DiffusionMatrix diffusion_matrix(const SystemParams& p, DiffusionConvention convention = DiffusionConvention::printed);

// Coefficients c0..c6 of det(sI - M), c0 = 1, via Faddeev-LeVerrier in long double.
std::array<long double, 7> characteristic_polynomial(const Matrix6& m);

// Routh array test on a degree-6 polynomial, highest power first.
bool routh_hurwitz_stable(const std::array<long double, 7>& c);

StabilityReport is_stable(const DriftMatrix& a);

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d, double tolerance = 1e-8);

} // namespace ckomit
