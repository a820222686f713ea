#pragma once

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "ckomit/stability.hpp"

namespace ckomit::testing {

// V = int_0^inf e^{As} D e^{A^T s} ds. Gauss-Legendre on a short first panel,
// then repeated doubling V(2t) = V(t) + e^{At} V(t) e^{A^T t}.
inline Matrix6 lyapunov_by_quadrature(const Matrix6& a, const Matrix6& d) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    const double h = norm > 0.0 ? 0.5 / norm : 1.0;
    Matrix6 v = Matrix6::Zero();
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double s : {-x[i], x[i]}) {
            const double t = 0.5 * h * (s + 1.0);
            const Matrix6 e = (a * t).exp();
            v += 0.5 * h * w[i] * e * d * e.transpose();
        }
    }
    Matrix6 e = (a * h).exp();
    for (int it = 0; it < 200; ++it) {
        const Matrix6 tail = e * v * e.transpose();
        v += tail;
        e = (e * e).eval();
        if (tail.cwiseAbs().maxCoeff() <= 1e-20 * v.cwiseAbs().maxCoeff() && e.cwiseAbs().maxCoeff() < 1e-10) break;
    }
    return 0.5 * (v + v.transpose());
}

} // namespace ckomit::testing
