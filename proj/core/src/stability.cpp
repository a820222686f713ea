#include "ckomit/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ckomit/errors.hpp"

namespace ckomit {

DriftMatrix drift_matrix(const SteadyState& ss, const SystemParams& params) {
    const SystemParams p = params.normalized();
    const auto& g = ss.coupling;
    const auto& d = ss.detuning;
    const double k = p.kappa;
    const double g1 = p.mech[0].damping;
    const double g2 = p.mech[1].damping;
    DriftMatrix a;
    // clang-format off
    a <<  -k,             d.cavity,  0.0,                         0.0,      0.0,                          0.0,
          -d.cavity,      -k,        -2*g.effective[0],           0.0,      -2*g.effective[1],            0.0,
          0.0,            0.0,       -g1,                         d.mech[0], 0.0,                         0.0,
          -2*g.effective[0], 0.0,    -d.mech[0] - 2*g.self[0],    -g1,      -2*g.mutual,                  0.0,
          0.0,            0.0,       0.0,                         0.0,      -g2,                          d.mech[1],
          -2*g.effective[1], 0.0,    -2*g.mutual,                 0.0,      -d.mech[1] - 2*g.self[1],     -g2;
    // clang-format on
    return a;
}

DiffusionMatrix diffusion_matrix(const SystemParams& params, DiffusionConvention convention) {
    const SystemParams p = params.normalized();
    const double scale = convention == DiffusionConvention::doubled ? 2.0 : 1.0;
    DiffusionMatrix d = DiffusionMatrix::Zero();
    d(0, 0) = d(1, 1) = scale * p.kappa;
    for (int k = 0; k < 2; ++k) {
        const double n = 2.0 * p.thermal_occupation(k) + 1.0;
        d(2 + 2 * k, 2 + 2 * k) = d(3 + 2 * k, 3 + 2 * k) = scale * p.mech[k].damping * n;
    }
    return d;
}

std::array<long double, 7> characteristic_polynomial(const Matrix6& m) {
    using LMat = Eigen::Matrix<long double, 6, 6>;
    const LMat a = m.cast<long double>();
    std::array<long double, 7> c{};
    c[0] = 1.0L;
    LMat mk = LMat::Zero();
    for (int k = 1; k <= 6; ++k) {
        mk = a * mk + c[k - 1] * LMat::Identity();
        c[k] = -(a * mk).trace() / static_cast<long double>(k);
    }
    return c;
}

bool routh_hurwitz_stable(const std::array<long double, 7>& c) {
    if (!(c[0] > 0.0L)) return false;
    for (long double v : c)
        if (!(v > 0.0L)) return false; // necessary condition, also rejects NaN
    // Routh table, two rows at a time; rows s^4 .. s^0 derived from the first two.
    std::array<long double, 4> r0{c[0], c[2], c[4], c[6]};
    std::array<long double, 4> r1{c[1], c[3], c[5], 0.0L};
    for (int row = 2; row <= 6; ++row) {
        std::array<long double, 4> next{};
        for (int j = 0; j < 3; ++j) next[j] = (r1[0] * r0[j + 1] - r0[0] * r1[j + 1]) / r1[0];
        if (!(next[0] > 0.0L)) return false;
        r0 = r1;
        r1 = next;
    }
    return true;
}

StabilityReport is_stable(const DriftMatrix& a) {
    if (!a.allFinite()) throw EigenSolverFailure("drift matrix has non-finite entries");
    StabilityReport rep;
    Eigen::EigenSolver<Matrix6> es(a, false);
    if (es.info() != Eigen::Success) throw EigenSolverFailure("eigenvalue iteration did not converge");
    rep.max_real_part = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i) {
        rep.eigenvalues[i] = es.eigenvalues()(i);
        rep.max_real_part = std::max(rep.max_real_part, rep.eigenvalues[i].real());
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](auto x, auto y) {
        return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
    });
    rep.eigen_stable = rep.max_real_part < 0.0;

    // Rescale time so the polynomial coefficients stay O(1); stability is
    // invariant under A -> A / s for s > 0.
    const double s = a.cwiseAbs().maxCoeff();
    const auto c = characteristic_polynomial(s > 0.0 ? Matrix6(a / s) : a);
    for (int i = 0; i < 7; ++i) rep.characteristic[i] = static_cast<double>(c[i]);
    rep.routh_hurwitz = routh_hurwitz_stable(c);
    rep.agree = rep.routh_hurwitz == rep.eigen_stable;
    rep.stable = rep.eigen_stable && rep.routh_hurwitz;
    return rep;
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d, double tolerance) {
    const StabilityReport rep = is_stable(a);
    if (!rep.eigen_stable)
        throw UnstableDrift("drift matrix is not stable; stationary covariance does not exist", rep.max_real_part);

    // vec(AV + VA^T) = (I (x) A + A (x) I) vec(V), column-major vec.
    using Mat36 = Eigen::Matrix<double, 36, 36>;
    using Vec36 = Eigen::Matrix<double, 36, 1>;
    Mat36 k = Mat36::Zero();
    for (int col = 0; col < 6; ++col) {
        k.block<6, 6>(6 * col, 6 * col) += a;
        for (int row = 0; row < 6; ++row) k.block<6, 6>(6 * row, 6 * col) += a(row, col) * Matrix6::Identity();
    }
    Vec36 rhs;
    for (int col = 0; col < 6; ++col)
        for (int row = 0; row < 6; ++row) rhs(6 * col + row) = -d(row, col);

    const Eigen::FullPivLU<Mat36> lu(k);
    Vec36 x = lu.solve(rhs);
    for (int refine = 0; refine < 2; ++refine) x += lu.solve(rhs - k * x);

    CovarianceMatrix out;
    for (int col = 0; col < 6; ++col)
        for (int row = 0; row < 6; ++row) out.v(row, col) = x(6 * col + row);
    out.v = 0.5 * (out.v + out.v.transpose()).eval();

    const double dmax = d.cwiseAbs().maxCoeff();
    const Matrix6 r = a * out.v + out.v * a.transpose() + d;
    const double rmax = r.cwiseAbs().maxCoeff();
    out.residual = dmax > 0.0 ? rmax / dmax : rmax;
    if (!out.v.allFinite() || out.residual > tolerance)
        throw IllConditioned("Lyapunov residual " + std::to_string(out.residual) + " exceeds tolerance");
    return out;
}

} // namespace ckomit
