#include "ckomit/response.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ckomit/errors.hpp"
#include "ckomit/parallel.hpp"

namespace ckomit {

namespace {

constexpr cd I{0.0, 1.0};

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

double probe_scale(const SystemParams& p, double delta) {
    return p.probe_power > 0.0 ? p.probe_drive(delta) : 1.0;
}

ResponseCoefficients response_coefficients(const SteadyState& ss, const SystemParams& params, double delta) {
    const SystemParams p = params.normalized();
    const auto& g = ss.coupling;
    const auto& d = ss.detuning;
    std::array<cd, 2> m;
    for (int k = 0; k < 2; ++k) {
        const cd gd = p.mech[k].damping - I * delta;
        m[k] = gd * gd + d.mech[k] * (d.mech[k] + 2.0 * g.self[k]);
    }
    const double dd = d.mech[0] * d.mech[1];
    ResponseCoefficients c;
    c.xi0 = m[0] * m[1] - 4.0 * dd * g.mutual * g.mutual;
    c.xi1 = -2.0 * d.mech[0] * g.effective[0] * m[1] + 4.0 * dd * g.effective[1] * g.mutual;
    c.xi2 = -2.0 * d.mech[1] * g.effective[1] * m[0] + 4.0 * dd * g.effective[0] * g.mutual;
    if (c.xi0 == 0.0) throw PoleEncountered("xi0 vanishes", delta);
    c.f = -(c.xi1 * g.effective[0] + c.xi2 * g.effective[1]) / (c.xi0 * (p.kappa - I * (delta + d.cavity)));
    if (!finite(c.f)) throw PoleEncountered("f(delta) is not finite", delta);
    return c;
}

namespace {

cd closed_form(const SteadyState& ss, const SystemParams& p, double delta, cd f) {
    const double da = ss.detuning.cavity;
    const cd den = p.kappa - I * (delta - da) - 2.0 * da * f;
    if (den == 0.0) throw PoleEncountered("A- denominator vanishes", delta);
    return (1.0 + I * f) / den * probe_scale(p, delta);
}

} // namespace

cd probe_amplitude_closed_form(const SteadyState& ss, const SystemParams& p, double delta) {
    return closed_form(ss, p, delta, response_coefficients(ss, p, delta).f);
}

SidebandAmplitudes solve_sidebands(const SteadyState& ss, const SystemParams& params, double delta, Sideband sb) {
    const SystemParams p = params.normalized();
    const auto& g = ss.coupling;
    const auto& d = ss.detuning;
    // The upper-sideband set is the lower one with delta -> -delta and the
    // probe driving the conjugate cavity amplitude.
    const double w = sb == Sideband::lower ? delta : -delta;
    using Mat = Eigen::Matrix<cd, 6, 6>;
    using Vec = Eigen::Matrix<cd, 6, 1>;
    // Unknowns: A, A*, B1, B1*, B2, B2*.
    Mat m = Mat::Zero();
    m(0, 0) = p.kappa + I * (d.cavity - w);
    m(1, 1) = p.kappa - I * (d.cavity + w);
    for (int k = 0; k < 2; ++k) {
        const int b = 2 + 2 * k;
        const int o = 2 + 2 * (1 - k);
        // cavity rows: -+ i g_eff,k (B_k + B_k*)
        m(0, b) += I * g.effective[k];
        m(0, b + 1) += I * g.effective[k];
        m(1, b) -= I * g.effective[k];
        m(1, b + 1) -= I * g.effective[k];
        // mechanical rows
        m(b, b) += p.mech[k].damping + I * (d.mech[k] - w);
        m(b + 1, b + 1) += p.mech[k].damping - I * (d.mech[k] + w);
        const std::array<std::pair<int, double>, 3> drive{
            std::pair{0, g.effective[k]}, std::pair{b, g.self[k]}, std::pair{o, g.mutual}};
        for (const auto& [col, coupling] : drive) {
            m(b, col) += I * coupling;
            m(b, col + 1) += I * coupling;
            m(b + 1, col) -= I * coupling;
            m(b + 1, col + 1) -= I * coupling;
        }
    }
    Vec rhs = Vec::Zero();
    rhs(sb == Sideband::lower ? 0 : 1) = probe_scale(p, delta);
    const Eigen::FullPivLU<Mat> lu(m);
    if (!lu.isInvertible()) throw PoleEncountered("sideband system is singular", delta);
    const Vec x = lu.solve(rhs);
    if (!x.allFinite()) throw PoleEncountered("sideband system is singular", delta);
    SidebandAmplitudes out;
    out.a = x(0);
    out.a_conj = x(1);
    out.b = {x(2), x(4)};
    out.b_conj = {x(3), x(5)};
    return out;
}

cd probe_amplitude_linear_solve(const SteadyState& ss, const SystemParams& p, double delta) {
    return solve_sidebands(ss, p, delta, Sideband::lower).a;
}

cd output_field(const SteadyState& ss, const SystemParams& p, double delta) {
    return 2.0 * p.kappa * probe_amplitude_closed_form(ss, p, delta) / probe_scale(p, delta);
}

cd single_mode_response(const SteadyState& ss, const SystemParams& params, double delta) {
    const SystemParams p = params.normalized();
    if (ss.coupling.effective[1] != 0.0 || ss.coupling.mutual != 0.0)
        throw ValidationError("modes", "single-mode response needs the second mechanical mode decoupled");
    const double dm = ss.detuning.mech[0];
    const double da = ss.detuning.cavity;
    const double ge = ss.coupling.effective[0];
    const double omega2 = dm * dm + 2.0 * ss.coupling.self[0] * dm;
    const cd gd = p.mech[0].damping - I * delta;
    const cd den = (gd * gd + omega2) * (p.kappa - I * (delta + da));
    if (den == 0.0) throw PoleEncountered("single-mode f(delta) has a pole", delta);
    const cd f = 2.0 * dm * ge * ge / den;
    const cd outer = p.kappa - I * (delta - da) - 2.0 * da * f;
    if (outer == 0.0) throw PoleEncountered("single-mode eps_t has a pole", delta);
    return 2.0 * p.kappa * (1.0 + I * f) / outer;
}

ProbeGrid ProbeGrid::uniform(double lo, double hi, std::size_t points, double normalization) {
    ProbeGrid g;
    g.normalization = normalization;
    if (points == 1) {
        g.detunings = {lo};
        return g;
    }
    g.detunings.resize(points);
    for (std::size_t i = 0; i < points; ++i)
        g.detunings[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

void ProbeGrid::validate(bool need_group_delay) const {
    if (detunings.empty()) throw ValidationError("grid", "no detunings");
    if (need_group_delay && detunings.size() < 3)
        throw ValidationError("grid", "group delay needs at least 3 points");
    for (std::size_t i = 0; i < detunings.size(); ++i) {
        if (!std::isfinite(detunings[i])) throw ValidationError("grid", "non-finite detuning");
        if (i > 0 && !(detunings[i] > detunings[i - 1]))
            throw ValidationError("grid", "detunings must be strictly increasing");
    }
    if (!(normalization > 0.0) || !std::isfinite(normalization))
        throw ValidationError("grid", "normalization must be positive");
}

std::vector<double> unwrap_phase(std::vector<double> phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double offset = 0.0;
    for (std::size_t i = 1; i < phase.size(); ++i) {
        const double raw = phase[i];
        const double jump = raw + offset - phase[i - 1];
        offset -= two_pi * std::round(jump / two_pi);
        phase[i] = raw + offset;
    }
    return phase;
}

std::vector<double> group_delay(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) {
        if (n == 2) out[0] = out[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return out;
    }
    // Derivative of the quadratic through three neighbours, evaluated at node j.
    auto lagrange = [&](std::size_t i0, std::size_t j) {
        const double x0 = x[i0], x1 = x[i0 + 1], x2 = x[i0 + 2];
        const double t = x[j];
        return y[i0] * ((t - x1) + (t - x2)) / ((x0 - x1) * (x0 - x2)) +
               y[i0 + 1] * ((t - x0) + (t - x2)) / ((x1 - x0) * (x1 - x2)) +
               y[i0 + 2] * ((t - x0) + (t - x1)) / ((x2 - x0) * (x2 - x1));
    };
    out[0] = lagrange(0, 0);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = lagrange(i - 1, i);
    out[n - 1] = lagrange(n - 3, n - 1);
    return out;
}

std::vector<double> group_delay(const ResponseSpectrum& s) {
    std::vector<double> x, y;
    x.reserve(s.points.size());
    y.reserve(s.points.size());
    for (const auto& pt : s.points) {
        x.push_back(pt.delta);
        y.push_back(pt.phase);
    }
    return group_delay(x, y);
}

ResponseSpectrum spectrum(const SteadyState& ss, const SystemParams& params, const ProbeGrid& grid, int threads) {
    grid.validate(false);
    const SystemParams p = params.normalized();
    ResponseSpectrum out;
    out.normalization = grid.normalization;
    out.steady = ss;
    out.points.resize(grid.detunings.size());
    parallel_for(grid.detunings.size(), threads, [&](std::size_t i) {
        const double delta = grid.detunings[i];
        ResponsePoint& pt = out.points[i];
        pt.delta = delta;
        try {
            pt.coefficients = response_coefficients(ss, p, delta);
            pt.a_minus = closed_form(ss, p, delta, pt.coefficients.f);
        } catch (const PoleEncountered& e) {
            throw PoleEncountered(std::string("grid point ") + std::to_string(i), delta,
                                  static_cast<std::ptrdiff_t>(i));
        }
        pt.eps = 2.0 * p.kappa * pt.a_minus / probe_scale(p, delta);
        pt.phase = std::arg(pt.eps);
    });
    std::vector<double> phase(out.points.size());
    for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = out.points[i].phase;
    phase = unwrap_phase(std::move(phase));
    for (std::size_t i = 0; i < phase.size(); ++i) out.points[i].phase = phase[i];
    if (out.points.size() >= 3) {
        const auto tau = group_delay(grid.detunings, phase);
        for (std::size_t i = 0; i < tau.size(); ++i) out.points[i].group_delay = tau[i];
    } else {
        for (auto& pt : out.points) pt.group_delay = std::nan("");
    }
    return out;
}

ResponseSpectrum spectrum(const SystemParams& params, const ProbeGrid& grid, const SpectrumOptions& options) {
    const SystemParams p = params.normalized();
    validate(p);
    grid.validate(false);
    return spectrum(WorkingPoint{p, solve_steady_state(p, options.solver)}, grid, options);
}

ResponseSpectrum spectrum(const WorkingPoint& w, const ProbeGrid& grid, const SpectrumOptions& options) {
    grid.validate(false);
    const StabilityReport rep = is_stable(drift_matrix(w.steady, w.params));
    if (options.stability == StabilityPolicy::require && !rep.stable)
        throw UnstableDrift("working point is unstable (max Re lambda = " + std::to_string(rep.max_real_part) + ")",
                            rep.max_real_part);
    ResponseSpectrum s = spectrum(w.steady, w.params, grid, options.threads);
    s.stability = rep;
    return s;
}

double group_delay_at(const SteadyState& ss, const SystemParams& p, double delta, double step) {
    ProbeGrid g;
    g.detunings = {delta - step, delta, delta + step};
    const ResponseSpectrum s = spectrum(ss, p, g, 1);
    return s.points[1].group_delay;
}

} // namespace ckomit
