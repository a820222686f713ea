#include "ckomit/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ckomit/errors.hpp"

namespace ckomit {

namespace {

using State = std::array<cd, 3>; // a0, b10, b20
constexpr cd I{0.0, 1.0};

double max_abs(const State& x) {
    double m = 0.0;
    for (const auto& v : x) m = std::max(m, std::abs(v));
    return m;
}

double distance(const State& x, const State& y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

double relative(double diff, double scale) {
    if (diff == 0.0) return 0.0;
    return scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity();
}

// Direct substitution into the steady-state equations.
State substitute(const SystemParams& p, double eps, const State& x) {
    const Detunings d = effective_detunings(p, x[0], {x[1], x[2]});
    const double a2 = std::norm(x[0]);
    State out;
    out[0] = eps / cd(p.kappa, d.cavity);
    for (int k = 0; k < 2; ++k)
        out[k + 1] = -I * p.mech[k].radiation_pressure * a2 / cd(p.mech[k].damping, d.mech[k]);
    return out;
}

double residual_of(const SystemParams& p, double eps, const State& x) {
    const State fx = substitute(p, eps, x);
    return relative(distance(fx, x), std::max(max_abs(x), max_abs(fx)));
}

struct Attempt {
    State x{};
    bool converged = false;
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity();
    SolverMethod method = SolverMethod::fixed_point;
};

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Vec6 pack(const State& x) {
    Vec6 v;
    for (int i = 0; i < 3; ++i) {
        v(2 * i) = x[i].real();
        v(2 * i + 1) = x[i].imag();
    }
    return v;
}

State unpack(const Vec6& v) {
    State x;
    for (int i = 0; i < 3; ++i) x[i] = cd(v(2 * i), v(2 * i + 1));
    return x;
}

Vec6 newton_residual(const SystemParams& p, double eps, const Vec6& y) {
    return pack(substitute(p, eps, unpack(y))) - y;
}

// Damped Newton on the stacked real system G(y) = F(y) - y.
void newton(const SystemParams& p, double eps, const SolverOptions& o, Attempt& at) {
    Vec6 y = pack(at.x);
    Vec6 g = newton_residual(p, eps, y);
    for (int it = 0; it < 200 && at.iterations < o.max_iterations; ++it) {
        ++at.iterations;
        const double r = residual_of(p, eps, unpack(y));
        if (r <= o.tolerance) {
            at.x = unpack(y);
            at.residual = r;
            at.converged = true;
            at.method = SolverMethod::newton;
            return;
        }
        const double scale = std::max(y.cwiseAbs().maxCoeff(), eps > 0.0 ? 1e-6 * eps / p.kappa : 1e-300);
        Mat6 jac;
        for (int j = 0; j < 6; ++j) {
            const double h = 1e-7 * std::max(std::abs(y(j)), scale);
            Vec6 yp = y, ym = y;
            yp(j) += h;
            ym(j) -= h;
            jac.col(j) = (newton_residual(p, eps, yp) - newton_residual(p, eps, ym)) / (2.0 * h);
        }
        const Vec6 step = jac.fullPivLu().solve(-g);
        if (!step.allFinite()) break;
        double lambda = 1.0;
        const double g0 = g.norm();
        Vec6 trial;
        Vec6 gt;
        for (int ls = 0; ls < 40; ++ls) {
            trial = y + lambda * step;
            gt = newton_residual(p, eps, trial);
            if (gt.allFinite() && gt.norm() < g0) break;
            lambda *= 0.5;
        }
        if (!gt.allFinite()) break;
        if (!(gt.norm() < g0)) {
            // No descent possible; accept if already within tolerance, else give up.
            at.x = unpack(y);
            at.residual = r;
            return;
        }
        y = trial;
        g = gt;
    }
    at.x = unpack(y);
    at.residual = residual_of(p, eps, at.x);
    at.converged = at.residual <= o.tolerance;
    at.method = SolverMethod::newton;
}

Attempt converge(const SystemParams& p, double eps, const State& seed, const SolverOptions& o) {
    Attempt at;
    State x = seed;
    State best = seed;
    double best_res = std::numeric_limits<double>::infinity();
    int last_gain = 0;
    for (int it = 1; it <= o.max_iterations; ++it) {
        at.iterations = it;
        const Detunings d = effective_detunings(p, x[0], {x[1], x[2]});
        State fx;
        fx[0] = eps / cd(p.kappa, d.cavity);
        const double a2 = std::norm(fx[0]);
        for (int k = 0; k < 2; ++k)
            fx[k + 1] = -I * p.mech[k].radiation_pressure * a2 / cd(p.mech[k].damping, d.mech[k]);

        const double r = residual_of(p, eps, x);
        if (!std::isfinite(r)) break;
        if (r <= o.tolerance) {
            at.x = x;
            at.residual = r;
            at.converged = true;
            return at;
        }
        if (r < 0.9 * best_res) {
            best_res = r;
            best = x;
            last_gain = it;
        } else if (it - last_gain > 400) {
            break; // stalled or oscillating
        }
        for (int i = 0; i < 3; ++i) x[i] += o.relaxation * (fx[i] - x[i]);
    }
    at.x = best;
    at.residual = best_res;
    newton(p, eps, o, at);
    return at;
}

SteadyState finish(const SystemParams& p, const Attempt& at) {
    SteadyState s;
    s.a0 = at.x[0];
    s.b0 = {at.x[1], at.x[2]};
    s.detuning = effective_detunings(p, s.a0, s.b0);
    s.coupling = linearized_couplings(p, s.a0, s.b0);
    s.iterations = at.iterations;
    s.residual = at.residual;
    s.method = at.method;
    return s;
}

std::vector<State> seeds(const SystemParams& p, double eps, int count) {
    std::vector<State> out;
    out.push_back({eps / cd(p.kappa, p.detuning), 0.0, 0.0});
    // Rotating the phase of a0 alone is a symmetry of the map, so the seeds
    // also sweep |a0| over (0, eps/kappa] and rotate the phonon amplitudes.
    const double amax = eps / p.kappa;
    for (int j = 0; j < count; ++j) {
        const double mag = amax * (j + 1) / count;
        const cd phase = std::polar(1.0, 2.0 * M_PI * j / count);
        State s;
        s[0] = mag * phase;
        for (int k = 0; k < 2; ++k)
            s[k + 1] = -I * p.mech[k].radiation_pressure * mag * mag /
                       cd(p.mech[k].damping, p.mech[k].frequency) * phase;
        out.push_back(s);
    }
    return out;
}

} // namespace

Detunings effective_detunings(const SystemParams& p, cd a0, const std::array<cd, 2>& b0) {
    const double a2 = std::norm(a0);
    const std::array<double, 2> b2{std::norm(b0[0]), std::norm(b0[1])};
    Detunings d;
    d.cavity = p.detuning + 2.0 * p.three_mode_ck * b2[0] * b2[1];
    for (int k = 0; k < 2; ++k) {
        const auto& m = p.mech[k];
        d.cavity += m.radiation_pressure * 2.0 * b0[k].real() + p.modified_ck(k) * b2[k] +
                    m.generalized_ck * b2[k] * b2[k];
        d.mech[k] = m.frequency + p.modified_ck(k) * a2 + 2.0 * m.generalized_ck * a2 * b2[k] +
                    p.three_mode_ck * (2.0 * a2 + 1.0) * b2[1 - k];
    }
    return d;
}

LinearizedCouplings linearized_couplings(const SystemParams& p, cd a0, const std::array<cd, 2>& b0) {
    const double a = std::abs(a0);
    const std::array<double, 2> b{std::abs(b0[0]), std::abs(b0[1])};
    LinearizedCouplings c;
    for (int k = 0; k < 2; ++k) {
        const auto& m = p.mech[k];
        const double o = b[1 - k];
        c.effective[k] = (m.radiation_pressure + p.modified_ck(k) * b[k] + 2.0 * m.generalized_ck * b[k] * b[k] * b[k] +
                          2.0 * p.three_mode_ck * o * o * b[k]) *
                         a;
        c.self[k] = 2.0 * m.generalized_ck * a * a * b[k] * b[k];
    }
    c.mutual = p.three_mode_ck * (2.0 * a * a + 1.0) * b[0] * b[1];
    return c;
}

double fixed_point_residual(const SystemParams& params, cd a0, const std::array<cd, 2>& b0) {
    const SystemParams p = params.normalized();
    return residual_of(p, p.control_drive(), {a0, b0[0], b0[1]});
}

std::vector<SteadyState> find_steady_states(const SystemParams& params, const SolverOptions& o) {
    const SystemParams p = params.normalized();
    validate(p);
    const double eps = p.control_drive();
    std::vector<SteadyState> found;
    std::vector<State> states;
    int total = 0;
    double worst = 0.0;
    const auto all = seeds(p, eps, o.multistart ? o.seeds : 0);
    for (const auto& seed : all) {
        Attempt at = converge(p, eps, seed, o);
        total += at.iterations;
        worst = std::max(worst, at.residual);
        if (!at.converged) continue;
        bool fresh = true;
        for (const auto& s : states) {
            const double scale = std::max(max_abs(s), max_abs(at.x));
            if (relative(distance(s, at.x), scale) <= o.distinct_tolerance) {
                fresh = false;
                break;
            }
        }
        if (fresh) {
            states.push_back(at.x);
            found.push_back(finish(p, at));
        }
    }
    if (found.empty())
        throw NonConvergence("steady state did not converge from any seed", total, worst);
    return found;
}

SteadyState solve_steady_state(const SystemParams& params, const SolverOptions& o) {
    if (o.branch == BranchPolicy::power_ramp) {
        SteadyState s = follow_power_ramp(params, o);
        if (o.multistart) {
            try {
                s.solutions_found = static_cast<int>(find_steady_states(params, o).size());
            } catch (const NonConvergence&) {
                s.solutions_found = 0;
            }
        }
        return s;
    }
    auto found = find_steady_states(params, o);
    if (found.size() > 1) {
        const std::string what = std::to_string(found.size()) + " distinct steady states";
        throw MultistabilityDetected(what, std::move(found));
    }
    found.front().solutions_found = 1;
    return found.front();
}

SteadyState follow_power_ramp(const SystemParams& params, const SolverOptions& o) {
    const SystemParams p = params.normalized();
    validate(p);
    const double target = p.control_drive();
    SolverOptions local = o;
    local.max_iterations = std::min(o.max_iterations, 60);
    State x{};     // solution at s
    State prev{};  // solution at s - last step, for the secant predictor
    double s = 0.0;
    double last = 0.0;
    double ds = target / 64.0;
    int total = 0;
    while (s < target) {
        const double next = std::min(target, s + ds);
        Attempt at;
        at.x = x;
        if (last > 0.0) {
            const double w = (next - s) / last;
            for (int i = 0; i < 3; ++i) at.x[i] += w * (x[i] - prev[i]);
        }
        newton(p, next, local, at);
        total += at.iterations;
        if (at.converged) {
            prev = x;
            x = at.x;
            last = next - s;
            s = next;
            ds = std::min(ds * 1.5, target / 16.0);
            continue;
        }
        ds *= 0.5;
        if (ds > 1e-7 * target) continue;
        const double ratio = s / target;
        throw NonConvergence("the drive-ramp branch ends at a fold at " + std::to_string(ratio * ratio) +
                                 " of the control power",
                             total, at.residual);
    }
    Attempt at;
    at.x = x;
    at.iterations = total;
    at.residual = residual_of(p, target, x);
    at.converged = true;
    at.method = SolverMethod::continuation;
    if (target == 0.0) at.residual = 0.0;
    return finish(p, at);
}

namespace {

using Phonons = std::array<cd, 2>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;

Phonons phonon_map(const SystemParams& p, double n, const Phonons& b) {
    const Detunings d = effective_detunings(p, cd(std::sqrt(n), 0.0), b);
    Phonons out;
    for (int k = 0; k < 2; ++k) out[k] = -I * p.mech[k].radiation_pressure * n / cd(p.mech[k].damping, d.mech[k]);
    return out;
}

Vec4 pack4(const Phonons& b) { return {b[0].real(), b[0].imag(), b[1].real(), b[1].imag()}; }
Phonons unpack4(const Vec4& v) { return {cd(v(0), v(1)), cd(v(2), v(3))}; }

double phonon_residual(const SystemParams& p, double n, const Phonons& b) {
    const Phonons f = phonon_map(p, n, b);
    double diff = 0.0, scale = 0.0;
    for (int k = 0; k < 2; ++k) {
        diff = std::max(diff, std::abs(f[k] - b[k]));
        scale = std::max({scale, std::abs(f[k]), std::abs(b[k])});
    }
    return relative(diff, scale);
}

// Newton on b - map(b) = 0 at fixed photon number.
bool phonon_newton(const SystemParams& p, double n, Phonons& b, double tol, int& iterations) {
    Vec4 y = pack4(b);
    auto g = [&](const Vec4& v) { return Vec4(pack4(phonon_map(p, n, unpack4(v))) - v); };
    Vec4 gy = g(y);
    for (int it = 0; it < 60; ++it) {
        ++iterations;
        if (phonon_residual(p, n, unpack4(y)) <= tol) {
            b = unpack4(y);
            return true;
        }
        const double scale = std::max(y.cwiseAbs().maxCoeff(), 1e-12);
        Mat4 jac;
        for (int j = 0; j < 4; ++j) {
            const double h = 1e-7 * std::max(std::abs(y(j)), scale);
            Vec4 yp = y, ym = y;
            yp(j) += h;
            ym(j) -= h;
            jac.col(j) = (g(yp) - g(ym)) / (2.0 * h);
        }
        const Vec4 step = jac.fullPivLu().solve(-gy);
        if (!step.allFinite()) return false;
        double lambda = 1.0;
        Vec4 trial, gt;
        for (int ls = 0; ls < 30; ++ls) {
            trial = y + lambda * step;
            gt = g(trial);
            if (gt.allFinite() && gt.norm() < gy.norm()) break;
            lambda *= 0.5;
        }
        if (!gt.allFinite() || !(gt.norm() < gy.norm())) {
            b = unpack4(y);
            return phonon_residual(p, n, b) <= tol;
        }
        y = trial;
        gy = gt;
    }
    b = unpack4(y);
    return phonon_residual(p, n, b) <= tol;
}

// Non-negative real roots of m (gamma^2 + (c0 + c1 m)^2) = q, the single-mode
// phonon number equation with the other mode switched off.
std::vector<double> phonon_numbers(double gamma, double c0, double c1, double q) {
    std::vector<double> out;
    if (q == 0.0) return {0.0};
    if (c1 == 0.0) {
        out.push_back(q / (gamma * gamma + c0 * c0));
        return out;
    }
    // Monic cubic m^3 + a2 m^2 + a1 m + a0.
    const double a2 = 2.0 * c0 / c1;
    const double a1 = (gamma * gamma + c0 * c0) / (c1 * c1);
    const double a0 = -q / (c1 * c1);
    Eigen::Matrix3d companion;
    companion << -a2, -a1, -a0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
    const Eigen::Vector3cd roots = companion.eigenvalues();
    for (int i = 0; i < 3; ++i) {
        const cd r = roots(i);
        if (r.real() > 0.0 && std::abs(r.imag()) <= 1e-6 * std::abs(r)) out.push_back(r.real());
    }
    return out;
}

} // namespace

WorkingPoint solve_at_effective_detuning(const SystemParams& params, double target, const SolverOptions& o) {
    SystemParams p = params.normalized();
    p.detuning = target; // placeholder; only the mechanical detunings are used below
    validate(p);
    const double eps = p.control_drive();
    const double n_target = eps * eps / (p.kappa * p.kappa + target * target);
    const double tol = o.tolerance;

    // Continuation in the photon number from the undriven phonon state.
    Phonons b{};
    Phonons prev{};
    double n = 0.0;
    double last = 0.0;
    double dn = n_target / 32.0;
    int iterations = 0;
    while (n < n_target) {
        const double next = std::min(n_target, n + dn);
        Phonons trial = b;
        if (last > 0.0) {
            const double w = (next - n) / last;
            for (int k = 0; k < 2; ++k) trial[k] += w * (b[k] - prev[k]);
        }
        if (phonon_newton(p, next, trial, tol, iterations)) {
            prev = b;
            b = trial;
            last = next - n;
            n = next;
            dn = std::min(1.5 * dn, n_target / 8.0);
            continue;
        }
        dn *= 0.5;
        if (dn < 1e-9 * n_target)
            throw NonConvergence("the phonon branch folds at " + std::to_string(n / n_target) +
                                     " of the pinned photon number",
                                 iterations, phonon_residual(p, next, trial));
    }

    // Other phonon solutions at the same photon number, seeded from the
    // per-mode cubic roots.
    std::vector<Phonons> distinct{b};
    if (o.multistart) {
        std::array<std::vector<double>, 2> numbers;
        for (int k = 0; k < 2; ++k) {
            const auto& m = p.mech[k];
            const double c0 = m.frequency + p.modified_ck(k) * n_target;
            const double c1 = 2.0 * m.generalized_ck * n_target;
            const double g = m.radiation_pressure * n_target;
            numbers[k] = p.has_mode(k) ? phonon_numbers(m.damping, c0, c1, g * g) : std::vector<double>{0.0};
        }
        for (double m1 : numbers[0])
            for (double m2 : numbers[1]) {
                Phonons seed;
                const std::array<double, 2> ms{m1, m2};
                for (int k = 0; k < 2; ++k) {
                    const auto& m = p.mech[k];
                    const double dm = m.frequency + p.modified_ck(k) * n_target + 2.0 * m.generalized_ck * n_target * ms[k];
                    seed[k] = -I * m.radiation_pressure * n_target / cd(m.damping, dm);
                }
                if (!phonon_newton(p, n_target, seed, tol, iterations)) continue;
                bool fresh = true;
                for (const auto& d : distinct) {
                    const double scale = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(seed[0]), std::abs(seed[1])});
                    const double gap = std::max(std::abs(d[0] - seed[0]), std::abs(d[1] - seed[1]));
                    if (relative(gap, scale) <= o.distinct_tolerance) fresh = false;
                }
                if (fresh) distinct.push_back(seed);
            }
    }

    const cd a0 = eps / cd(p.kappa, target);
    // Each phonon solution pins its own Delta_a.
    auto tune = [&](const Phonons& ph) {
        SystemParams t = p;
        t.detuning = 0.0;
        t.detuning = target - effective_detunings(t, a0, ph).cavity;
        return t;
    };
    auto make = [&](const Phonons& ph) {
        const SystemParams t = tune(ph);
        Attempt at;
        at.x = {a0, ph[0], ph[1]};
        at.iterations = iterations;
        at.residual = residual_of(t, eps, at.x);
        at.converged = true;
        at.method = SolverMethod::continuation;
        return finish(t, at);
    };
    if (distinct.size() > 1 && o.branch == BranchPolicy::unique) {
        std::vector<SteadyState> all;
        for (const auto& ph : distinct) all.push_back(make(ph));
        const std::string what = std::to_string(all.size()) + " phonon solutions at the pinned cavity detuning";
        throw MultistabilityDetected(what, std::move(all));
    }
    WorkingPoint w{tune(b), make(b)};
    w.steady.solutions_found = static_cast<int>(distinct.size());
    return w;
}

WorkingPoint solve_at_mechanical_resonance(const SystemParams& p, double sign, const SolverOptions& o) {
    if (sign != 1.0 && sign != -1.0) throw ValidationError("sign", "expected +1 or -1");
    auto residual = [&](const WorkingPoint& w) { return w.steady.detuning.cavity - sign * w.steady.detuning.mech[0]; };
    double t0 = sign * p.mech[0].frequency;
    WorkingPoint w0 = solve_at_effective_detuning(p, t0, o);
    double f0 = residual(w0);
    double t1 = sign * w0.steady.detuning.mech[0];
    const double scale = p.mech[0].frequency;
    for (int it = 0; it < 50; ++it) {
        WorkingPoint w1 = solve_at_effective_detuning(p, t1, o);
        const double f1 = residual(w1);
        if (std::abs(f1) <= 1e-12 * scale) return w1;
        const double step = f1 - f0 != 0.0 ? f1 * (t1 - t0) / (f1 - f0) : f1;
        t0 = t1;
        f0 = f1;
        t1 -= step;
    }
    throw NonConvergence("mechanical resonance lock did not converge", 50, std::abs(f0) / scale);
}

SystemParams retune_detuning(const SystemParams& p, double target, const SolverOptions& o) {
    return solve_at_effective_detuning(p, target, o).params;
}

MultistabilityDetected::MultistabilityDetected(const std::string& what, std::vector<SteadyState> solutions)
    : NumericalError(what), solutions_(std::make_shared<const std::vector<SteadyState>>(std::move(solutions))) {}

const std::vector<SteadyState>& MultistabilityDetected::solutions() const { return *solutions_; }

} // namespace ckomit
