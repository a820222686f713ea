#include "ckomit/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ckomit/errors.hpp"

namespace ckomit {

namespace {

constexpr cd I{0.0, 1.0};

double interpolate_crossing(double x0, double y0, double x1, double y1, double level) {
    if (y1 == y0) return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

} // namespace

double effective_cooperativity(const SteadyState& ss, const SystemParams& p, int n_modes) {
    double g2 = ss.coupling.effective[0] * ss.coupling.effective[0];
    if (n_modes > 1) g2 += ss.coupling.effective[1] * ss.coupling.effective[1];
    return g2 / (p.mech[0].damping * p.kappa);
}

double omit_width(double gamma, double c, DetuningSide side) {
    return side == DetuningSide::red ? gamma * (1.0 + c) : gamma * (c - 1.0);
}

double dispersion_slope(double gamma, double c, DetuningSide side) {
    if (side == DetuningSide::red) return -(2.0 * c / gamma) / ((1.0 + c) * (1.0 + c));
    const double d = c - 1.0;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return (2.0 * c / gamma) / (d * d);
}

double width_slope_product(double c, DetuningSide side) {
    if (side == DetuningSide::red) return -2.0 * c / (1.0 + c);
    if (c == 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * c / (c - 1.0);
}

WidthPrediction omit_width_modes(const SteadyState& ss, const SystemParams& p, DetuningSide side, int n_modes) {
    WidthPrediction w;
    w.cooperativity = effective_cooperativity(ss, p, n_modes);
    w.width = omit_width(p.mech[0].damping, w.cooperativity, side);
    w.window = w.width > 0.0;
    w.sideband_ratio = p.kappa / p.mech[0].frequency;
    w.resolved_sideband = w.sideband_ratio <= 0.1;
    return w;
}

WidthPrediction omit_width_single(const SteadyState& ss, const SystemParams& p, DetuningSide side) {
    return omit_width_modes(ss, p, side, 1);
}

SlopePrediction dispersion_slope_max(const SteadyState& ss, const SystemParams& p, DetuningSide side, int n_modes) {
    SlopePrediction s;
    s.value = dispersion_slope(p.mech[0].damping, effective_cooperativity(ss, p, n_modes), side);
    s.divergent = !std::isfinite(s.value);
    return s;
}

double product_invariant(const SteadyState& ss, const SystemParams& p, DetuningSide side, int n_modes) {
    return width_slope_product(effective_cooperativity(ss, p, n_modes), side);
}

cd normalized_transmission(double g, double kappa, double gamma, double x) {
    const cd g2 = g * g;
    return g2 / (kappa * (gamma - I * x) + g2);
}

cd normalized_transmission(const SteadyState& ss, const SystemParams& p, double delta) {
    return normalized_transmission(ss.coupling.effective[0], p.kappa, p.mech[0].damping,
                                   delta - ss.detuning.cavity);
}

double window_center_shift(const LinearizedCouplings& c) {
    const double g1 = c.effective[0];
    const double g2 = c.effective[1];
    if (g1 == 0.0 || g2 == 0.0) throw NoShiftDefined("center shift needs both effective couplings nonzero");
    return c.mutual * (g2 / g1 + g1 / g2);
}

std::vector<Window> measure_windows(const std::vector<double>& x, const std::vector<double>& r,
                                    const WindowOptions& o) {
    const std::size_t n = r.size();
    if (x.size() != n) throw ValidationError("spectrum", "detuning and absorption sizes differ");
    if (n < o.min_points)
        throw ValidationError("spectrum", "window measurement needs at least " + std::to_string(o.min_points) +
                                              " points");

    // Significant absorption peaks: positive local maxima with enough prominence.
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(r[i] > r[i - 1] && r[i] >= r[i + 1]) || !(r[i] > 0.0)) continue;
        double left = r[i];
        for (std::size_t j = i; j-- > 0;) {
            if (r[j] > r[i]) break;
            left = std::min(left, r[j]);
        }
        double right = r[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (r[j] > r[i]) break;
            right = std::min(right, r[j]);
        }
        if (r[i] - std::max(left, right) >= o.prominence_fraction * r[i]) peaks.push_back(i);
    }

    std::vector<Window> out;
    for (std::size_t k = 0; k + 1 < peaks.size(); ++k) {
        const std::size_t pl = peaks[k];
        const std::size_t pr = peaks[k + 1];
        const auto it = std::min_element(r.begin() + static_cast<std::ptrdiff_t>(pl),
                                         r.begin() + static_cast<std::ptrdiff_t>(pr) + 1);
        const std::size_t fl = static_cast<std::size_t>(it - r.begin());
        const double lower = std::min(r[pl], r[pr]);
        const double floor = r[fl];
        if (lower - floor < o.depth_fraction * lower) continue;

        Window w;
        w.floor = floor;
        w.peak_left = r[pl];
        w.peak_right = r[pr];
        w.half_level = floor + 0.5 * (lower - floor);
        std::size_t j = fl;
        while (j > pl && r[j] < w.half_level) --j;
        w.left = interpolate_crossing(x[j], r[j], x[j + 1], r[j + 1], w.half_level);
        j = fl;
        while (j < pr && r[j] < w.half_level) ++j;
        w.right = interpolate_crossing(x[j - 1], r[j - 1], x[j], r[j], w.half_level);
        w.fwhm = w.right - w.left;
        w.midpoint = 0.5 * (w.left + w.right);
        w.center = x[fl];
        if (fl > 0 && fl + 1 < n) {
            // Vertex of the parabola through the floor and its neighbours.
            const double x0 = x[fl - 1], x1 = x[fl], x2 = x[fl + 1];
            const double y0 = r[fl - 1], y1 = r[fl], y2 = r[fl + 1];
            const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
            const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
            const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / den;
            if (a > 0.0) w.center = std::clamp(-b / (2.0 * a), x0, x2);
        }
        out.push_back(w);
    }
    if (out.empty()) throw NoWindowDetected("no transparency window above the depth threshold");
    return out;
}

std::vector<Window> measure_fwhm(const ResponseSpectrum& s, const WindowOptions& o) {
    std::vector<double> x, r;
    x.reserve(s.points.size());
    r.reserve(s.points.size());
    for (const auto& p : s.points) {
        x.push_back(p.delta);
        r.push_back(p.eps.real());
    }
    return measure_windows(x, r, o);
}

double max_dispersion_slope(const ResponseSpectrum& s, double lo, double hi) {
    std::vector<double> x, y;
    for (const auto& p : s.points) {
        x.push_back(p.delta);
        y.push_back(p.eps.imag());
    }
    const auto d = group_delay(x, y);
    double best = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= lo && x[i] <= hi && std::abs(d[i]) > std::abs(best)) best = d[i];
    return best;
}

WindowAnalysis analyze_window(const ResponseSpectrum& s, const SystemParams& p, DetuningSide side, int n_modes,
                              const WindowOptions& o) {
    WindowAnalysis a;
    a.predicted = omit_width_modes(s.steady, p, side, n_modes);
    a.predicted_slope = dispersion_slope_max(s.steady, p, side, n_modes);
    a.product = width_slope_product(a.predicted.cooperativity, side);
    if (n_modes > 1) {
        try {
            a.predicted_shift = window_center_shift(s.steady.coupling);
        } catch (const NoShiftDefined&) {
        }
    }
    std::vector<Window> windows;
    try {
        windows = measure_fwhm(s, o);
    } catch (const NoWindowDetected&) {
        return a;
    }
    a.window_count = windows.size();
    // The optomechanical window sits near delta = Delta~_a.
    const double target = s.steady.detuning.cavity;
    const auto best = std::min_element(windows.begin(), windows.end(), [&](const Window& u, const Window& v) {
        return std::abs(u.center - target) < std::abs(v.center - target);
    });
    a.measured = *best;
    a.measured_slope = max_dispersion_slope(s, best->left, best->right);
    a.measured_product = a.predicted.width * a.measured_slope;
    a.width_product = 0.5 * best->fwhm * a.measured_slope;
    if (a.predicted.width > 0.0) a.width_ratio = best->fwhm / (2.0 * a.predicted.width);
    return a;
}

} // namespace ckomit
