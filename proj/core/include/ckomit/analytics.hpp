#pragma once

#include <optional>
#include <vector>

#include "ckomit/response.hpp"

namespace ckomit {

enum class DetuningSide { red, blue };

// C_eff = g_eff,1^2 / (gamma kappa), or (g_eff,1^2 + g_eff,2^2) / (gamma kappa)
// with two modes. gamma is the first mode's damping.
double effective_cooperativity(const SteadyState& ss, const SystemParams& p, int n_modes);

struct WidthPrediction {
    double width = 0.0;            // Gamma_OMIT, rad/s
    bool window = true;            // false when the predicted width is not positive
    double cooperativity = 0.0;
    double sideband_ratio = 0.0;   // kappa / w_m1
    bool resolved_sideband = true; // kappa / w_m1 <= 0.1
};

struct SlopePrediction {
    double value = 0.0; // K_max, s
    bool divergent = false;
};

// Formula layer, parameterized by C_eff directly.
double omit_width(double gamma, double cooperativity, DetuningSide side);
double dispersion_slope(double gamma, double cooperativity, DetuningSide side);
double width_slope_product(double cooperativity, DetuningSide side);

WidthPrediction omit_width_single(const SteadyState& ss, const SystemParams& p, DetuningSide side);
WidthPrediction omit_width_modes(const SteadyState& ss, const SystemParams& p, DetuningSide side, int n_modes);
SlopePrediction dispersion_slope_max(const SteadyState& ss, const SystemParams& p, DetuningSide side, int n_modes);
double product_invariant(const SteadyState& ss, const SystemParams& p, DetuningSide side, int n_modes);

// t_p' = g^2 / (kappa (gamma - i x) + g^2), x = delta - Delta~_a.
cd normalized_transmission(const SteadyState& ss, const SystemParams& p, double delta);
cd normalized_transmission(double g_eff, double kappa, double gamma, double x);

// g_mm (g_eff,2 / g_eff,1 + g_eff,1 / g_eff,2).
double window_center_shift(const LinearizedCouplings& c);

struct Window {
    double center = 0.0;     // location of the dip floor (parabolic refinement)
    double midpoint = 0.0;   // midpoint of the half-level crossings
    double fwhm = 0.0;
    double floor = 0.0;
    double peak_left = 0.0;
    double peak_right = 0.0;
    double half_level = 0.0;
    double left = 0.0;       // half-level crossings
    double right = 0.0;
};

struct WindowOptions {
    double depth_fraction = 0.1;    // dip depth relative to the lower flanking peak
    double prominence_fraction = 0.05;
    std::size_t min_points = 101;
};

// Windows on eps_r: dips between absorption peaks, half level midway between
// the dip floor and the lower flanking peak.
std::vector<Window> measure_windows(const std::vector<double>& delta, const std::vector<double>& absorption,
                                    const WindowOptions& options = {});
std::vector<Window> measure_fwhm(const ResponseSpectrum& s, const WindowOptions& options = {});

// Largest |d eps_i / d delta| inside [lo, hi], signed.
double max_dispersion_slope(const ResponseSpectrum& s, double lo, double hi);

struct WindowAnalysis {
    std::optional<Window> measured;
    std::size_t window_count = 0;
    WidthPrediction predicted;
    SlopePrediction predicted_slope;
    double product = 0.0;
    double measured_slope = 0.0;
    double measured_product = 0.0;        // predicted Gamma_OMIT * measured slope
    double width_product = 0.0;           // (fwhm / 2) * measured slope
    double width_ratio = 0.0;             // measured fwhm / (2 Gamma_OMIT)
    std::optional<double> predicted_shift; // two modes only
};

WindowAnalysis analyze_window(const ResponseSpectrum& s, const SystemParams& p, DetuningSide side, int n_modes,
                              const WindowOptions& options = {});

} // namespace ckomit
