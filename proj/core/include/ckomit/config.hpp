#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ckomit/analytics.hpp"
#include "ckomit/circuit.hpp"
#include "ckomit/response.hpp"
#include "ckomit/stability.hpp"
#include "ckomit/steady_state.hpp"
#include "ckomit/system.hpp"

namespace ckomit {

// A coupling given either in rad/s or as a multiple of g_0 (= g_0,1).
struct CouplingValue {
    double value = 0.0;
    bool relative = false;

    double resolve(double g0) const { return relative ? value * g0 : value; }
};

struct ModeSpec {
    std::optional<double> frequency;       // rad/s
    std::optional<double> frequency_ratio; // w_m2 / w_m1, second mode only
    std::optional<double> damping;
    std::optional<double> rp_coupling;     // second mode defaults to g_0,1
    std::optional<CouplingValue> ck;            // second mode defaults to the first
    std::optional<CouplingValue> ck_generalized;
    std::optional<double> thermal_occupation;
};

struct ModelSpec {
    ModeCount modes = ModeCount::single;
    double control_frequency = 0.0;
    double control_power = 0.0;
    double probe_power = 0.0;
    double kappa = 0.0;
    double temperature = 0.0;
    std::optional<double> detuning;                 // rad/s
    std::optional<double> detuning_ratio;           // Delta_a / w_m1
    std::optional<double> effective_detuning_ratio; // retune so Delta~_a / w_m1 hits this
    std::optional<double> mechanical_resonance;     // +1 / -1: Delta~_a = +-Delta~_m1
    CouplingValue three_mode_ck;
    std::array<ModeSpec, 2> mech{};
};

struct GridSpec {
    double lo = 0.5;
    double hi = 1.5;
    bool normalized = true; // lo/hi in units of w_m1
    std::size_t points = 2001;
};

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

enum class Output { eps_r, eps_i, phase, group_delay, windows };

struct SweepSpec {
    SweepAxis axis;
    std::optional<SweepAxis> axis2;
    std::vector<Output> outputs;
    DetuningSide side = DetuningSide::red;
};

struct OutputSpec {
    std::string csv;
    std::string json;
    std::string svg;
};

struct RunConfig {
    std::string name;
    ModelSpec model;
    std::optional<CircuitParams> circuit;
    double validity_threshold = 0.1;
    GridSpec grid;
    std::optional<SweepSpec> sweep;
    SolverOptions solver;
    StabilityPolicy stability = StabilityPolicy::require;
    DiffusionConvention diffusion = DiffusionConvention::printed;
    WindowOptions windows;
    DetuningSide side = DetuningSide::red;
    OutputSpec output;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Effective parameters before any detuning retune.
SystemParams build_system_unretuned(const RunConfig& config);

// Effective parameters for the configuration (circuit compiled if given,
// detuning retuned if a target is set).
SystemParams build_system(const RunConfig& config);

// Parameters plus the steady state the run uses.
WorkingPoint build_working_point(const RunConfig& config);

ProbeGrid build_grid(const RunConfig& config, const SystemParams& p);

// Sweepable parameter names; apply_parameter rejects anything else.
const std::vector<std::string>& sweep_parameters();
void apply_parameter(RunConfig& config, const std::string& parameter, double value);

std::string to_string(Output o);
std::string to_string(DetuningSide s);

} // namespace ckomit
