#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckomit/analytics.hpp"
#include "ckomit/config.hpp"

namespace ckomit {

enum class PointStatus { ok, unstable, multistable, no_convergence, failed };

std::string to_string(PointStatus s);

struct SweepPoint {
    double value = 0.0;  // first axis value (0 without a sweep)
    double value2 = 0.0; // second axis value (0 without one)
    PointStatus status = PointStatus::ok;
    std::string message;
    SystemParams params;
    std::optional<ResponseSpectrum> spectrum; // absent unless status is ok
    bool stable = false;
    int iterations = 0;
    double residual = 0.0;
    std::optional<WindowAnalysis> windows;
};

struct SweepResult {
    std::string name;
    std::optional<SweepSpec> spec;
    std::vector<Output> outputs;
    std::vector<SweepPoint> points; // first axis major, then second axis
};

// One spectrum per sweep point (a single point without a [sweep] section).
// Points run in parallel; the result order does not depend on the thread count.
SweepResult run_sweep(const RunConfig& config, int threads = 1);

// Spectrum for one configuration, honouring its stability policy.
SweepPoint run_point(const RunConfig& config, bool analyze_windows);

} // namespace ckomit
