#include "ckomit/sweep.hpp"

#include <algorithm>

#include "ckomit/errors.hpp"
#include "ckomit/parallel.hpp"

namespace ckomit {

std::string to_string(PointStatus s) {
    switch (s) {
    case PointStatus::ok: return "ok";
    case PointStatus::unstable: return "unstable";
    case PointStatus::multistable: return "multistable";
    case PointStatus::no_convergence: return "no_convergence";
    case PointStatus::failed: return "failed";
    }
    return "?";
}

SweepPoint run_point(const RunConfig& config, bool analyze_windows) {
    SweepPoint point;
    try {
        const WorkingPoint w = build_working_point(config);
        point.params = w.params;
        const ProbeGrid grid = build_grid(config, point.params);
        SpectrumOptions options;
        options.solver = config.solver;
        options.stability = config.stability;
        ResponseSpectrum s = spectrum(w, grid, options);
        point.iterations = s.steady.iterations;
        point.residual = s.steady.residual;
        point.stable = s.stability.stable;
        if (analyze_windows) {
            const int n_modes = point.params.modes == ModeCount::two ? 2 : 1;
            point.windows = analyze_window(s, point.params, config.side, n_modes, config.windows);
        }
        point.spectrum = std::move(s);
    } catch (const UnstableDrift& e) {
        point.status = PointStatus::unstable;
        point.message = e.what();
    } catch (const MultistabilityDetected& e) {
        point.status = PointStatus::multistable;
        point.message = e.what();
    } catch (const NonConvergence& e) {
        point.status = PointStatus::no_convergence;
        point.message = e.what();
        point.iterations = e.iterations();
        point.residual = e.residual();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        point.status = PointStatus::failed;
        point.message = e.what();
    }
    return point;
}

SweepResult run_sweep(const RunConfig& config, int threads) {
    SweepResult result;
    result.name = config.name;
    result.spec = config.sweep;
    result.outputs = config.sweep ? config.sweep->outputs
                                  : std::vector<Output>{Output::eps_r, Output::eps_i, Output::phase, Output::group_delay};
    const bool windows =
        std::find(result.outputs.begin(), result.outputs.end(), Output::windows) != result.outputs.end();

    std::vector<std::pair<double, double>> values;
    if (!config.sweep) {
        values.emplace_back(0.0, 0.0);
    } else {
        const auto& a1 = config.sweep->axis.values;
        const std::vector<double> a2 = config.sweep->axis2 ? config.sweep->axis2->values : std::vector<double>{0.0};
        for (double v1 : a1)
            for (double v2 : a2) values.emplace_back(v1, v2);
    }

    // Parameter errors surface before any work starts.
    std::vector<RunConfig> configs(values.size(), config);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!config.sweep) continue;
        apply_parameter(configs[i], config.sweep->axis.parameter, values[i].first);
        if (config.sweep->axis2) apply_parameter(configs[i], config.sweep->axis2->parameter, values[i].second);
        validate(build_system_unretuned(configs[i]));
    }

    result.points.resize(values.size());
    parallel_for(values.size(), resolve_threads(threads), [&](std::size_t i) {
        SweepPoint point = run_point(configs[i], windows);
        point.value = values[i].first;
        point.value2 = values[i].second;
        result.points[i] = std::move(point);
    });
    return result;
}

} // namespace ckomit
