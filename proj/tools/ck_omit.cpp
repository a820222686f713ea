// ck-omit: command-line front end for the ckomit library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "ckomit/config.hpp"
#include "ckomit/errors.hpp"
#include "ckomit/export.hpp"
#include "ckomit/parallel.hpp"
#include "ckomit/stability.hpp"
#include "ckomit/sweep.hpp"

namespace {

using namespace ckomit;

enum Exit { ok = 0, io_failure = 1, config_error = 2, numerical_failure = 3, unstable_only = 4 };

struct Args {
    std::string command;
    std::string config;
    std::string out;
    bool json = false;
    std::string svg;
    int threads = 0;
};

// Destination for the main result: --out, then the config's [output] entry, then stdout.
void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    write_text(out, text);
}

std::string main_output(const Args& a, const RunConfig& c, bool json) {
    if (!a.out.empty()) return a.out;
    return json ? c.output.json : c.output.csv;
}

std::string svg_output(const Args& a, const RunConfig& c) { return a.svg.empty() ? c.output.svg : a.svg; }

std::string sibling(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

double spectral_value(const ResponsePoint& q, Output o) {
    switch (o) {
    case Output::eps_r: return q.eps.real();
    case Output::eps_i: return q.eps.imag();
    case Output::phase: return q.phase;
    case Output::group_delay: return q.group_delay;
    case Output::windows: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string label(Output o) {
    switch (o) {
    case Output::eps_r: return "eps_r";
    case Output::eps_i: return "eps_i";
    case Output::phase: return "phase (rad)";
    case Output::group_delay: return "group delay (s)";
    case Output::windows: return "window fwhm (rad/s)";
    }
    return "";
}

int status_exit(const std::vector<SweepPoint>& points) {
    bool unstable = false;
    for (const auto& p : points) {
        if (p.status == PointStatus::ok) {
            // Reported under the stability = report policy.
            unstable = unstable || !p.stable;
            continue;
        }
        if (p.status != PointStatus::unstable) return numerical_failure;
        unstable = true;
    }
    return unstable ? unstable_only : ok;
}

void report_points(const std::vector<SweepPoint>& points) {
    for (const auto& p : points)
        if (p.status != PointStatus::ok)
            std::cerr << fmt::format("ck-omit: point ({}, {}): {}: {}\n", format_number(p.value),
                                     format_number(p.value2), to_string(p.status), p.message);
}

std::string complex_text(std::complex<double> z) {
    const std::string im = format_number(z.imag());
    return format_number(z.real()) + (im.front() == '-' ? " - " + im.substr(1) : " + " + im) + "i";
}

// Aligned "name  value" lines for the text reports.
class Report {
public:
    void add(const std::string& name, double v) { rows_.emplace_back(name, format_number(v)); }
    void add(const std::string& name, const std::string& v) { rows_.emplace_back(name, v); }
    std::string str() const {
        std::size_t w = 0;
        for (const auto& r : rows_) w = std::max(w, r.first.size());
        std::string out;
        for (const auto& [k, v] : rows_) out += fmt::format("{:<{}}  {}\n", k, w, v);
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

std::string circuit_text(const CompiledCircuit& c) {
    Report r;
    const EffectiveCouplings& e = c.effective;
    r.add("cavity_frequency_rad_s", e.cavity_frequency);
    for (int k = 0; k < 2; ++k) {
        const std::string s = std::to_string(k + 1);
        r.add("mech_frequency_" + s + "_rad_s", e.mech_frequency[k]);
        r.add("g0_" + s, e.radiation_pressure[k]);
        r.add("g_ck_" + s, e.cross_kerr[k]);
        r.add("g_ck_generalized_" + s, e.generalized_ck[k]);
        r.add("g_ck_modified_" + s, e.modified_ck(k));
    }
    r.add("g_ck_three_mode", e.three_mode_ck);
    for (int k = 0; k < 2; ++k) {
        const std::string s = std::to_string(k + 1);
        r.add("residual_G2_" + s, e.residual_g2[k]);
        r.add("residual_G4_" + s, e.residual_g4[k]);
    }
    r.add("residual_G4_joint", e.residual_g4_joint);
    r.add("validity_threshold", c.validity.threshold);
    for (const auto& check : c.validity.checks)
        r.add("check " + check.name, fmt::format("{} {}", format_number(check.ratio), check.ok ? "ok" : "VIOLATED"));
    r.add("valid", c.validity.valid() ? "yes" : "no");
    return r.str();
}

std::string steady_state_text(const SteadyState& ss, const SystemParams& p) {
    Report r;
    r.add("detuning_rad_s", p.detuning);
    r.add("a0", complex_text(ss.a0));
    r.add("photon_number", std::norm(ss.a0));
    const int modes = p.modes == ModeCount::two ? 2 : 1;
    for (int k = 0; k < modes; ++k) {
        const std::string s = std::to_string(k + 1);
        r.add("b" + s + "0", complex_text(ss.b0[k]));
        r.add("effective_mech_detuning_" + s, ss.detuning.mech[k]);
        r.add("g_eff_" + s, ss.coupling.effective[k]);
        r.add("g_self_" + s, ss.coupling.self[k]);
    }
    r.add("effective_cavity_detuning", ss.detuning.cavity);
    if (modes == 2) r.add("g_mutual", ss.coupling.mutual);
    r.add("iterations", std::to_string(ss.iterations));
    r.add("residual", ss.residual);
    r.add("solutions_found", std::to_string(ss.solutions_found));
    return r.str();
}

std::string stability_text(const StabilityReport& rep, const CovarianceMatrix* v) {
    Report r;
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
        r.add(fmt::format("eigenvalue_{}", i + 1), complex_text(rep.eigenvalues[i]));
    r.add("max_real_part", rep.max_real_part);
    r.add("eigen_stable", rep.eigen_stable ? "yes" : "no");
    r.add("routh_hurwitz_stable", rep.routh_hurwitz ? "yes" : "no");
    r.add("verdicts_agree", rep.agree ? "yes" : "no");
    r.add("stable", rep.stable ? "yes" : "no");
    std::string out = r.str();
    if (v) {
        Table t;
        for (const char* h : {"xa", "ya", "xb1", "yb1", "xb2", "yb2"}) t.header.push_back(h);
        for (int i = 0; i < 6; ++i) {
            std::vector<std::string> row;
            for (int j = 0; j < 6; ++j) row.push_back(format_number(v->v(i, j)));
            t.rows.push_back(std::move(row));
        }
        out += fmt::format("lyapunov_residual  {}\ncovariance\n", format_number(v->residual)) + to_csv(t);
    }
    return out;
}

int compile_circuit_cmd(const Args& a, const RunConfig& c) {
    if (!c.circuit) throw ConfigError("compile-circuit needs a [circuit] section");
    const CompiledCircuit compiled = compile_circuit(*c.circuit, c.validity_threshold);
    for (const auto& check : compiled.validity.checks)
        if (!check.ok)
            std::cerr << fmt::format("ck-omit: validity check {} fails: ratio {} above {}\n", check.name,
                                     format_number(check.ratio), format_number(compiled.validity.threshold));
    emit(a.json ? circuit_json(compiled) : circuit_text(compiled), main_output(a, c, a.json));
    return ok;
}

int steady_state_cmd(const Args& a, const RunConfig& c) {
    const WorkingPoint w = build_working_point(c);
    emit(a.json ? steady_state_json(w.steady, w.params) : steady_state_text(w.steady, w.params),
         main_output(a, c, a.json));
    return ok;
}

int stability_cmd(const Args& a, const RunConfig& c) {
    const WorkingPoint w = build_working_point(c);
    const DriftMatrix drift = drift_matrix(w.steady, w.params);
    const StabilityReport report = is_stable(drift);
    std::optional<CovarianceMatrix> v;
    if (report.stable) v = solve_lyapunov(drift, diffusion_matrix(w.params, c.diffusion));
    const CovarianceMatrix* cov = v ? &*v : nullptr;
    emit(a.json ? stability_json(report, cov) : stability_text(report, cov), main_output(a, c, a.json));
    return report.stable ? ok : unstable_only;
}

int spectrum_cmd(const Args& a, const RunConfig& c) {
    const SweepPoint p = run_point(c, false);
    report_points({p});
    if (!p.spectrum) return status_exit({p});
    const ResponseSpectrum& s = *p.spectrum;
    emit(a.json ? spectrum_json(s) : to_csv(spectrum_table(s)), main_output(a, c, a.json));
    if (const auto svg = svg_output(a, c); !svg.empty()) {
        Series re{"eps_r", {}, {}}, im{"eps_i", {}, {}};
        for (const auto& q : s.points) {
            const double x = q.delta / s.normalization;
            re.x.push_back(x);
            re.y.push_back(q.eps.real());
            im.x.push_back(x);
            im.y.push_back(q.eps.imag());
        }
        write_text(svg, svg_lines(c.name, "delta / omega_m1", "eps", {re, im}));
    }
    return status_exit({p});
}

SweepResult single_point_result(const RunConfig& c, SweepPoint p) {
    SweepResult r;
    r.name = c.name;
    r.outputs = {Output::windows};
    r.points.push_back(std::move(p));
    return r;
}

int analytics_cmd(const Args& a, const RunConfig& c) {
    SweepPoint p = run_point(c, true);
    report_points({p});
    const int code = status_exit({p});
    const SweepResult r = single_point_result(c, std::move(p));
    emit(a.json ? sweep_json(r) : to_csv(window_table(r)), main_output(a, c, a.json));
    return code;
}

bool has_spectral(const std::vector<Output>& outputs) {
    for (Output o : outputs)
        if (o != Output::windows) return true;
    return false;
}

bool has_windows(const std::vector<Output>& outputs) {
    for (Output o : outputs)
        if (o == Output::windows) return true;
    return false;
}

void sweep_svg(const SweepResult& r, const std::string& path) {
    const bool two_axes = r.spec && r.spec->axis2;
    const std::string axis = r.spec ? r.spec->axis.parameter : "point";
    if (has_spectral(r.outputs)) {
        Output shown = Output::eps_r;
        for (Output o : r.outputs)
            if (o != Output::windows) {
                shown = o;
                break;
            }
        std::vector<double> x;
        for (const auto& p : r.points)
            if (p.spectrum) {
                for (const auto& q : p.spectrum->points) x.push_back(q.delta / p.spectrum->normalization);
                break;
            }
        if (x.empty()) return;
        std::vector<double> y, z;
        for (std::size_t i = 0; i < r.points.size(); ++i) {
            const auto& p = r.points[i];
            y.push_back(two_axes ? static_cast<double>(i) : p.value);
            for (std::size_t j = 0; j < x.size(); ++j)
                z.push_back(p.spectrum ? spectral_value(p.spectrum->points[j], shown)
                                       : std::numeric_limits<double>::quiet_NaN());
        }
        write_text(path, svg_heatmap(r.name + ": " + label(shown), "delta / omega_m1",
                                     two_axes ? "sweep point" : axis, x, y, z));
        return;
    }
    // Window metrics only: FWHM against the first axis, one line per second-axis value.
    std::map<double, Series> lines;
    for (const auto& p : r.points) {
        Series& s = lines[p.value2];
        s.name = two_axes ? fmt::format("{} = {}", r.spec->axis2->parameter, format_number(p.value2)) : "fwhm";
        const bool m = p.windows && p.windows->measured;
        s.x.push_back(p.value);
        s.y.push_back(m ? p.windows->measured->fwhm : std::numeric_limits<double>::quiet_NaN());
    }
    std::vector<Series> series;
    for (auto& [k, s] : lines) series.push_back(std::move(s));
    write_text(path, svg_lines(r.name, axis, label(Output::windows), series));
}

int sweep_cmd(const Args& a, const RunConfig& c) {
    const SweepResult r = run_sweep(c, resolve_threads(a.threads));
    report_points(r.points);
    const std::string out = main_output(a, c, a.json);
    if (a.json) {
        emit(sweep_json(r), out);
    } else if (has_spectral(r.outputs)) {
        emit(to_csv(sweep_table(r)), out);
        if (has_windows(r.outputs)) {
            const std::string w = to_csv(window_table(r));
            if (out.empty()) std::cout << '\n' << w;
            else write_text(sibling(out, "_windows"), w);
        }
    } else {
        emit(to_csv(window_table(r)), out);
    }
    if (const auto svg = svg_output(a, c); !svg.empty()) sweep_svg(r, svg);
    return status_exit(r.points);
}

int run(const Args& a) {
    const RunConfig c = load_config(a.config);
    if (a.command == "compile-circuit") return compile_circuit_cmd(a, c);
    if (a.command == "steady-state") return steady_state_cmd(a, c);
    if (a.command == "stability") return stability_cmd(a, c);
    if (a.command == "spectrum") return spectrum_cmd(a, c);
    if (a.command == "analytics") return analytics_cmd(a, c);
    return sweep_cmd(a, c);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probe response of a driven optomechanical circuit with cross-Kerr couplings", "ck-omit"};
    app.require_subcommand(1, 1);
    Args args;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"compile-circuit", "Compile [circuit] parameters into effective couplings"},
        {"steady-state", "Solve the mean-field working point"},
        {"stability", "Drift-matrix stability and steady-state covariance"},
        {"spectrum", "Probe response over the detuning grid (CSV, or JSON with --json)"},
        {"analytics", "Transparency-window metrics against the analytic predictions"},
        {"sweep", "Spectra over the [sweep] axes"}};
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", args.config, "Configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", args.out, "Output file (default: [output] entry, else stdout)");
        sub->add_flag("--json", args.json, "Write JSON instead of text or CSV");
        sub->add_option("--svg", args.svg, "SVG plot path");
        sub->add_option("--threads", args.threads, "Worker threads (default: CK_OMIT_THREADS, else 1)")
            ->check(CLI::PositiveNumber);
        sub->callback([&args, name = name] { args.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        return run(args);
    } catch (const ConfigError& e) {
        std::cerr << "ck-omit: configuration error: " << e.what() << '\n';
        return config_error;
    } catch (const UnstableDrift& e) {
        std::cerr << "ck-omit: unstable working point: " << e.what() << '\n';
        return unstable_only;
    } catch (const NumericalError& e) {
        std::cerr << "ck-omit: numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const ExportError& e) {
        std::cerr << "ck-omit: " << e.what() << '\n';
        return io_failure;
    } catch (const std::exception& e) {
        std::cerr << "ck-omit: " << e.what() << '\n';
        return io_failure;
    }
}
