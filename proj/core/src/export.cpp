#include "ckomit/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

#include "ckomit/errors.hpp"

namespace ckomit {

namespace {

using json = nlohmann::ordered_json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(cd z) { return json::array({number(z.real()), number(z.imag())}); }

template <std::size_t N>
json array_json(const std::array<double, N>& a) {
    json out = json::array();
    for (double v : a) out.push_back(number(v));
    return out;
}

json envelope(const std::string& kind) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

json steady_json(const SteadyState& ss) {
    json j;
    j["a0"] = complex_json(ss.a0);
    j["b0"] = json::array({complex_json(ss.b0[0]), complex_json(ss.b0[1])});
    j["effective_cavity_detuning"] = number(ss.detuning.cavity);
    j["effective_mech_detuning"] = array_json(ss.detuning.mech);
    j["g_eff"] = array_json(ss.coupling.effective);
    j["g_self"] = array_json(ss.coupling.self);
    j["g_mutual"] = number(ss.coupling.mutual);
    j["iterations"] = ss.iterations;
    j["residual"] = number(ss.residual);
    j["method"] = ss.method == SolverMethod::newton ? "newton" : "fixed_point";
    return j;
}

json report_json(const StabilityReport& r) {
    json j;
    json eig = json::array();
    for (const auto& e : r.eigenvalues) eig.push_back(complex_json(e));
    j["eigenvalues"] = eig;
    j["max_real_part"] = number(r.max_real_part);
    j["characteristic"] = array_json(r.characteristic);
    j["eigen_stable"] = r.eigen_stable;
    j["routh_hurwitz"] = r.routh_hurwitz;
    j["stable"] = r.stable;
    j["agree"] = r.agree;
    return j;
}

json window_json(const WindowAnalysis& w) {
    json j;
    j["window_count"] = w.window_count;
    if (w.measured) {
        const Window& m = *w.measured;
        j["measured"] = {{"center", number(m.center)},   {"midpoint", number(m.midpoint)},
                         {"fwhm", number(m.fwhm)},       {"floor", number(m.floor)},
                         {"peak_left", number(m.peak_left)}, {"peak_right", number(m.peak_right)},
                         {"left", number(m.left)},       {"right", number(m.right)}};
    } else {
        j["measured"] = nullptr;
    }
    j["predicted_width"] = number(w.predicted.width);
    j["predicted_window"] = w.predicted.window;
    j["cooperativity"] = number(w.predicted.cooperativity);
    j["sideband_ratio"] = number(w.predicted.sideband_ratio);
    j["resolved_sideband"] = w.predicted.resolved_sideband;
    j["predicted_slope"] = number(w.predicted_slope.value);
    j["slope_divergent"] = w.predicted_slope.divergent;
    j["product"] = number(w.product);
    j["measured_slope"] = number(w.measured_slope);
    j["measured_product"] = number(w.measured_product);
    j["width_product"] = number(w.width_product);
    j["width_ratio"] = number(w.width_ratio);
    j["predicted_shift"] = w.predicted_shift ? number(*w.predicted_shift) : json(nullptr);
    return j;
}

json spectrum_body(const ResponseSpectrum& s) {
    json j;
    j["normalization"] = number(s.normalization);
    j["steady_state"] = steady_json(s.steady);
    j["stability"] = report_json(s.stability);
    json delta = json::array(), re = json::array(), im = json::array(), phase = json::array(),
         tau = json::array();
    for (const auto& pt : s.points) {
        delta.push_back(number(pt.delta));
        re.push_back(number(pt.eps.real()));
        im.push_back(number(pt.eps.imag()));
        phase.push_back(number(pt.phase));
        tau.push_back(number(pt.group_delay));
    }
    j["delta_rad_s"] = delta;
    j["re_eps"] = re;
    j["im_eps"] = im;
    j["phase_rad"] = phase;
    j["group_delay_s"] = tau;
    return j;
}

std::string output_column(Output o) {
    switch (o) {
    case Output::eps_r: return "re_eps";
    case Output::eps_i: return "im_eps";
    case Output::phase: return "phase_rad";
    case Output::group_delay: return "group_delay_s";
    case Output::windows: return "";
    }
    return "";
}

double output_value(Output o, const ResponsePoint& pt) {
    switch (o) {
    case Output::eps_r: return pt.eps.real();
    case Output::eps_i: return pt.eps.imag();
    case Output::phase: return pt.phase;
    case Output::group_delay: return pt.group_delay;
    case Output::windows: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::string> axis_header(const SweepResult& r) {
    std::vector<std::string> h;
    if (r.spec) {
        h.push_back(r.spec->axis.parameter);
        if (r.spec->axis2) h.push_back(r.spec->axis2->parameter);
    }
    return h;
}

std::vector<std::string> point_prefix(const SweepResult& r, const SweepPoint& p) {
    std::vector<std::string> row;
    if (r.spec) {
        row.push_back(format_number(p.value));
        if (r.spec->axis2) row.push_back(format_number(p.value2));
    }
    row.push_back(to_string(p.status));
    row.push_back(p.status == PointStatus::ok ? (p.stable ? "1" : "0") : "");
    row.push_back(std::to_string(p.iterations));
    row.push_back(format_number(p.residual));
    return row;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle() {
        if (!(lo <= hi)) lo = 0.0, hi = 1.0;
        if (lo == hi) {
            const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
            lo -= pad;
            hi += pad;
        }
    }
};

constexpr double kWidth = 720, kHeight = 440, kLeft = 90, kRight = 30, kTop = 40, kBottom = 60;

std::string frame(const std::string& title, const std::string& xlabel, const std::string& ylabel, const Range& xr,
                  const Range& yr, double plot_right) {
    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);
    s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     (kLeft + plot_right) / 2, escape_xml(title));
    const double bottom = kHeight - kBottom;
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft,
                     kTop, plot_right - kLeft, bottom - kTop);
    for (int i = 0; i <= 4; ++i) {
        const double f = i / 4.0;
        const double x = kLeft + f * (plot_right - kLeft);
        const double y = bottom - f * (bottom - kTop);
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", x, bottom,
                         bottom + 5);
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n", x, bottom + 18,
                         xr.lo + f * (xr.hi - xr.lo));
        s += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft - 5, kLeft,
                         y);
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n", kLeft - 8, y + 4,
                         yr.lo + f * (yr.hi - yr.lo));
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (kLeft + plot_right) / 2,
                     kHeight - 18, escape_xml(xlabel));
    s += fmt::format("<text x=\"20\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0})\">{1}</text>\n",
                     (kTop + bottom) / 2, escape_xml(ylabel));
    return s;
}

// Piecewise-linear ramp through a few perceptually ordered colours.
std::string ramp(double t) {
    static const double stops[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    int c[3];
    for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    return fmt::format("rgb({},{},{})", c[0], c[1], c[2]);
}

} // namespace

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ExportError("no column '" + name + "'", "");
    return static_cast<std::size_t>(it - header.begin());
}

std::string format_number(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw ExportError("cannot format number", "");
    return std::string(buf, ptr);
}

double parse_cell(const std::string& cell) {
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (cell == "inf") return std::numeric_limits<double>::infinity();
    if (cell == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) throw ExportError("not a number: '" + cell + "'", "");
    return v;
}

std::string to_csv(const Table& t) {
    auto field = [](const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + field(cells[i]);
        return out + "\r\n";
    };
    std::string out = line(t.header);
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw ExportError("row width does not match the header", "");
        out += line(row);
    }
    return out;
}

Table parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
            continue;
        }
        any = true;
        if (c == '"') quoted = true;
        else if (c == ',') record.push_back(std::exchange(cell, {}));
        else if (c == '\r') continue;
        else if (c == '\n') {
            record.push_back(std::exchange(cell, {}));
            records.push_back(std::exchange(record, {}));
            any = false;
        } else cell += c;
    }
    if (quoted) throw ExportError("unterminated quoted field", "");
    if (any || !cell.empty() || !record.empty()) {
        record.push_back(cell);
        records.push_back(record);
    }
    if (records.empty()) throw ExportError("empty CSV", "");
    Table t;
    t.header = records.front();
    t.rows.assign(records.begin() + 1, records.end());
    for (const auto& row : t.rows)
        if (row.size() != t.header.size()) throw ExportError("ragged CSV row", "");
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.empty()) throw ExportError("empty output path", "");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExportError("cannot open for writing", path.string());
    out << text;
    out.flush();
    if (!out) throw ExportError("write failed", path.string());
}

void write_csv(const std::filesystem::path& path, const Table& t) { write_text(path, to_csv(t)); }

Table read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExportError("cannot open for reading", path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_csv(buf.str());
    } catch (const ExportError& e) {
        throw ExportError(e.what(), path.string());
    }
}

Table spectrum_table(const ResponseSpectrum& s) {
    Table t;
    t.header = {"delta_rad_s", "delta_norm", "re_eps", "im_eps", "abs_eps", "phase_rad", "group_delay_s"};
    for (const auto& pt : s.points)
        t.rows.push_back({format_number(pt.delta), format_number(pt.delta / s.normalization),
                          format_number(pt.eps.real()), format_number(pt.eps.imag()), format_number(std::abs(pt.eps)),
                          format_number(pt.phase), format_number(pt.group_delay)});
    return t;
}

Table sweep_table(const SweepResult& r) {
    std::vector<Output> spectral;
    for (Output o : r.outputs)
        if (o != Output::windows) spectral.push_back(o);
    if (spectral.empty()) throw ExportError("no spectral outputs selected", "");
    Table t;
    t.header = axis_header(r);
    for (const char* h : {"status", "stable", "iterations", "residual", "delta_rad_s", "delta_norm"}) t.header.push_back(h);
    for (Output o : spectral) t.header.push_back(output_column(o));
    for (const auto& p : r.points) {
        const auto prefix = point_prefix(r, p);
        if (!p.spectrum) {
            auto row = prefix;
            row.resize(t.header.size());
            t.rows.push_back(std::move(row));
            continue;
        }
        for (const auto& pt : p.spectrum->points) {
            auto row = prefix;
            row.push_back(format_number(pt.delta));
            row.push_back(format_number(pt.delta / p.spectrum->normalization));
            for (Output o : spectral) row.push_back(format_number(output_value(o, pt)));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

Table window_table(const SweepResult& r) {
    Table t;
    t.header = axis_header(r);
    for (const char* h : {"status", "stable", "iterations", "residual", "window_count", "center_rad_s", "fwhm_rad_s",
                          "floor", "predicted_width_rad_s", "width_ratio", "cooperativity", "measured_slope_s",
                          "predicted_slope_s", "measured_product", "width_product", "predicted_product", "predicted_shift_rad_s"})
        t.header.push_back(h);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : r.points) {
        auto row = point_prefix(r, p);
        if (!p.windows) {
            row.resize(t.header.size());
            t.rows.push_back(std::move(row));
            continue;
        }
        const WindowAnalysis& w = *p.windows;
        const bool m = w.measured.has_value();
        row.push_back(std::to_string(w.window_count));
        for (double v : {m ? w.measured->center : nan, m ? w.measured->fwhm : nan, m ? w.measured->floor : nan,
                         w.predicted.width, m ? w.width_ratio : nan, w.predicted.cooperativity,
                         m ? w.measured_slope : nan, w.predicted_slope.value, m ? w.measured_product : nan,
                         m ? w.width_product : nan, w.product,
                         w.predicted_shift.value_or(nan)})
            row.push_back(format_number(v));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string circuit_json(const CompiledCircuit& c) {
    json j = envelope("circuit");
    j["fields"] = {{"transverse", array_json(c.fields.transverse)},
                   {"longitudinal", array_json(c.fields.longitudinal)},
                   {"magnitude", number(c.fields.magnitude)}};
    const BareCouplings& b = c.bare;
    j["bare"] = {{"mech_coupling", array_json(b.mech_coupling)},
                 {"cavity_coupling", array_json(b.cavity_coupling)},
                 {"static_force", number(b.static_force)},
                 {"cavity_stark", number(b.cavity_stark)},
                 {"mech_stark", number(b.mech_stark)},
                 {"radiation_pressure", number(b.radiation_pressure)},
                 {"cross_kerr", number(b.cross_kerr)},
                 {"cubic", number(b.cubic)},
                 {"quartic", number(b.quartic)},
                 {"quartic_cavity", array_json(b.quartic_cavity)}};
    j["renormalized"] = {{"cavity", number(c.frequencies.cavity)}, {"mech", array_json(c.frequencies.mech)}};
    const EffectiveCouplings& e = c.effective;
    j["effective"] = {{"cavity_frequency", number(e.cavity_frequency)},
                      {"mech_frequency", array_json(e.mech_frequency)},
                      {"radiation_pressure", array_json(e.radiation_pressure)},
                      {"cross_kerr", array_json(e.cross_kerr)},
                      {"generalized_ck", array_json(e.generalized_ck)},
                      {"three_mode_ck", number(e.three_mode_ck)},
                      {"cubic", array_json(e.cubic)},
                      {"cubic_mixed", array_json(e.cubic_mixed)},
                      {"residual_g1", array_json(e.residual_g1)},
                      {"residual_g2", array_json(e.residual_g2)},
                      {"residual_g3", array_json(e.residual_g3)},
                      {"residual_g3_mixed", array_json(e.residual_g3_mixed)},
                      {"residual_g4", array_json(e.residual_g4)},
                      {"residual_g4_joint", number(e.residual_g4_joint)}};
    json checks = json::array();
    for (const auto& ch : c.validity.checks)
        checks.push_back({{"name", ch.name}, {"ratio", number(ch.ratio)}, {"ok", ch.ok}});
    j["validity"] = {{"threshold", c.validity.threshold}, {"valid", c.validity.valid()}, {"checks", checks}};
    return j.dump(2) + "\n";
}

std::string steady_state_json(const SteadyState& ss, const SystemParams& p) {
    json j = envelope("steady_state");
    j["modes"] = p.modes == ModeCount::two ? 2 : 1;
    j["detuning"] = number(p.detuning);
    j["control_drive"] = number(p.control_drive());
    j["steady_state"] = steady_json(ss);
    return j.dump(2) + "\n";
}

std::string stability_json(const StabilityReport& r, const CovarianceMatrix* covariance) {
    json j = envelope("stability");
    j["report"] = report_json(r);
    if (covariance) {
        json rows = json::array();
        for (int i = 0; i < 6; ++i) {
            json row = json::array();
            for (int k = 0; k < 6; ++k) row.push_back(number(covariance->v(i, k)));
            rows.push_back(row);
        }
        j["covariance"] = rows;
        j["lyapunov_residual"] = number(covariance->residual);
    }
    return j.dump(2) + "\n";
}

std::string spectrum_json(const ResponseSpectrum& s) {
    json j = envelope("spectrum");
    j.update(spectrum_body(s));
    return j.dump(2) + "\n";
}

std::string sweep_json(const SweepResult& r) {
    json j = envelope("sweep");
    j["name"] = r.name;
    if (r.spec) {
        j["parameter"] = r.spec->axis.parameter;
        if (r.spec->axis2) j["parameter2"] = r.spec->axis2->parameter;
        j["side"] = to_string(r.spec->side);
    }
    json outs = json::array();
    for (Output o : r.outputs) outs.push_back(to_string(o));
    j["outputs"] = outs;
    json points = json::array();
    for (const auto& p : r.points) {
        json pj;
        pj["value"] = number(p.value);
        if (r.spec && r.spec->axis2) pj["value2"] = number(p.value2);
        pj["status"] = to_string(p.status);
        if (!p.message.empty()) pj["message"] = p.message;
        pj["stable"] = p.stable;
        pj["iterations"] = p.iterations;
        pj["residual"] = number(p.residual);
        pj["detuning"] = number(p.params.detuning);
        if (p.spectrum) pj["spectrum"] = spectrum_body(*p.spectrum);
        if (p.windows) pj["windows"] = window_json(*p.windows);
        points.push_back(pj);
    }
    j["points"] = points;
    return j.dump(2) + "\n";
}

std::string svg_lines(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series) {
    if (series.empty()) throw ExportError("nothing to plot", "");
    Range xr, yr;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw ExportError("series '" + s.name + "' has mismatched lengths", "");
        for (double v : s.x) xr.add(v);
        for (double v : s.y) yr.add(v);
    }
    xr.settle();
    yr.settle();
    const double right = kWidth - kRight;
    const double bottom = kHeight - kBottom;
    std::string out = frame(title, xlabel, ylabel, xr, yr, right);
    static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = colours[k % 6];
        std::string d;
        bool pen = false;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen = false;
                continue;
            }
            const double px = kLeft + (s.x[i] - xr.lo) / (xr.hi - xr.lo) * (right - kLeft);
            const double py = bottom - (s.y[i] - yr.lo) / (yr.hi - yr.lo) * (bottom - kTop);
            d += fmt::format("{}{:.2f},{:.2f} ", pen ? "L" : "M", px, py);
            pen = true;
        }
        out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", d, colour);
        const double ly = kTop + 16 + 16 * static_cast<double>(k);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           right - 150, ly - 4, right - 130, ly - 4, colour);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", right - 125, ly, escape_xml(s.name));
    }
    return out + "</svg>\n";
}

std::string svg_heatmap(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                        const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z) {
    if (x.empty() || y.empty()) throw ExportError("nothing to plot", "");
    if (z.size() != x.size() * y.size()) throw ExportError("heatmap size mismatch", "");
    Range xr, yr, zr;
    for (double v : x) xr.add(v);
    for (double v : y) yr.add(v);
    for (double v : z) zr.add(v);
    xr.settle();
    yr.settle();
    zr.settle();
    const double right = kWidth - kRight - 70;
    const double bottom = kHeight - kBottom;
    std::string out = frame(title, xlabel, ylabel, xr, yr, right);
    const double cw = (right - kLeft) / static_cast<double>(x.size());
    const double ch = (bottom - kTop) / static_cast<double>(y.size());
    // Cells are drawn in index order; the axes assume monotone x and y.
    for (std::size_t r = 0; r < y.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) {
            const double v = z[r * x.size() + c];
            if (!std::isfinite(v)) continue;
            out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                               kLeft + cw * static_cast<double>(c), bottom - ch * static_cast<double>(r + 1), cw + 0.5,
                               ch + 0.5, ramp((v - zr.lo) / (zr.hi - zr.lo)));
        }
    for (int i = 0; i < 50; ++i) {
        const double t = i / 49.0;
        out += fmt::format("<rect x=\"{}\" y=\"{:.2f}\" width=\"16\" height=\"{:.2f}\" fill=\"{}\"/>\n", right + 20,
                           bottom - (i + 1) * (bottom - kTop) / 50.0, (bottom - kTop) / 50.0 + 0.5, ramp(t));
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\">{:.3g}</text>\n", right + 40, kTop + 10, zr.hi);
    out += fmt::format("<text x=\"{}\" y=\"{}\">{:.3g}</text>\n", right + 40, bottom, zr.lo);
    return out + "</svg>\n";
}

} // namespace ckomit
