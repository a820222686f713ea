#include "ckomit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ckomit/constants.hpp"
#include "ckomit/errors.hpp"

namespace ckomit {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last)
        throw ValidationError(field, "expected a number, got '" + s + "'");
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
    return v;
}

std::vector<double> parse_list(const std::string& field, const std::string& raw) {
    std::vector<double> out;
    std::stringstream in(raw);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_number(field, item));
    if (out.empty()) throw ValidationError(field, "empty list");
    return out;
}

bool parse_bool(const std::string& field, const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ValidationError(field, "expected true or false, got '" + s + "'");
}

// One INI section; every key must be consumed or the section is rejected.
class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    bool present() const { return tree_ != nullptr; }
    const std::string& name() const { return name_; }

    bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::optional<std::string> text(const std::string& key) {
        if (!has(key)) return std::nullopt;
        used_.insert(key);
        return trim(tree_->get<std::string>(key));
    }

    std::optional<double> number(const std::string& key) {
        auto t = text(key);
        if (!t) return std::nullopt;
        return parse_number(field(key), *t);
    }

    std::string field(const std::string& key) const { return name_ + "." + key; }

    // Exactly-one-of helper: returns the key that is set, or nullopt.
    std::optional<std::string> one_of(const std::vector<std::string>& keys, bool required) {
        std::optional<std::string> found;
        for (const auto& k : keys) {
            if (!has(k)) continue;
            if (found) throw ValidationError(field(k), "conflicts with " + field(*found));
            found = k;
        }
        if (!found && required) {
            std::string all;
            for (const auto& k : keys) all += (all.empty() ? "" : " | ") + k;
            throw ValidationError(name_, "one of " + all + " is required");
        }
        return found;
    }

    void finish() const {
        if (!tree_) return;
        for (const auto& [key, child] : *tree_) {
            if (!child.empty()) throw ValidationError(field(key), "nested keys are not supported");
            if (!used_.count(key)) throw ValidationError(field(key), "unknown key");
        }
    }

private:
    std::string name_;
    const pt::ptree* tree_;
    std::set<std::string> used_;
};

double hz_or_rad(const std::string& key, double value) {
    return key.size() > 3 && key.ends_with("_hz") ? angular_from_hz(value) : value;
}

std::optional<double> frequency_key(Section& s, const std::string& base, bool required) {
    const auto key = s.one_of({base, base + "_hz"}, required);
    if (!key) return std::nullopt;
    return hz_or_rad(*key, *s.number(*key));
}

std::optional<CouplingValue> coupling_key(Section& s, const std::string& base) {
    const auto key = s.one_of({base, base + "_over_g0"}, false);
    if (!key) return std::nullopt;
    return CouplingValue{*s.number(*key), key->ends_with("_over_g0")};
}

// Energies may be given in joules or as E/h in Hz.
std::optional<double> energy_key(Section& s, const std::string& base, bool required) {
    const auto key = s.one_of({base, base + "_hz"}, required);
    if (!key) return std::nullopt;
    const double v = *s.number(*key);
    return key->ends_with("_hz") ? kTwoPi * kHbar * v : v;
}

Output parse_output(const std::string& field, const std::string& raw) {
    static const std::map<std::string, Output> names{{"eps_r", Output::eps_r},
                                                     {"eps_i", Output::eps_i},
                                                     {"phase", Output::phase},
                                                     {"group_delay", Output::group_delay},
                                                     {"windows", Output::windows}};
    const auto it = names.find(trim(raw));
    if (it == names.end()) throw ValidationError(field, "unknown output '" + trim(raw) + "'");
    return it->second;
}

std::vector<double> axis_values(Section& s, const std::string& suffix) {
    const std::string v = "values" + suffix;
    const auto key = s.one_of({v, "start" + suffix}, true);
    if (*key == v) return parse_list(s.field(v), *s.text(v));
    const double start = *s.number("start" + suffix);
    const auto stop = s.number("stop" + suffix);
    const auto count = s.number("count" + suffix);
    if (!stop || !count) throw ValidationError(s.field("start" + suffix), "needs stop" + suffix + " and count" + suffix);
    if (*count < 1 || *count != std::floor(*count))
        throw ValidationError(s.field("count" + suffix), "must be a positive integer");
    const auto n = static_cast<std::size_t>(*count);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? start : start + (*stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

void check_parameter(const std::string& field, const std::string& name) {
    const auto& all = sweep_parameters();
    if (std::find(all.begin(), all.end(), name) == all.end())
        throw ValidationError(field, "unknown sweep parameter '" + name + "'");
}

} // namespace

std::string to_string(Output o) {
    switch (o) {
    case Output::eps_r: return "eps_r";
    case Output::eps_i: return "eps_i";
    case Output::phase: return "phase";
    case Output::group_delay: return "group_delay";
    case Output::windows: return "windows";
    }
    return "?";
}

std::string to_string(DetuningSide s) { return s == DetuningSide::red ? "red" : "blue"; }

RunConfig parse_config(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    {
        std::istringstream in(text);
        try {
            pt::read_ini(in, tree);
        } catch (const pt::ini_parser_error& e) {
            throw ConfigError(origin + ": " + e.message(), static_cast<int>(e.line()));
        }
    }
    static const std::set<std::string> known{"run", "system", "mode1", "mode2", "circuit",
                                             "grid", "sweep", "solver", "analysis", "output"};
    for (const auto& [key, child] : tree) {
        if (child.empty() && !child.data().empty())
            throw ValidationError(key, "keys must live inside a [section]");
        if (!known.count(key)) throw ValidationError(key, "unknown section [" + key + "]");
    }
    auto section = [&](const std::string& name) {
        const auto it = tree.find(name);
        return Section(name, it == tree.not_found() ? nullptr : &it->second);
    };

    RunConfig c;

    Section run = section("run");
    if (auto n = run.text("name")) c.name = *n;
    if (auto m = run.text("mode")) {
        if (*m == "single") c.model.modes = ModeCount::single;
        else if (*m == "two") c.model.modes = ModeCount::two;
        else throw ValidationError(run.field("mode"), "expected single or two");
    }
    run.finish();

    Section circuit = section("circuit");
    const bool from_circuit = circuit.present();

    Section sys = section("system");
    if (!sys.present()) throw ValidationError("system", "section [system] is required");
    if (from_circuit) {
        if (frequency_key(sys, "control_frequency", false))
            throw ValidationError(sys.field("control_frequency"),
                                  "both parameter sources given ([circuit] sets the cavity frequency)");
    } else {
        c.model.control_frequency = *frequency_key(sys, "control_frequency", true);
    }
    {
        const auto key = sys.one_of({"control_power_w", "control_power_nw"}, true);
        const double v = *sys.number(*key);
        c.model.control_power = key->ends_with("_nw") ? v * 1e-9 : v;
    }
    if (auto v = sys.number("probe_power_w")) c.model.probe_power = *v;
    c.model.kappa = *frequency_key(sys, "kappa", true);
    if (auto v = sys.number("temperature_k")) c.model.temperature = *v;
    {
        const auto key = sys.one_of({"detuning", "detuning_hz", "detuning_over_omega_m1",
                                     "effective_detuning_over_omega_m1", "mechanical_resonance"},
                                    true);
        if (*key == "mechanical_resonance") {
            const auto side = *sys.text(*key);
            if (side == "red") c.model.mechanical_resonance = 1.0;
            else if (side == "blue") c.model.mechanical_resonance = -1.0;
            else throw ValidationError(sys.field(*key), "expected red or blue");
        } else if (const double v = *sys.number(*key); *key == "detuning_over_omega_m1") c.model.detuning_ratio = v;
        else if (*key == "effective_detuning_over_omega_m1") c.model.effective_detuning_ratio = v;
        else c.model.detuning = hz_or_rad(*key, v);
    }
    if (auto t = coupling_key(sys, "three_mode_ck")) {
        if (from_circuit) throw ValidationError(sys.field("three_mode_ck"), "both parameter sources given ([circuit] and effective couplings)");
        c.model.three_mode_ck = *t;
    }
    if (auto d = sys.text("diffusion_convention")) {
        if (*d == "printed") c.diffusion = DiffusionConvention::printed;
        else if (*d == "doubled") c.diffusion = DiffusionConvention::doubled;
        else throw ValidationError(sys.field("diffusion_convention"), "expected printed or doubled");
    }
    sys.finish();

    for (int k = 0; k < 2; ++k) {
        Section m = section(k == 0 ? "mode1" : "mode2");
        if (k == 1 && c.model.modes == ModeCount::single && m.present())
            throw ValidationError("mode2", "section [mode2] given for a single-mode run");
        if (k == 0 && !m.present()) throw ValidationError("mode1", "section [mode1] is required");
        ModeSpec& spec = c.model.mech[k];
        if (auto d = frequency_key(m, "damping", k == 0)) spec.damping = *d;
        if (auto n = m.number("thermal_occupation")) spec.thermal_occupation = *n;
        const std::vector<std::string> effective{"frequency", "frequency_hz", "frequency_ratio", "rp_coupling",
                                                 "ck", "ck_over_g0", "ck_generalized", "ck_generalized_over_g0"};
        if (from_circuit) {
            for (const auto& key : effective)
                if (m.has(key))
                    throw ValidationError(m.field(key), "both parameter sources given ([circuit] and effective couplings)");
        } else {
            const std::vector<std::string> freq_keys =
                k == 0 ? std::vector<std::string>{"frequency", "frequency_hz"}
                       : std::vector<std::string>{"frequency", "frequency_hz", "frequency_ratio"};
            if (auto key = m.one_of(freq_keys, k == 0)) {
                const double v = *m.number(*key);
                if (*key == "frequency_ratio") spec.frequency_ratio = v;
                else spec.frequency = hz_or_rad(*key, v);
            }
            if (k == 0 && !m.has("rp_coupling")) throw ValidationError(m.field("rp_coupling"), "required");
            spec.rp_coupling = m.number("rp_coupling");
            spec.ck = coupling_key(m, "ck");
            spec.ck_generalized = coupling_key(m, "ck_generalized");
        }
        m.finish();
    }

    if (from_circuit) {
        CircuitParams cp;
        for (int k = 0; k < 2; ++k) {
            const std::string s = "_" + std::to_string(k + 1);
            cp.josephson_energy[k] = *energy_key(circuit, "josephson_energy" + s, true);
            cp.charging_energy[k] = *energy_key(circuit, "charging_energy" + s, true);
            cp.gate_charge_deviation[k] = circuit.number("gate_charge_deviation" + s).value_or(0.0);
            cp.gate_voltage[k] = circuit.number("gate_voltage" + s).value_or(0.0);
            cp.capacitance[k] = circuit.number("capacitance" + s).value_or(0.0);
            cp.mech_bare_frequency[k] = *frequency_key(circuit, "mech_bare_frequency" + s, true);
            const auto x = circuit.number("zero_point_motion" + s);
            const auto g = circuit.number("capacitance_gradient" + s);
            if (x.has_value() != g.has_value())
                throw ValidationError(circuit.field("zero_point_motion" + s),
                                      "zero_point_motion and capacitance_gradient go together");
            if (x) cp.lever[k] = MechanicalLever{*x, *g};
        }
        cp.cavity_bare_frequency = *frequency_key(circuit, "cavity_bare_frequency", true);
        const auto impedance = circuit.number("impedance");
        if (!impedance) throw ValidationError(circuit.field("impedance"), "required");
        cp.impedance = *impedance;
        cp.flux_phase = circuit.number("flux_phase").value_or(0.0);
        if (auto t = circuit.number("validity_threshold")) c.validity_threshold = *t;
        circuit.finish();
        validate(cp);
        c.circuit = cp;
    }

    Section grid = section("grid");
    if (grid.present()) {
        const auto key = grid.one_of({"min_over_omega_m1", "min"}, false);
        if (key) {
            const bool norm = *key == "min_over_omega_m1";
            const std::string hi_key = norm ? "max_over_omega_m1" : "max";
            c.grid.normalized = norm;
            c.grid.lo = *grid.number(*key);
            const auto hi = grid.number(hi_key);
            if (!hi) throw ValidationError(grid.field(hi_key), "required with " + grid.field(*key));
            c.grid.hi = *hi;
            if (!(c.grid.hi > c.grid.lo)) throw ValidationError(grid.field(hi_key), "must exceed the lower bound");
        }
        if (auto n = grid.number("points")) {
            if (*n < 1 || *n != std::floor(*n)) throw ValidationError(grid.field("points"), "must be a positive integer");
            c.grid.points = static_cast<std::size_t>(*n);
        }
        grid.finish();
    }

    Section sweep = section("sweep");
    if (sweep.present()) {
        SweepSpec spec;
        const auto parameter = sweep.text("parameter");
        if (!parameter) throw ValidationError(sweep.field("parameter"), "required");
        spec.axis.parameter = *parameter;
        check_parameter(sweep.field("parameter"), spec.axis.parameter);
        spec.axis.values = axis_values(sweep, "");
        if (auto p2 = sweep.text("parameter2")) {
            check_parameter(sweep.field("parameter2"), *p2);
            spec.axis2 = SweepAxis{*p2, axis_values(sweep, "2")};
        }
        const auto outs = sweep.text("outputs").value_or("eps_r,eps_i,phase,group_delay");
        std::stringstream in(outs);
        std::string item;
        while (std::getline(in, item, ',')) {
            if (trim(item).empty()) continue;
            const Output o = parse_output(sweep.field("outputs"), item);
            if (std::find(spec.outputs.begin(), spec.outputs.end(), o) == spec.outputs.end()) spec.outputs.push_back(o);
        }
        if (spec.outputs.empty()) throw ValidationError(sweep.field("outputs"), "empty output selection");
        sweep.finish();
        c.sweep = spec;
    }

    Section analysis = section("analysis");
    DetuningSide side = DetuningSide::red;
    if (auto s = analysis.text("side")) {
        if (*s == "red") side = DetuningSide::red;
        else if (*s == "blue") side = DetuningSide::blue;
        else throw ValidationError(analysis.field("side"), "expected red or blue");
    }
    if (auto v = analysis.number("depth_fraction")) c.windows.depth_fraction = *v;
    if (auto v = analysis.number("prominence_fraction")) c.windows.prominence_fraction = *v;
    analysis.finish();
    if (c.sweep) c.sweep->side = side;
    c.side = side;

    Section solver = section("solver");
    if (auto v = solver.number("relaxation")) c.solver.relaxation = *v;
    if (auto v = solver.number("tolerance")) c.solver.tolerance = *v;
    if (auto v = solver.number("max_iterations")) c.solver.max_iterations = static_cast<int>(*v);
    if (auto v = solver.text("multistart")) c.solver.multistart = parse_bool(solver.field("multistart"), *v);
    if (auto v = solver.number("seeds")) c.solver.seeds = static_cast<int>(*v);
    if (auto v = solver.number("distinct_tolerance")) c.solver.distinct_tolerance = *v;
    if (auto s = solver.text("stability")) {
        if (*s == "require") c.stability = StabilityPolicy::require;
        else if (*s == "report") c.stability = StabilityPolicy::report;
        else throw ValidationError(solver.field("stability"), "expected require or report");
    }
    if (auto b = solver.text("branch")) {
        if (*b == "unique") c.solver.branch = BranchPolicy::unique;
        else if (*b == "power_ramp") c.solver.branch = BranchPolicy::power_ramp;
        else throw ValidationError(solver.field("branch"), "expected unique or power_ramp");
    }
    solver.finish();
    if (!(c.solver.relaxation > 0.0 && c.solver.relaxation <= 1.0))
        throw ValidationError("solver.relaxation", "must lie in (0, 1]");
    if (!(c.solver.tolerance > 0.0)) throw ValidationError("solver.tolerance", "must be positive");
    if (c.solver.max_iterations < 1) throw ValidationError("solver.max_iterations", "must be positive");
    if (c.solver.seeds < 0) throw ValidationError("solver.seeds", "must be non-negative");

    Section output = section("output");
    if (auto v = output.text("csv")) c.output.csv = *v;
    if (auto v = output.text("json")) c.output.json = *v;
    if (auto v = output.text("svg")) c.output.svg = *v;
    output.finish();

    // Catch value errors early rather than at the first solve.
    if (!from_circuit) validate(build_system_unretuned(c));
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

SystemParams build_system_unretuned(const RunConfig& c) {
    const ModelSpec& m = c.model;
    SystemParams p;
    p.modes = m.modes;
    p.control_frequency = m.control_frequency;
    p.control_power = m.control_power;
    p.probe_power = m.probe_power;
    p.kappa = m.kappa;
    p.temperature = m.temperature;
    for (int k = 0; k < 2; ++k) {
        const ModeSpec& spec = m.mech[k];
        p.mech[k].damping = spec.damping.value_or(m.mech[0].damping.value_or(0.0));
        p.mech[k].thermal_occupation = spec.thermal_occupation ? spec.thermal_occupation : m.mech[0].thermal_occupation;
    }

    std::optional<CompiledCircuit> compiled;
    double w_m1 = 0.0;
    if (c.circuit) {
        compiled = compile_circuit(*c.circuit, c.validity_threshold);
        w_m1 = compiled->effective.mech_frequency[0];
    } else {
        w_m1 = m.mech[0].frequency.value_or(0.0);
        const double g0 = m.mech[0].rp_coupling.value_or(0.0);
        for (int k = 0; k < 2; ++k) {
            const ModeSpec& spec = m.mech[k];
            MechanicalMode& mode = p.mech[k];
            if (spec.frequency) mode.frequency = *spec.frequency;
            else if (spec.frequency_ratio) mode.frequency = *spec.frequency_ratio * w_m1;
            else mode.frequency = w_m1;
            mode.radiation_pressure = spec.rp_coupling.value_or(g0);
            const auto ck = spec.ck ? spec.ck : m.mech[0].ck;
            const auto gck = spec.ck_generalized ? spec.ck_generalized : m.mech[0].ck_generalized;
            mode.cross_kerr = ck ? ck->resolve(g0) : 0.0;
            mode.generalized_ck = gck ? gck->resolve(g0) : 0.0;
        }
        p.three_mode_ck = m.three_mode_ck.resolve(g0);
    }

    if (m.detuning) p.detuning = *m.detuning;
    else if (m.detuning_ratio) p.detuning = *m.detuning_ratio * w_m1;
    else if (m.effective_detuning_ratio) p.detuning = *m.effective_detuning_ratio * w_m1;
    else if (m.mechanical_resonance) p.detuning = *m.mechanical_resonance * w_m1;

    if (compiled) return system_from_circuit(*compiled, p);
    return p.normalized();
}

SystemParams build_system(const RunConfig& c) {
    SystemParams p = build_system_unretuned(c);
    validate(p);
    if (c.model.effective_detuning_ratio || c.model.mechanical_resonance) return build_working_point(c).params;
    return p;
}

WorkingPoint build_working_point(const RunConfig& c) {
    SystemParams p = build_system_unretuned(c);
    validate(p);
    if (c.model.effective_detuning_ratio)
        return solve_at_effective_detuning(p, *c.model.effective_detuning_ratio * p.mech[0].frequency, c.solver);
    if (c.model.mechanical_resonance) return solve_at_mechanical_resonance(p, *c.model.mechanical_resonance, c.solver);
    return WorkingPoint{p, solve_steady_state(p, c.solver)};
}

ProbeGrid build_grid(const RunConfig& c, const SystemParams& p) {
    const double w = p.mech[0].frequency;
    const double scale = c.grid.normalized ? w : 1.0;
    return ProbeGrid::uniform(c.grid.lo * scale, c.grid.hi * scale, c.grid.points, w);
}

const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"control_power_nw",
                                                "kappa",
                                                "detuning_over_omega_m1",
                                                "effective_detuning_over_omega_m1",
                                                "rp_over_kappa",
                                                "rp_magnitude",
                                                "ck_over_g0",
                                                "ck_generalized_over_g0",
                                                "three_mode_ck_over_g0",
                                                "omega_m2_over_omega_m1",
                                                "temperature_k"};
    return names;
}

void apply_parameter(RunConfig& c, const std::string& name, double v) {
    check_parameter("sweep.parameter", name);
    ModelSpec& m = c.model;
    const bool circuit_only = name == "rp_over_kappa" || name == "rp_magnitude" || name == "ck_over_g0" ||
                              name == "ck_generalized_over_g0" || name == "three_mode_ck_over_g0" ||
                              name == "omega_m2_over_omega_m1";
    if (c.circuit && circuit_only)
        throw ValidationError("sweep.parameter", "'" + name + "' is fixed by the [circuit] section");
    auto set_g0 = [&](double magnitude) {
        const double current = m.mech[0].rp_coupling.value_or(-1.0);
        m.mech[0].rp_coupling = std::signbit(current) ? -magnitude : magnitude;
    };
    if (name == "control_power_nw") m.control_power = v * 1e-9;
    else if (name == "kappa") m.kappa = v;
    else if (name == "detuning_over_omega_m1") {
        m.detuning.reset();
        m.effective_detuning_ratio.reset();
        m.mechanical_resonance.reset();
        m.detuning_ratio = v;
    } else if (name == "effective_detuning_over_omega_m1") {
        m.detuning.reset();
        m.detuning_ratio.reset();
        m.mechanical_resonance.reset();
        m.effective_detuning_ratio = v;
    } else if (name == "rp_over_kappa") set_g0(std::abs(v) * m.kappa);
    else if (name == "rp_magnitude") set_g0(std::abs(v));
    else if (name == "ck_over_g0") {
        m.mech[0].ck = CouplingValue{v, true};
        m.mech[1].ck.reset();
    } else if (name == "ck_generalized_over_g0") {
        m.mech[0].ck_generalized = CouplingValue{v, true};
        m.mech[1].ck_generalized.reset();
    } else if (name == "three_mode_ck_over_g0") m.three_mode_ck = CouplingValue{v, true};
    else if (name == "omega_m2_over_omega_m1") {
        m.mech[1].frequency.reset();
        m.mech[1].frequency_ratio = v;
    } else if (name == "temperature_k") m.temperature = v;
}

} // namespace ckomit
