#include "ckomit/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ckomit/constants.hpp"
#include "ckomit/errors.hpp"

namespace ckomit {

namespace {

void require_finite(const std::string& field, double v) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

void require_positive(const std::string& field, double v) {
    require_finite(field, v);
    if (!(v > 0.0)) throw ValidationError(field, "must be strictly positive");
}

void require_nonnegative(const std::string& field, double v) {
    require_finite(field, v);
    if (v < 0.0) throw ValidationError(field, "must be non-negative");
}

// |a| / |b| with 0/0 read as 0 (both sides switched off).
double ratio(double a, double b) {
    a = std::abs(a);
    b = std::abs(b);
    if (a == 0.0) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a / b;
}

} // namespace

bool ValidityReport::valid() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidityCheck& c) { return c.ok; });
}

const ValidityCheck* ValidityReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void validate(const CircuitParams& c) {
    for (int k = 0; k < 2; ++k) {
        const std::string s = std::to_string(k + 1);
        // E_J = 0 is a legitimate (decoupled-cavity) corner, so only negatives are rejected.
        require_nonnegative("josephson_energy_" + s, c.josephson_energy[k]);
        require_positive("charging_energy_" + s, c.charging_energy[k]);
        require_finite("gate_charge_deviation_" + s, c.gate_charge_deviation[k]);
        require_finite("gate_voltage_" + s, c.gate_voltage[k]);
        require_nonnegative("capacitance_" + s, c.capacitance[k]);
        require_positive("mech_bare_frequency_" + s, c.mech_bare_frequency[k]);
        if (c.lever[k]) {
            require_finite("zero_point_motion_" + s, c.lever[k]->zero_point_motion);
            require_finite("capacitance_gradient_" + s, c.lever[k]->capacitance_gradient);
        }
    }
    require_positive("cavity_bare_frequency", c.cavity_bare_frequency);
    require_positive("impedance", c.impedance);
    if (c.flux_phase != 0.0) throw ValidationError("flux_phase", "only phi = 0 is supported");
}

QubitFields effective_fields(const CircuitParams& c) {
    validate(c);
    QubitFields f;
    for (int k = 0; k < 2; ++k) {
        f.transverse[k] = -2.0 * c.josephson_energy[k];
        f.longitudinal[k] = 4.0 * c.charging_energy[k] * (1.0 - c.gate_charge_deviation[k]);
    }
    f.magnitude = std::hypot(f.transverse_sum(), f.longitudinal_sum());
    if (!(f.magnitude > 0.0)) throw ValidationError("qubit fields", "B~ = 0, degenerate qubit basis");
    return f;
}

double mech_coupling(const CircuitParams& c, int k) {
    if (const auto& lever = c.lever[k]) {
        return -4.0 * c.charging_energy[k] * lever->zero_point_motion * lever->capacitance_gradient *
               c.gate_voltage[k] / (2.0 * kElementaryCharge);
    }
    return -80.0 * c.charging_energy[k] * c.gate_voltage[k] * c.capacitance[k] /
           (kElementaryCharge * c.cavity_bare_frequency);
}

BareCouplings bare_couplings(const CircuitParams& c, const QubitFields& f) {
    if (!(f.magnitude > 0.0)) throw ValidationError("qubit fields", "B~ = 0, degenerate qubit basis");
    BareCouplings b;
    for (int k = 0; k < 2; ++k) {
        b.mech_coupling[k] = mech_coupling(c, k);
        b.cavity_coupling[k] =
            kElementaryCharge * kElementaryCharge * c.impedance * c.josephson_energy[k] / (4.0 * kHbar);
    }
    // The expansion assumes g_m1 = -g_m2 = g_m; g_m is taken from the first resonator.
    const double gm = b.mech_coupling[0];
    const double gq = b.cavity_coupling[0] + b.cavity_coupling[1];
    const double s1 = f.transverse_sum();
    const double s3 = f.longitudinal_sum();
    const double bt = f.magnitude;
    const double bt2 = bt * bt;
    const double s1s = s1 * s1;
    const double s3s = s3 * s3;
    const double gm2 = gm * gm;
    const double gm3 = gm2 * gm;
    const double gm4 = gm2 * gm2;
    const double gq2 = gq * gq;

    b.static_force = -gm * s3 / bt;
    b.cavity_stark = -gq * s1 / bt / kHbar;
    b.mech_stark = -gm2 * s1s / std::pow(bt, 3) / kHbar;
    b.radiation_pressure = 2.0 * gm * gq * s1 * s3 / std::pow(bt, 3) / kHbar;
    b.cross_kerr = 2.0 * gm2 * gq * s1 * (bt2 - 3.0 * s3s) / std::pow(bt, 5) / kHbar;
    b.cubic = 4.0 * gm3 * gq * s1 * s3 * (5.0 * s3s - 3.0 * bt2) / std::pow(bt, 7) / kHbar;
    b.quartic = 2.0 * gm4 * gq * s1 * (-3.0 * bt2 * bt2 + 30.0 * bt2 * s3s - 35.0 * s3s * s3s) /
                std::pow(bt, 9) / kHbar;
    b.quartic_cavity[0] = 2.0 * gm * gq2 * s3 * (bt2 - 3.0 * s3s) / std::pow(bt, 5) / kHbar;
    b.quartic_cavity[1] = 2.0 * gm2 * gq2 * (15.0 * s1s * s3s - 2.0 * bt2 * bt2) / std::pow(bt, 7) / kHbar;
    // Third-order mechanical term: g_m enters cubed (the x_m^3 coefficient).
    b.quartic_cavity[2] = 4.0 * gm3 * gq2 * s3 *
                          (5.0 * bt2 * s3s + 15.0 * bt2 * s1s - 3.0 * bt2 * bt2 - 35.0 * s1s * s3s) /
                          std::pow(bt, 9) / kHbar;
    b.quartic_cavity[3] = gm4 * gq2 *
                          (60.0 * bt2 * s3s + 30.0 * bt2 * s1s - 6.0 * bt2 * bt2 - 70.0 * s3s * s3s -
                           420.0 * s1s * s3s) /
                          std::pow(bt, 9) / kHbar;
    return b;
}

RenormalizedFrequencies bogoliubov_renormalize(const BareCouplings& b, const CircuitParams& c) {
    auto renorm = [](const char* field, double w0, double stark) {
        const double radicand = w0 * (w0 + 4.0 * stark);
        if (!(radicand > 0.0))
            throw ValidationError(field, "Stark shift too large, w0 (w0 + 4 g_S) <= 0");
        return std::sqrt(radicand);
    };
    RenormalizedFrequencies r;
    r.cavity = renorm("cavity_bare_frequency", c.cavity_bare_frequency, b.cavity_stark);
    r.mech[0] = renorm("mech_bare_frequency_1", c.mech_bare_frequency[0], b.mech_stark);
    r.mech[1] = renorm("mech_bare_frequency_2", c.mech_bare_frequency[1], b.mech_stark);
    return r;
}

EffectiveCouplings effective_couplings(const BareCouplings& b, const CircuitParams& c,
                                       const RenormalizedFrequencies& w) {
    if (!(w.cavity > 0.0) || !(w.mech[0] > 0.0) || !(w.mech[1] > 0.0))
        throw ValidationError("renormalized frequencies", "must be positive");
    const double rc = c.cavity_bare_frequency / w.cavity;
    const std::array<double, 2> rm{c.mech_bare_frequency[0] / w.mech[0], c.mech_bare_frequency[1] / w.mech[1]};
    const double rc2 = rc * rc;

    EffectiveCouplings e;
    e.cavity_frequency = w.cavity;
    e.mech_frequency = w.mech;
    for (int k = 0; k < 2; ++k) {
        const double sign = k == 0 ? 1.0 : -1.0;
        const double r = rm[k];
        const double other = rm[1 - k];
        const double sr = std::sqrt(r);
        e.radiation_pressure[k] = sign * 2.0 * b.radiation_pressure * rc * sr;
        e.cross_kerr[k] = 4.0 * b.cross_kerr * rc * r;
        e.cubic[k] = sign * 2.0 * b.cubic * rc * r * sr;
        e.cubic_mixed[k] = sign * 6.0 * b.cubic * rc * sr * other;
        e.generalized_ck[k] = 12.0 * b.quartic * rc * r * r;
        e.residual_g1[k] = sign * 6.0 * b.quartic_cavity[0] * rc2 * sr;
        e.residual_g2[k] = 12.0 * b.quartic_cavity[1] * rc2 * r;
        e.residual_g3[k] = 6.0 * b.quartic_cavity[2] * rc2 * r * sr;
        e.residual_g3_mixed[k] = sign * 18.0 * b.quartic_cavity[2] * rc2 * sr * other;
        e.residual_g4[k] = 36.0 * b.quartic_cavity[3] * rc2 * r * r;
    }
    e.three_mode_ck = 24.0 * b.quartic * rc * rm[0] * rm[1];
    e.residual_g4_joint = 24.0 * b.quartic_cavity[3] * rc2 * rm[0] * rm[1];
    return e;
}

ValidityReport validate_hierarchy(const CircuitParams& c, const QubitFields& f, const BareCouplings& b,
                                  const EffectiveCouplings& e, double threshold) {
    ValidityReport rep;
    rep.threshold = threshold;
    auto add = [&](std::string name, double r) { rep.checks.push_back({std::move(name), r, r <= threshold}); };

    // Dispersive limit: hbar w << |B0| for each qubit.
    for (int k = 0; k < 2; ++k) {
        const double b0 = std::hypot(f.transverse[k], f.longitudinal[k]);
        const double w = std::max(c.cavity_bare_frequency, c.mech_bare_frequency[k]);
        add("dispersive_" + std::to_string(k + 1), ratio(kHbar * w, b0));
    }

    // Rotating-wave hierarchy: bare nonlinear terms small against g_0 and w_m.
    double bare_max = std::max({std::abs(b.cross_kerr), std::abs(b.cubic), std::abs(b.quartic)});
    for (double g : b.quartic_cavity) bare_max = std::max(bare_max, std::abs(g));
    for (int k = 0; k < 2; ++k) {
        const double scale = std::min(std::abs(e.radiation_pressure[k]), e.mech_frequency[k]);
        add("rotating_wave_" + std::to_string(k + 1), ratio(bare_max, scale));
    }

    // Residual G-terms dropped from the dynamics.
    for (int k = 0; k < 2; ++k) {
        const double g = std::max({std::abs(e.residual_g2[k]), std::abs(e.residual_g4[k]),
                                   std::abs(e.residual_g4_joint)});
        const std::string s = std::to_string(k + 1);
        add("residual_vs_g0_" + s, ratio(g, e.radiation_pressure[k]));
        add("residual_vs_ck_" + s, ratio(g, e.cross_kerr[k]));
        add("residual_vs_generalized_ck_" + s, ratio(g, e.generalized_ck[k]));
    }

    // The expansion takes g_m2 = -g_m1; report how far the circuit is from that.
    add("mech_coupling_antisymmetry", ratio(b.mech_coupling[0] + b.mech_coupling[1], b.mech_coupling[0]));
    return rep;
}

CompiledCircuit compile_circuit(const CircuitParams& circuit, double threshold) {
    CompiledCircuit out;
    out.fields = effective_fields(circuit);
    out.bare = bare_couplings(circuit, out.fields);
    out.frequencies = bogoliubov_renormalize(out.bare, circuit);
    out.effective = effective_couplings(out.bare, circuit, out.frequencies);
    out.validity = validate_hierarchy(circuit, out.fields, out.bare, out.effective, threshold);
    return out;
}

} // namespace ckomit
