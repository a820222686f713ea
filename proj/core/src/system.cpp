#include "ckomit/system.hpp"

#include <cmath>
#include <limits>

#include "ckomit/circuit.hpp"
#include "ckomit/constants.hpp"
#include "ckomit/errors.hpp"

namespace ckomit {

namespace {

void require_finite(const char* field, double v) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

} // namespace

double SystemParams::modified_ck(int k) const {
    return mech[k].cross_kerr + mech[k].generalized_ck + three_mode_ck;
}

double SystemParams::control_drive() const { return drive_amplitude(control_power, kappa, control_frequency); }

double SystemParams::probe_drive(double delta) const {
    return drive_amplitude(probe_power, kappa, control_frequency + delta);
}

double SystemParams::thermal_occupation(int k) const {
    if (mech[k].thermal_occupation) return *mech[k].thermal_occupation;
    return bose_occupation(mech[k].frequency, temperature);
}

SystemParams SystemParams::normalized() const {
    SystemParams p = *this;
    if (modes == ModeCount::single) {
        p.mech[1].radiation_pressure = 0.0;
        p.mech[1].cross_kerr = 0.0;
        p.mech[1].generalized_ck = 0.0;
        p.three_mode_ck = 0.0;
        if (!(p.mech[1].frequency > 0.0)) p.mech[1].frequency = p.mech[0].frequency;
        if (!(p.mech[1].damping > 0.0)) p.mech[1].damping = p.mech[0].damping;
    }
    return p;
}

void validate(const SystemParams& p) {
    require_finite("control_frequency", p.control_frequency);
    if (!(p.control_frequency > 0.0)) throw ValidationError("control_frequency", "must be positive");
    require_finite("kappa", p.kappa);
    if (!(p.kappa > 0.0)) throw ValidationError("kappa", "must be positive");
    require_finite("control_power", p.control_power);
    if (p.control_power < 0.0) throw ValidationError("control_power", "must be non-negative");
    require_finite("probe_power", p.probe_power);
    if (p.probe_power < 0.0) throw ValidationError("probe_power", "must be non-negative");
    require_finite("detuning", p.detuning);
    require_finite("temperature", p.temperature);
    if (p.temperature < 0.0) throw ValidationError("temperature", "must be non-negative");
    require_finite("three_mode_ck", p.three_mode_ck);
    for (int k = 0; k < 2; ++k) {
        if (!p.has_mode(k)) continue;
        const auto& m = p.mech[k];
        const bool first = k == 0;
        require_finite(first ? "mode1.frequency" : "mode2.frequency", m.frequency);
        if (!(m.frequency > 0.0)) throw ValidationError(first ? "mode1.frequency" : "mode2.frequency", "must be positive");
        require_finite(first ? "mode1.damping" : "mode2.damping", m.damping);
        if (!(m.damping > 0.0)) throw ValidationError(first ? "mode1.damping" : "mode2.damping", "must be positive");
        require_finite(first ? "mode1.rp_coupling" : "mode2.rp_coupling", m.radiation_pressure);
        require_finite(first ? "mode1.ck" : "mode2.ck", m.cross_kerr);
        require_finite(first ? "mode1.ck_generalized" : "mode2.ck_generalized", m.generalized_ck);
        if (m.thermal_occupation && !(*m.thermal_occupation >= 0.0 && std::isfinite(*m.thermal_occupation)))
            throw ValidationError(first ? "mode1.thermal_occupation" : "mode2.thermal_occupation",
                                  "must be finite and non-negative");
    }
}

double drive_amplitude(double power, double kappa, double omega) {
    if (!(power >= 0.0)) throw ValidationError("power", "must be non-negative");
    if (!(omega > 0.0)) throw ValidationError("frequency", "must be positive");
    return std::sqrt(2.0 * kappa * power / (kHbar * omega));
}

double bose_occupation(double omega, double temperature) {
    if (temperature <= 0.0) return 0.0;
    return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

SystemParams system_from_circuit(const CompiledCircuit& c, const SystemParams& drive) {
    SystemParams p = drive;
    const auto& e = c.effective;
    p.control_frequency = e.cavity_frequency - drive.detuning;
    p.three_mode_ck = p.modes == ModeCount::two ? e.three_mode_ck : 0.0;
    for (int k = 0; k < 2; ++k) {
        p.mech[k].frequency = e.mech_frequency[k];
        p.mech[k].radiation_pressure = e.radiation_pressure[k];
        p.mech[k].cross_kerr = e.cross_kerr[k];
        p.mech[k].generalized_ck = e.generalized_ck[k];
    }
    return p.normalized();
}

} // namespace ckomit
