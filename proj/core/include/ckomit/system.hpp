#pragma once

#include <array>
#include <optional>

namespace ckomit {

struct CompiledCircuit;

enum class ModeCount { single, two };

struct MechanicalMode {
    double frequency = 0.0;      // w_mk, rad/s
    double damping = 0.0;        // gamma_k, rad/s
    double radiation_pressure = 0.0; // g_0,k
    double cross_kerr = 0.0;     // g_CK,k
    double generalized_ck = 0.0; // g'_CK,k
    std::optional<double> thermal_occupation; // overrides the Bose factor when set
};

// Effective-model parameters. All rates and couplings in rad/s, powers in W,
// temperature in K. In single-mode use the second mechanical mode is present
// in the matrices but fully decoupled.
struct SystemParams {
    ModeCount modes = ModeCount::single;
    double control_frequency = 0.0; // w_c
    double control_power = 0.0;     // P_c
    double probe_power = 0.0;       // P_p
    double detuning = 0.0;          // Delta_a = w_a - w_c
    double kappa = 0.0;
    double temperature = 0.0;
    double three_mode_ck = 0.0;     // g~_CK
    std::array<MechanicalMode, 2> mech{};

    double cavity_frequency() const { return control_frequency + detuning; }
    double modified_ck(int k) const;
    double control_drive() const;
    double probe_drive(double delta) const; // at w_p = w_c + delta
    double thermal_occupation(int k) const;
    bool has_mode(int k) const { return k == 0 || modes == ModeCount::two; }

    // Copy with mode-2 couplings forced to zero when running single-mode.
    SystemParams normalized() const;
};

void validate(const SystemParams& p);

// eps = sqrt(2 kappa P / (hbar w)).
double drive_amplitude(double power, double kappa, double omega);

// Mean thermal occupation 1/(exp(hbar w / kB T) - 1); zero at T = 0.
double bose_occupation(double omega, double temperature);

// Effective model from a compiled circuit plus the drive/dissipation data
// that the circuit does not determine. The control frequency is moved so
// that w_a - w_c keeps the requested detuning.
SystemParams system_from_circuit(const CompiledCircuit& compiled, const SystemParams& drive);

} // namespace ckomit
