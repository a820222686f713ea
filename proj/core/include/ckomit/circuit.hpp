#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ckomit {

// Direct description of the qubit-mechanics coupling, used instead of the
// gate-voltage shortcut when zero-point motion and dC_g/dx are known.
struct MechanicalLever {
    double zero_point_motion = 0.0;    // m
    double capacitance_gradient = 0.0; // F/m
};

// Raw circuit quantities. Index 0 belongs to the first SCPT / mechanical
// resonator, index 1 to the second. Energies in joules, frequencies in rad/s.
struct CircuitParams {
    std::array<double, 2> josephson_energy{};
    std::array<double, 2> charging_energy{};
    std::array<double, 2> gate_charge_deviation{};
    std::array<double, 2> gate_voltage{};   // V
    std::array<double, 2> capacitance{};    // F
    std::array<double, 2> mech_bare_frequency{};
    double cavity_bare_frequency = 0.0;
    double impedance = 0.0; // ohm
    double flux_phase = 0.0;
    std::array<std::optional<MechanicalLever>, 2> lever{};
};

// Effective two-level fields (J). transverse = B1, B1'; longitudinal = B3, B3'.
struct QubitFields {
    std::array<double, 2> transverse{};
    std::array<double, 2> longitudinal{};
    double magnitude = 0.0; // B~

    double transverse_sum() const { return transverse[0] + transverse[1]; }
    double longitudinal_sum() const { return longitudinal[0] + longitudinal[1]; }
};

// Expansion coefficients. mech_coupling and cavity_coupling are energies (J);
// static_force is an energy; every other entry is the coefficient divided by
// hbar, i.e. rad/s.
struct BareCouplings {
    std::array<double, 2> mech_coupling{};   // g_m1, g_m2
    std::array<double, 2> cavity_coupling{}; // g_q, g_q'
    double static_force = 0.0;               // alpha
    double cavity_stark = 0.0;               // g_Sc
    double mech_stark = 0.0;                 // g_Sm
    double radiation_pressure = 0.0;         // g_rp
    double cross_kerr = 0.0;                 // g_CK^0
    double cubic = 0.0;                      // g_cub^0
    double quartic = 0.0;                    // g_quartic^0
    std::array<double, 4> quartic_cavity{};  // G1^0 .. G4^0
};

struct RenormalizedFrequencies {
    double cavity = 0.0;
    std::array<double, 2> mech{};
};

// Coefficients of the effective Hamiltonian, rad/s.
struct EffectiveCouplings {
    double cavity_frequency = 0.0;
    std::array<double, 2> mech_frequency{};
    std::array<double, 2> radiation_pressure{}; // g_0,k
    std::array<double, 2> cross_kerr{};         // g_CK,k
    std::array<double, 2> generalized_ck{};     // g'_CK,k
    double three_mode_ck = 0.0;                 // g~_CK
    std::array<double, 2> cubic{};              // g_cub,k
    std::array<double, 2> cubic_mixed{};        // g'_cub,k
    std::array<double, 2> residual_g1{};        // G_1,k
    std::array<double, 2> residual_g2{};        // G_2,k
    std::array<double, 2> residual_g3{};        // G_3,k
    std::array<double, 2> residual_g3_mixed{};  // G'_3,k
    std::array<double, 2> residual_g4{};        // G_4,k
    double residual_g4_joint = 0.0;             // G_4

    double modified_ck(int k) const { return cross_kerr[k] + generalized_ck[k] + three_mode_ck; }
};

struct ValidityCheck {
    std::string name;
    double ratio = 0.0;
    bool ok = true;
};

struct ValidityReport {
    double threshold = 0.1;
    std::vector<ValidityCheck> checks;

    bool valid() const;
    const ValidityCheck* find(const std::string& name) const;
};

struct CompiledCircuit {
    QubitFields fields;
    BareCouplings bare;
    RenormalizedFrequencies frequencies;
    EffectiveCouplings effective;
    ValidityReport validity;
};

void validate(const CircuitParams& circuit);

QubitFields effective_fields(const CircuitParams& circuit);

// g_m through the gate-voltage shortcut, or through the lever when supplied.
double mech_coupling(const CircuitParams& circuit, int k);

BareCouplings bare_couplings(const CircuitParams& circuit, const QubitFields& fields);

RenormalizedFrequencies bogoliubov_renormalize(const BareCouplings& bare, const CircuitParams& circuit);

EffectiveCouplings effective_couplings(const BareCouplings& bare, const CircuitParams& circuit,
                                       const RenormalizedFrequencies& renormalized);

ValidityReport validate_hierarchy(const CircuitParams& circuit, const QubitFields& fields,
                                  const BareCouplings& bare, const EffectiveCouplings& effective,
                                  double threshold = 0.1);

CompiledCircuit compile_circuit(const CircuitParams& circuit, double threshold = 0.1);

} // namespace ckomit
