#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "ckomit/config.hpp"
#include "ckomit/constants.hpp"
#include "ckomit/errors.hpp"

using namespace ckomit;

namespace {

const std::string kMinimal = R"(
[system]
control_frequency_hz = 10e9
control_power_nw = 0.07
kappa = 1e6
detuning_over_omega_m1 = 1

[mode1]
frequency_hz = 50e6
damping = 5e5
rp_coupling = -3.3e6
)";

std::string field_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return {};
}

} // namespace

TEST(Config, MinimalSingleModeDefaults) {
    const RunConfig c = parse_config(kMinimal);
    EXPECT_EQ(c.model.modes, ModeCount::single);
    EXPECT_DOUBLE_EQ(c.model.control_frequency, kTwoPi * 10e9);
    EXPECT_DOUBLE_EQ(c.model.control_power, 0.07e-9);
    EXPECT_FALSE(c.sweep.has_value());
    EXPECT_EQ(c.grid.points, 2001u);
    EXPECT_EQ(c.solver.seeds, 8);
    EXPECT_EQ(c.stability, StabilityPolicy::require);
    const SystemParams p = build_system(c);
    EXPECT_DOUBLE_EQ(p.detuning, kTwoPi * 50e6);
    EXPECT_EQ(p.mech[0].cross_kerr, 0.0);
    EXPECT_EQ(p.mech[1].radiation_pressure, 0.0);
}

TEST(Config, UnknownKeyNamesTheField) {
    EXPECT_EQ(field_of(kMinimal + "colour = red\n"), "mode1.colour");
    EXPECT_THROW(parse_config("[bogus]\nx = 1\n" + kMinimal), ValidationError);
}

TEST(Config, BothParameterSourcesRejected) {
    const std::string text = kMinimal + R"(
[circuit]
josephson_energy_1_hz = 2e9
josephson_energy_2_hz = 2e9
charging_energy_1_hz = 30e9
charging_energy_2_hz = 30e9
mech_bare_frequency_1_hz = 50e6
mech_bare_frequency_2_hz = 50e6
cavity_bare_frequency_hz = 10e9
impedance = 50
)";
    try {
        parse_config(text);
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("both parameter sources"), std::string::npos) << e.what();
    }
}

TEST(Config, CircuitSourceCompiles) {
    const std::string text = R"(
[system]
control_power_nw = 0.07
kappa = 1e6
detuning_over_omega_m1 = 1

[mode1]
damping = 5e5

[circuit]
josephson_energy_1_hz = 2e9
josephson_energy_2_hz = 2.5e9
charging_energy_1_hz = 30e9
charging_energy_2_hz = 28e9
gate_charge_deviation_1 = 0.2
gate_charge_deviation_2 = 0.25
gate_voltage_1 = 0.8
gate_voltage_2 = -0.8
capacitance_1 = 2e-15
capacitance_2 = 2e-15
mech_bare_frequency_1_hz = 50e6
mech_bare_frequency_2_hz = 50e6
cavity_bare_frequency_hz = 10e9
impedance = 50
)";
    const RunConfig c = parse_config(text);
    ASSERT_TRUE(c.circuit.has_value());
    const SystemParams p = build_system(c);
    const CompiledCircuit cc = compile_circuit(*c.circuit);
    EXPECT_EQ(p.mech[0].radiation_pressure, cc.effective.radiation_pressure[0]);
    EXPECT_DOUBLE_EQ(p.cavity_frequency(), cc.effective.cavity_frequency);
    EXPECT_DOUBLE_EQ(p.detuning, cc.effective.mech_frequency[0]);
}

TEST(Config, ParseErrorCarriesLine) {
    try {
        parse_config("[system\nkappa = 1\n");
        FAIL() << "expected a parse error";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.line(), 1);
    }
}

TEST(Config, ValueErrorsNameTheField) {
    std::string text = kMinimal;
    text.replace(text.find("kappa = 1e6"), 11, "kappa = -1");
    EXPECT_EQ(field_of(text), "kappa");
    EXPECT_EQ(field_of(kMinimal + "[mode2]\nfrequency_ratio = 1\n"), "mode2");
    EXPECT_EQ(field_of(kMinimal + "[solver]\nbranch = sideways\n"), "solver.branch");
    EXPECT_EQ(field_of(kMinimal + "[sweep]\nparameter = colour\nvalues = 1\n"), "sweep.parameter");
    EXPECT_EQ(field_of(kMinimal + "[sweep]\nparameter = kappa\nvalues = 1\noutputs = ,\n"), "sweep.outputs");
}

TEST(Config, DetuningKeysAreExclusive) {
    EXPECT_THROW(parse_config(kMinimal + "[system]\ndetuning = 1\n"), ConfigError);
    std::string text = kMinimal;
    text.replace(text.find("detuning_over_omega_m1 = 1"), 26, "mechanical_resonance = sideways");
    EXPECT_THROW(parse_config(text), ValidationError);
}

TEST(Config, Fig2PresetMatchesCaption) {
    const RunConfig c = load_config(std::filesystem::path(CKOMIT_PRESET_DIR) / "fig2.cfg");
    const SystemParams p = build_system_unretuned(c);
    EXPECT_DOUBLE_EQ(p.control_power, 0.07e-9);
    EXPECT_DOUBLE_EQ(p.control_frequency, kTwoPi * 10e9);
    EXPECT_EQ(p.kappa, 1e6);
    EXPECT_DOUBLE_EQ(p.mech[0].frequency, kTwoPi * 50e6);
    EXPECT_EQ(p.mech[0].damping, 5e5);
    EXPECT_EQ(p.mech[0].radiation_pressure, -3.3e6);
    EXPECT_DOUBLE_EQ(p.mech[0].cross_kerr, 0.01 * -3.3e6);
    EXPECT_DOUBLE_EQ(p.mech[0].generalized_ck, 0.003 * -3.3e6);
    ASSERT_TRUE(c.sweep.has_value());
    EXPECT_EQ(c.sweep->axis.parameter, "rp_over_kappa");
}

TEST(Config, EveryPresetLoads) {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(CKOMIT_PRESET_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 7);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/ck.cfg"), ConfigError); }

TEST(Config, ApplyParameter) {
    RunConfig c = parse_config(kMinimal);
    apply_parameter(c, "rp_over_kappa", 2.0);
    EXPECT_EQ(build_system(c).mech[0].radiation_pressure, -2e6);
    apply_parameter(c, "ck_over_g0", 0.5);
    EXPECT_EQ(build_system(c).mech[0].cross_kerr, -1e6);
    apply_parameter(c, "effective_detuning_over_omega_m1", 1.0);
    EXPECT_TRUE(c.model.effective_detuning_ratio.has_value());
    EXPECT_FALSE(c.model.detuning_ratio.has_value());
    EXPECT_THROW(apply_parameter(c, "colour", 1.0), ValidationError);
}

TEST(Config, SecondModeInheritsFirstModeCouplings) {
    const RunConfig c = parse_config(R"(
[run]
mode = two
[system]
control_frequency_hz = 10e9
control_power_nw = 0.09
kappa = 1e6
detuning_over_omega_m1 = 1
three_mode_ck_over_g0 = 0.0018
[mode1]
frequency_hz = 50e6
damping = 5e5
rp_coupling = -3.1e6
ck_over_g0 = -0.02
[mode2]
frequency_ratio = 1.05
)");
    const SystemParams p = build_system(c);
    EXPECT_EQ(p.mech[1].radiation_pressure, p.mech[0].radiation_pressure);
    EXPECT_EQ(p.mech[1].cross_kerr, p.mech[0].cross_kerr);
    EXPECT_DOUBLE_EQ(p.mech[1].frequency, 1.05 * p.mech[0].frequency);
    EXPECT_DOUBLE_EQ(p.three_mode_ck, 0.0018 * -3.1e6);
}
