#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "ckomit/circuit.hpp"
#include "ckomit/constants.hpp"
#include "ckomit/errors.hpp"
#include "support.hpp"

using namespace ckomit;
using ckomit::testing::rel_err;

namespace {

namespace mp = boost::multiprecision;
using real50 = mp::cpp_bin_float_50;
using complex50 = mp::cpp_complex_50;

constexpr double kH = kTwoPi * kHbar;

CircuitParams representative() {
    CircuitParams c;
    c.josephson_energy = {kH * 2e9, kH * 2.5e9};
    c.charging_energy = {kH * 30e9, kH * 28e9};
    c.gate_charge_deviation = {0.2, 0.25};
    c.gate_voltage = {0.8, -0.8};
    c.capacitance = {2e-15, 2e-15};
    c.mech_bare_frequency = {kTwoPi * 50e6, kTwoPi * 50e6};
    c.cavity_bare_frequency = kTwoPi * 10e9;
    c.impedance = 50.0;
    return c;
}

// Taylor coefficient of Y^a X^b of the lower qubit eigenvalue
// -1/2 sqrt((S3 + 2 g_m X)^2 + (S1 + 2 g_q Y)^2), by a trapezoidal Cauchy
// integral over a torus well inside the radius of convergence.
class CauchyOracle {
public:
    CauchyOracle(double s1, double s3, double gm, double gq) : s1_(s1), s3_(s3), gm_(gm), gq_(gq) {
        const real50 bt = mp::sqrt(s1_ * s1_ + s3_ * s3_);
        rx_ = gm_ == 0 ? real50(1) : real50(0.1) * bt / mp::abs(2 * gm_);
        ry_ = gq_ == 0 ? real50(1) : real50(0.1) * bt / mp::abs(2 * gq_);
        const real50 pi = boost::math::constants::pi<real50>();
        for (int j = 0; j < kN; ++j) {
            const real50 t = 2 * pi * j / kN;
            unit_[j] = complex50(mp::cos(t), mp::sin(t));
        }
        for (int j = 0; j < kN; ++j)
            for (int l = 0; l < kN; ++l) {
                const complex50 x = rx_ * unit_[j];
                const complex50 y = ry_ * unit_[l];
                const complex50 u = s3_ + 2 * gm_ * x;
                const complex50 v = s1_ + 2 * gq_ * y;
                values_[j][l] = -mp::sqrt(u * u + v * v) / 2;
            }
    }

    real50 coefficient(int a, int b) const {
        complex50 sum = 0;
        for (int j = 0; j < kN; ++j)
            for (int l = 0; l < kN; ++l)
                sum += values_[j][l] * power(conj_unit(j), b) * power(conj_unit(l), a);
        sum /= kN * kN;
        return sum.real() / (mp::pow(rx_, b) * mp::pow(ry_, a));
    }

private:
    static constexpr int kN = 48;

    complex50 conj_unit(int j) const { return complex50(unit_[j].real(), -unit_[j].imag()); }
    static complex50 power(complex50 z, int n) {
        complex50 r = 1;
        for (int i = 0; i < n; ++i) r *= z;
        return r;
    }

    real50 s1_, s3_, gm_, gq_;
    real50 rx_, ry_;
    std::array<complex50, kN> unit_;
    std::array<std::array<complex50, kN>, kN> values_;
};

} // namespace

TEST(EffectiveFields, ZeroJosephsonEnergy) {
    CircuitParams c = representative();
    c.josephson_energy = {0.0, 0.0};
    c.charging_energy = {1.0, 1.0};
    c.gate_charge_deviation = {0.0, 0.0};
    const QubitFields f = effective_fields(c);
    EXPECT_EQ(f.transverse[0], 0.0);
    EXPECT_EQ(f.transverse[1], 0.0);
    EXPECT_EQ(f.longitudinal[0], 4.0);
    EXPECT_EQ(f.longitudinal[1], 4.0);
    EXPECT_EQ(f.magnitude, 8.0);
}

TEST(EffectiveFields, SymmetryPointKillsLongitudinalField) {
    CircuitParams c = representative();
    c.gate_charge_deviation = {1.0, 1.0};
    const QubitFields f = effective_fields(c);
    EXPECT_EQ(f.longitudinal_sum(), 0.0);
    EXPECT_DOUBLE_EQ(f.magnitude, std::abs(f.transverse_sum()));
}

TEST(EffectiveFields, HighPrecisionRecomputation) {
    const CircuitParams c = representative();
    const QubitFields f = effective_fields(c);
    const real50 b1 = -2 * real50(c.josephson_energy[0]) - 2 * real50(c.josephson_energy[1]);
    const real50 b3 = 4 * real50(c.charging_energy[0]) * (1 - real50(c.gate_charge_deviation[0])) +
                      4 * real50(c.charging_energy[1]) * (1 - real50(c.gate_charge_deviation[1]));
    const double expected = static_cast<double>(mp::sqrt(b1 * b1 + b3 * b3));
    EXPECT_LE(rel_err(f.magnitude, expected), 1e-15);
}

TEST(EffectiveFields, DegenerateBasisRejected) {
    CircuitParams c = representative();
    c.josephson_energy = {0.0, 0.0};
    c.gate_charge_deviation = {1.0, 1.0};
    EXPECT_THROW(effective_fields(c), ValidationError);
}

TEST(CircuitValidation, RejectsFluxAndNegativeEnergies) {
    CircuitParams c = representative();
    c.flux_phase = 0.1;
    EXPECT_THROW(compile_circuit(c), ValidationError);
    c = representative();
    c.josephson_energy[0] = -1.0;
    EXPECT_THROW(compile_circuit(c), ValidationError);
    c = representative();
    c.impedance = 0.0;
    EXPECT_THROW(compile_circuit(c), ValidationError);
}

TEST(BareCouplings, MatchesCauchyExpansionOracle) {
    const CircuitParams c = representative();
    const QubitFields f = effective_fields(c);
    const BareCouplings b = bare_couplings(c, f);
    const double gm = b.mech_coupling[0];
    const double gq = b.cavity_coupling[0] + b.cavity_coupling[1];
    const CauchyOracle oracle(f.transverse_sum(), f.longitudinal_sum(), gm, gq);

    struct Entry {
        const char* name;
        int a, b;
        double value; // J
    };
    const std::vector<Entry> entries{
        {"static_force", 0, 1, b.static_force},
        {"cavity_stark", 1, 0, b.cavity_stark * kHbar},
        {"mech_stark", 0, 2, b.mech_stark * kHbar},
        {"radiation_pressure", 1, 1, b.radiation_pressure * kHbar},
        {"cross_kerr", 1, 2, b.cross_kerr * kHbar},
        {"cubic", 1, 3, b.cubic * kHbar},
        {"quartic", 1, 4, b.quartic * kHbar},
        {"G2", 2, 2, b.quartic_cavity[1] * kHbar},
        {"G3", 2, 3, b.quartic_cavity[2] * kHbar},
    };
    for (const auto& e : entries) {
        const double exact = static_cast<double>(oracle.coefficient(e.a, e.b));
        EXPECT_LE(rel_err(e.value, exact), 1e-12) << e.name << " " << e.value << " vs " << exact;
    }
}

// G1 and G4 are kept in their printed closed forms, which differ from the
// series coefficients; they only feed the validity report.
TEST(BareCouplings, ResidualTermsFollowPrintedForms) {
    const CircuitParams c = representative();
    const QubitFields f = effective_fields(c);
    const BareCouplings b = bare_couplings(c, f);
    const real50 gm = b.mech_coupling[0];
    const real50 gq = b.cavity_coupling[0] + b.cavity_coupling[1];
    const real50 s1 = f.transverse_sum();
    const real50 s3 = f.longitudinal_sum();
    const real50 bt2 = s1 * s1 + s3 * s3;
    const real50 bt = mp::sqrt(bt2);
    const real50 g1 = 2 * gm * gq * gq * s3 * (bt2 - 3 * s3 * s3) / mp::pow(bt, 5);
    const real50 g4 = mp::pow(gm, 4) * gq * gq *
                      (60 * bt2 * s3 * s3 + 30 * bt2 * s1 * s1 - 6 * bt2 * bt2 - 70 * mp::pow(s3, 4) -
                       420 * s1 * s1 * s3 * s3) /
                      mp::pow(bt, 9);
    EXPECT_LE(rel_err(b.quartic_cavity[0] * kHbar, static_cast<double>(g1)), 1e-12);
    EXPECT_LE(rel_err(b.quartic_cavity[3] * kHbar, static_cast<double>(g4)), 1e-12);
}

TEST(BareCouplings, DecoupledMechanicsVanish) {
    CircuitParams c = representative();
    c.gate_voltage = {0.0, 0.0};
    const CompiledCircuit cc = compile_circuit(c);
    EXPECT_EQ(cc.bare.radiation_pressure, 0.0);
    EXPECT_EQ(cc.bare.cross_kerr, 0.0);
    EXPECT_EQ(cc.bare.cubic, 0.0);
    EXPECT_EQ(cc.bare.quartic, 0.0);
    EXPECT_EQ(cc.bare.mech_stark, 0.0);
    for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(cc.effective.radiation_pressure[k], 0.0);
        EXPECT_EQ(cc.effective.cross_kerr[k], 0.0);
        EXPECT_EQ(cc.effective.generalized_ck[k], 0.0);
    }
    EXPECT_EQ(cc.effective.three_mode_ck, 0.0);
    EXPECT_EQ(cc.effective.mech_frequency[0], c.mech_bare_frequency[0]);
}

TEST(BareCouplings, DecoupledCavityVanishes) {
    CircuitParams c = representative();
    c.josephson_energy = {0.0, 0.0};
    const CompiledCircuit cc = compile_circuit(c);
    EXPECT_EQ(cc.bare.cavity_stark, 0.0);
    EXPECT_EQ(cc.bare.radiation_pressure, 0.0);
    for (double g : cc.bare.quartic_cavity) EXPECT_EQ(g, 0.0);
    EXPECT_EQ(cc.effective.cavity_frequency, c.cavity_bare_frequency);
}

TEST(Bogoliubov, StarkFreeKeepsBareFrequencies) {
    const CircuitParams c = representative();
    BareCouplings b;
    const auto w = bogoliubov_renormalize(b, c);
    EXPECT_EQ(w.cavity, c.cavity_bare_frequency);
    EXPECT_EQ(w.mech[0], c.mech_bare_frequency[0]);

    b.cavity_stark = 1e-30 * c.cavity_bare_frequency;
    EXPECT_LE(rel_err(bogoliubov_renormalize(b, c).cavity, c.cavity_bare_frequency), 1e-14);
}

TEST(Bogoliubov, AlgebraicIdentityAndBoundary) {
    const CircuitParams c = representative();
    BareCouplings b;
    b.cavity_stark = 2.0 * c.cavity_bare_frequency;
    EXPECT_DOUBLE_EQ(bogoliubov_renormalize(b, c).cavity, 3.0 * c.cavity_bare_frequency);
    b.cavity_stark = -c.cavity_bare_frequency / 4.0;
    EXPECT_THROW(bogoliubov_renormalize(b, c), ValidationError);
    b.cavity_stark = 0.0;
    b.mech_stark = -c.mech_bare_frequency[0];
    EXPECT_THROW(bogoliubov_renormalize(b, c), ValidationError);
}

TEST(EffectiveCouplings, DegenerateModesThreeModeIsTwiceGeneralized) {
    const CompiledCircuit cc = compile_circuit(representative());
    EXPECT_NE(cc.effective.generalized_ck[0], 0.0);
    EXPECT_LE(rel_err(cc.effective.three_mode_ck, 2.0 * cc.effective.generalized_ck[0]), 1e-15);
    EXPECT_EQ(cc.effective.generalized_ck[0], cc.effective.generalized_ck[1]);
}

TEST(EffectiveCouplings, RadiationPressureAntisymmetric) {
    const CompiledCircuit cc = compile_circuit(representative());
    EXPECT_NE(cc.effective.radiation_pressure[0], 0.0);
    EXPECT_EQ(cc.effective.radiation_pressure[0], -cc.effective.radiation_pressure[1]);
    EXPECT_EQ(cc.effective.cross_kerr[0], cc.effective.cross_kerr[1]);
}

TEST(EffectiveCouplings, ZeroRadiationPressureGivesZeroG0) {
    const CircuitParams c = representative();
    BareCouplings b = bare_couplings(c, effective_fields(c));
    b.radiation_pressure = 0.0;
    const auto e = effective_couplings(b, c, bogoliubov_renormalize(b, c));
    EXPECT_EQ(e.radiation_pressure[0], 0.0);
    EXPECT_EQ(e.radiation_pressure[1], 0.0);
}

TEST(EffectiveCouplings, SmoothInEveryInput) {
    using Setter = std::function<double&(CircuitParams&)>;
    const std::vector<std::pair<const char*, Setter>> inputs{
        {"E_J", [](CircuitParams& c) -> double& { return c.josephson_energy[0]; }},
        {"E_c", [](CircuitParams& c) -> double& { return c.charging_energy[0]; }},
        {"dn", [](CircuitParams& c) -> double& { return c.gate_charge_deviation[1]; }},
        {"V_g", [](CircuitParams& c) -> double& { return c.gate_voltage[0]; }},
        {"C", [](CircuitParams& c) -> double& { return c.capacitance[0]; }},
        {"Z0", [](CircuitParams& c) -> double& { return c.impedance; }},
        {"w_c", [](CircuitParams& c) -> double& { return c.cavity_bare_frequency; }},
        {"w_m", [](CircuitParams& c) -> double& { return c.mech_bare_frequency[0]; }},
    };
    auto outputs = [](const CircuitParams& c) {
        const auto e = compile_circuit(c).effective;
        return std::vector<double>{e.cavity_frequency,   e.mech_frequency[0],   e.radiation_pressure[0],
                                   e.cross_kerr[0],      e.generalized_ck[0],   e.three_mode_ck,
                                   e.cubic[0],           e.residual_g2[0],      e.residual_g4_joint};
    };
    const CircuitParams base = representative();
    const auto y0 = outputs(base);
    for (const auto& [name, ref] : inputs) {
        CircuitParams probe = base;
        const double x0 = ref(probe);
        auto derivative = [&](double h) {
            CircuitParams up = base, down = base;
            ref(up) = x0 + h;
            ref(down) = x0 - h;
            const auto yu = outputs(up);
            const auto yd = outputs(down);
            std::vector<double> d(yu.size());
            for (std::size_t i = 0; i < d.size(); ++i) d[i] = (yu[i] - yd[i]) / (2.0 * h);
            return d;
        };
        const double h = 2e-4 * std::abs(x0);
        const auto d1 = derivative(h);
        const auto d2 = derivative(h / 2.0);
        for (std::size_t i = 0; i < d1.size(); ++i) {
            // Outputs that do not depend on this input must stay flat.
            const double scale = std::abs(y0[i]) / std::abs(x0);
            if (std::abs(d2[i]) <= 1e-9 * scale) {
                EXPECT_LE(std::abs(d1[i]), 1e-9 * scale) << name << " output " << i;
                continue;
            }
            EXPECT_LE(rel_err(d1[i], d2[i]), 1e-6) << name << " output " << i;
        }
    }
}

// Deep in the dispersive regime every retained coupling dominates the dropped
// G-terms except g'_CK, which carries two more powers of x_zpf than G2.
TEST(ValidityReport, RepresentativeCircuitHierarchy) {
    CircuitParams c = representative();
    c.charging_energy = {kH * 60e9, kH * 56e9};
    const CompiledCircuit cc = compile_circuit(c);
    for (const auto& check : cc.validity.checks) {
        const bool generalized = check.name.rfind("residual_vs_generalized_ck", 0) == 0;
        EXPECT_EQ(check.ok, !generalized) << check.name << " ratio " << check.ratio;
    }
    EXPECT_FALSE(cc.validity.valid());
    EXPECT_LT(cc.validity.find("dispersive_1")->ratio, 0.1);
}

TEST(ValidityReport, ResidualEqualToG0IsFlagged) {
    const CircuitParams c = representative();
    const CompiledCircuit cc = compile_circuit(c);
    EffectiveCouplings e = cc.effective;
    e.residual_g4_joint = std::abs(e.radiation_pressure[0]);
    e.residual_g2 = {0.0, 0.0};
    e.residual_g4 = {0.0, 0.0};
    const auto rep = validate_hierarchy(c, cc.fields, cc.bare, e);
    const auto* check = rep.find("residual_vs_g0_1");
    ASSERT_NE(check, nullptr);
    EXPECT_DOUBLE_EQ(check->ratio, 1.0);
    EXPECT_FALSE(check->ok);
    EXPECT_FALSE(rep.valid());
}

TEST(ValidityReport, DecoupledResidualsReportZero) {
    CircuitParams c = representative();
    c.gate_voltage = {0.0, 0.0};
    const CompiledCircuit cc = compile_circuit(c);
    for (const char* name : {"residual_vs_g0_1", "residual_vs_ck_1", "residual_vs_generalized_ck_1"}) {
        const auto* check = cc.validity.find(name);
        ASSERT_NE(check, nullptr) << name;
        EXPECT_EQ(check->ratio, 0.0) << name;
        EXPECT_TRUE(check->ok) << name;
    }
}

TEST(MechCoupling, LeverPathUsedWhenGiven) {
    CircuitParams c = representative();
    const double shortcut = mech_coupling(c, 0);
    c.lever[0] = MechanicalLever{1e-14, 1e-9};
    const double lever = mech_coupling(c, 0);
    EXPECT_NE(lever, shortcut);
    EXPECT_DOUBLE_EQ(lever, -4.0 * c.charging_energy[0] * 1e-14 * 1e-9 * c.gate_voltage[0] /
                                (2.0 * kElementaryCharge));
}
