#include "kgcornell/spectrum.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

using namespace kgcornell;

namespace {

const CouplingParams table1 = CouplingParams::table1();
constexpr std::array<int, 6> all_dims{1, 2, 3, 4, 5, 6};

} // namespace

TEST(KExponent, Table1GroundStateD3)
{
    const double k = k_exponent(table1, QuantumState{0, 0, 3, KVariant::Table1});
    EXPECT_NEAR(k, oracle::k_table1_d3_l0, 1e-9);
}

TEST(KExponent, HalfQuadraticEqualCouplingsGivesL)
{
    const CouplingParams p{0.7, 0.7, 0.0, 1.0, 1.0};
    EXPECT_NEAR(k_exponent(p, QuantumState{0, 1, 3, KVariant::HalfQuadratic}), 1.0, 1e-14);
}

TEST(KExponent, Table1EqualCouplingsGroundIsZero)
{
    for (int D = 2; D <= 7; ++D) {
        const CouplingParams p{1.3, 1.3, 0.0, 1.0, 1.0};
        EXPECT_EQ(k_exponent(p, QuantumState{0, 0, D, KVariant::Table1}), 0.0) << "D=" << D;
    }
}

TEST(KExponent, NegativeDiscriminantCarriesValue)
{
    const CouplingParams p{0.0, 0.0, 0.0, 1.0, 1.0};
    try {
        k_exponent(p, QuantumState{0, 1, 3, KVariant::Table1});
        FAIL() << "expected NegativeDiscriminant";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NegativeDiscriminant);
        ASSERT_TRUE(e.value().has_value());
        EXPECT_DOUBLE_EQ(*e.value(), 1.0 - 8.0);
    }
}

TEST(KExponent, VariantsAgreeAtZeroAngularMomentum)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coupling(0.0, 5.0);
    std::uniform_int_distribution<int> dim(1, 9);
    for (int trial = 0; trial < 500; ++trial) {
        const CouplingParams p{coupling(rng), coupling(rng), 0.0, 1.0, 1.0};
        const int D = dim(rng);
        if (k_discriminant(p, D, 0, KVariant::Table1) < 0.0)
            continue;
        EXPECT_NEAR(k_exponent(p, QuantumState{0, 0, D, KVariant::Table1}),
                    k_exponent(p, QuantumState{0, 0, D, KVariant::PrintedEq27}), 1e-12);
    }
}

TEST(KExponent, HalfQuadraticSolvesIndicialCondition)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coupling(0.0, 6.0);
    std::uniform_int_distribution<int> dim(1, 10);
    std::uniform_int_distribution<int> ang(0, 6);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const CouplingParams p{coupling(rng), coupling(rng), 0.0, 1.0, 1.0};
        const int D = dim(rng);
        const int l = D == 1 ? 0 : ang(rng);
        if (k_discriminant(p, D, l, KVariant::HalfQuadratic) < 0.0)
            continue;
        const double k = k_exponent(p, QuantumState{0, l, D, KVariant::HalfQuadratic});
        const double scale = std::max({1.0, k * k, p.a_s * p.a_s, static_cast<double>(l * (l + D))});
        EXPECT_LE(std::abs(indicial_residual(p, D, l, k)), 1e-12 * scale);
        ++checked;
    }
    EXPECT_GT(checked, 1000);
}

TEST(EnergyPair, PublishedAnchors)
{
    struct Anchor {
        int n, l, D;
        double plus, minus;
    };
    for (const auto& a : {Anchor{1, 0, 3, 5.670, -5.668}, Anchor{5, 4, 6, 4.071, -4.069},
                          Anchor{1, 0, 1, 6.012, -6.010}, Anchor{2, 1, 3, 5.899, -5.897},
                          Anchor{3, 2, 3, 5.998, -5.996}}) {
        const auto e = energy_pair(table1, QuantumState{a.n, a.l, a.D, KVariant::Table1});
        EXPECT_NEAR(e.e_plus, a.plus, 1.5e-3) << a.n << a.l << a.D;
        EXPECT_NEAR(e.e_minus, a.minus, 1.5e-3) << a.n << a.l << a.D;
        // published values are truncated, never rounded up
        EXPECT_GE(e.e_plus, a.plus);
    }
    EXPECT_NEAR(energy_pair(table1, QuantumState{1, 0, 3, KVariant::Table1}).e_plus, oracle::e_plus_n1_l0_d3, 1e-12);
}

TEST(EnergyPair, MasslessOscillatorLimit)
{
    const CouplingParams p{0.0, 0.0, 0.0, 2.0, 0.0};
    const auto e = energy_pair(p, QuantumState{0, 0, 3, KVariant::HalfQuadratic});
    EXPECT_NEAR(e.e_plus, std::sqrt(6.0), 1e-14);
    EXPECT_NEAR(e.e_minus, -std::sqrt(6.0), 1e-14);
}

TEST(EnergyPair, InvalidCouplings)
{
    for (const CouplingParams p : {CouplingParams{0.2, 6.0, 2.0, 1.0, 1.0}, CouplingParams{0.2, 6.0, 0.0, 0.0, 1.0},
                                   CouplingParams{0.2, 6.0, 0.0, 2.0, -1.0}}) {
        try {
            energy_pair(p, QuantumState{1, 0, 3, KVariant::Table1});
            FAIL() << "expected InvalidCouplings";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidCouplings);
        }
    }
}

TEST(EnergyPair, VietaSumProperty)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(0.0, 4.0);
    std::uniform_real_distribution<double> bs(0.01, 5.0);
    std::uniform_real_distribution<double> frac(-0.99, 0.99);
    std::uniform_real_distribution<double> mass(0.0, 5.0);
    std::uniform_int_distribution<int> small(0, 6);
    int checked = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        CouplingParams p{a(rng), a(rng), 0.0, bs(rng), mass(rng)};
        p.b_v = frac(rng) * p.b_s;
        const int D = 1 + small(rng);
        const QuantumState s{small(rng), D == 1 ? 0 : small(rng), D, KVariant::Table1};
        try {
            const auto e = energy_pair(p, s);
            EXPECT_NEAR(e.e_plus + e.e_minus, 2.0 * p.M * p.b_v / p.b_s, 1e-9);
            EXPECT_GE(e.e_plus, e.e_minus);
            EXPECT_GE(e.discriminant, 0.0);
            ++checked;
        } catch (const Error& err) {
            EXPECT_EQ(err.kind(), ErrorKind::NegativeDiscriminant);
        }
    }
    EXPECT_GT(checked, 500);
}

TEST(EnergyPair, TinyVectorCouplingKeepsSmallRootAccurate)
{
    // roots of E^2 + bE + c with |b| << sqrt(|c|): the naive formula loses the small sum
    CouplingParams p = table1;
    p.b_v = 1e-13;
    const auto e = energy_pair(p, QuantumState{1, 0, 3, KVariant::Table1});
    EXPECT_NEAR(e.e_plus + e.e_minus, 2.0 * p.M * p.b_v / p.b_s, 1e-15);
}

TEST(LinearForm, CoefficientsForDefaultSpectrum)
{
    const auto s = linear_form(table1, 3, 0, KVariant::Table1);
    EXPECT_NEAR(s.A, 28.14053, 1e-4);
    EXPECT_NEAR(s.B, 3.999996, 1e-4);
    EXPECT_NEAR(s.A, oracle::linear_A, 1e-11);
    EXPECT_NEAR(s.B, oracle::linear_B, 1e-13);
    const auto e0 = energy_pair(table1, QuantumState{0, 0, 3, KVariant::Table1});
    EXPECT_NEAR(table1.M * s.e0, e0.e_plus, 1e-12 * e0.e_plus);
}

TEST(LinearForm, ReproducesQuadraticRoots)
{
    for (auto variant : {KVariant::Table1, KVariant::PrintedEq27, KVariant::HalfQuadratic}) {
        for (int D = 1; D <= 6; ++D) {
            const auto s = linear_form(table1, D, 0, variant);
            for (int n = 0; n <= 50; ++n) {
                const double closed = energy_pair(table1, QuantumState{n, 0, D, variant}).e_plus;
                const double recast = table1.M * (table1.b_v / table1.b_s + std::sqrt(s.A + s.B * n));
                EXPECT_NEAR(recast, closed, 1e-12 * std::abs(closed));
            }
        }
    }
}

TEST(LinearForm, DegenerateMassRejected)
{
    CouplingParams p = table1;
    p.M = 0.0;
    EXPECT_THROW(linear_form(p, 3, 0, KVariant::Table1), Error);
}

TEST(LinearForm, NegativeOffsetRejected)
{
    try {
        linear_form(table1, 6, 4, KVariant::Table1);
        FAIL() << "expected NonPositiveOffset";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonPositiveOffset);
        EXPECT_LT(*e.value(), 0.0);
    }
    EXPECT_LT(linear_coefficients(table1, 6, 4, KVariant::Table1).A, 0.0);
}

TEST(SpectrumTable, FullGridCountAndOrder)
{
    const auto rows = spectrum_table(table1, all_dims, 5, KVariant::Table1);
    ASSERT_EQ(rows.size(), 90u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        EXPECT_TRUE(std::tie(a.n, a.l, a.D) < std::tie(b.n, b.l, b.D));
    }
    for (const auto& r : rows) {
        EXPECT_TRUE(r.ok());
        EXPECT_NEAR(r.e_plus + r.e_minus, 0.002, 1e-9);
    }
}

TEST(SpectrumTable, SingleCell)
{
    const std::array<int, 1> d3{3};
    const auto rows = spectrum_table(table1, d3, 1, KVariant::Table1);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].n, 1);
    EXPECT_EQ(rows[0].l, 0);
}

TEST(SpectrumTable, CellFailuresAreRecordedNotThrown)
{
    const CouplingParams p{1.0, 1.0, 0.0, 2.0, 1.0};
    const std::array<int, 1> d3{3};
    const auto rows = spectrum_table(p, d3, 3, KVariant::Table1);
    ASSERT_EQ(rows.size(), 6u);
    int failed = 0;
    for (const auto& r : rows) {
        if (r.l > 0) {
            EXPECT_EQ(r.status, "NegativeDiscriminant");
            EXPECT_TRUE(std::isnan(r.e_plus));
            ++failed;
        } else {
            EXPECT_TRUE(r.ok());
        }
    }
    EXPECT_EQ(failed, 3);
    EXPECT_THROW(spectrum_table(CouplingParams{0.2, 6.0, 3.0, 2.0, 1.0}, d3, 3, KVariant::Table1), Error);
    EXPECT_THROW(spectrum_table(p, d3, 0, KVariant::Table1), Error);
}

TEST(SpectrumTable, MonotoneInDimensionAngularMomentumAndN)
{
    auto e = [](int n, int l, int D) { return energy_pair(table1, QuantumState{n, l, D, KVariant::Table1}).e_plus; };
    for (int n = 1; n <= 5; ++n)
        for (int l = 0; l < n; ++l)
            for (int D = 1; D < 6; ++D)
                EXPECT_GT(e(n, l, D), e(n, l, D + 1)) << n << l << D;
    for (int n = 1; n <= 5; ++n)
        for (int D = 2; D <= 6; ++D)
            for (int l = 0; l + 1 < n; ++l)
                EXPECT_GT(e(n, l, D), e(n, l + 1, D)) << n << l << D;
    for (int l = 0; l <= 4; ++l)
        for (int D = 1; D <= 6; ++D)
            for (int n = l + 1; n < 5; ++n)
                EXPECT_LT(e(n, l, D), e(n + 1, l, D)) << n << l << D;
}
