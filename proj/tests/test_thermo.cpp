#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <vdw/phase_diagram.hpp>
#include <vdw/thermo.hpp>

using namespace vdw;

namespace {

const EosParams kEos{};

TauE random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> tau(0.55, 20.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double t = tau(rng);
    // e between the domain bound and a warm supercritical state
    const double e = -kEos.a / t + 1e-3 + u(rng) * 6.0;
    return {t, e};
}

}  // namespace

TEST(Thermo, EntropyGolden) {
    EXPECT_NEAR(entropy(kEos, {1.5, 1.0 / 3.0}), 0.0, 1e-15);
    EXPECT_NEAR(entropy(kEos, {0.8, 2.1}), 3.024894635347957, 1e-12);
    EXPECT_NEAR(entropy(kEos, {3.2, 2.9}), 3.9977742371691565, 1e-12);
}

TEST(Thermo, TemperaturePressureGolden) {
    EXPECT_NEAR(temperature(kEos, {0.8, 2.1}), 1.1166666666666667, 1e-13);
    EXPECT_NEAR(temperature(kEos, {3.2, 2.9}), 1.0708333333333333, 1e-13);
    EXPECT_NEAR(temperature(kEos, {1.0, 2.0}), 1.0, 1e-15);
    EXPECT_NEAR(pressure(kEos, {0.8, 2.1}), 0.2986111111111, 1e-12);
    EXPECT_NEAR(pressure(kEos, {3.2, 2.9}), 0.1006462, 1e-7);
    EXPECT_NEAR(pressure(kEos, {3.2, 2.5}), 0.0759549, 1e-7);
}

TEST(Thermo, ChemicalPotentialFromGibbsIdentity) {
    EXPECT_NEAR(chemical_potential(kEos, {0.8, 2.1}), -1.0389101, 1e-6);
    EXPECT_NEAR(chemical_potential(kEos, {3.2, 2.9}), -1.0588820, 1e-6);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const TauE x = random_state(rng);
        const ThermoEval v = evaluate(kEos, x);
        ASSERT_GT(v.T, 0.0);
        const double lhs = v.T * v.s;
        ASSERT_LE(std::abs(lhs - (-v.mu + v.p * x.tau + x.e)), 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST(Thermo, SaturationChemicalPotentialsAgree) {
    const SaturationPair sp = saturation_at_temperature(kEos, 1.077);
    EXPECT_NEAR(chemical_potential(kEos, sp.x1), chemical_potential(kEos, sp.x2), 1e-8);
}

TEST(Thermo, DomainGuard) {
    EXPECT_THROW(entropy(kEos, {0.5, 2.0}), DomainError);
    EXPECT_THROW(entropy(kEos, {0.4, 2.0}), DomainError);
    EXPECT_THROW(temperature(kEos, {1.0, -1.0}), DomainError);
    EXPECT_THROW(pressure(kEos, {1.0, -2.0}), DomainError);
    EXPECT_THROW(entropy_hessian(kEos, {2.0, -0.5}), DomainError);
    EXPECT_THROW(isotherm_pressure(kEos, 0.5, 1.0), DomainError);
    EXPECT_FALSE(in_domain(kEos, {0.5 + 1e-13, 2.0}));
    EXPECT_TRUE(in_domain(kEos, {0.5 + 1e-9, 2.0}));
}

TEST(Thermo, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 2000; ++i) {
        const TauE x = random_state(rng);
        const double ht = 1e-6 * x.tau;
        const double he = 1e-6 * std::max(1.0, std::abs(x.e));
        if (!in_domain(kEos, {x.tau - ht, x.e - he})) continue;
        const EntropyGradient g = entropy_gradient(kEos, x);
        const double ft = (entropy(kEos, {x.tau + ht, x.e}) - entropy(kEos, {x.tau - ht, x.e})) / (2 * ht);
        const double fe = (entropy(kEos, {x.tau, x.e + he}) - entropy(kEos, {x.tau, x.e - he})) / (2 * he);
        ASSERT_NEAR(g.p_over_T, ft, 1e-6 * std::max(1.0, std::abs(ft)));
        ASSERT_NEAR(g.inv_T, fe, 1e-6 * std::max(1.0, std::abs(fe)));
        EXPECT_NEAR(g.p_over_T, pressure(kEos, x) / temperature(kEos, x), 1e-12);
    }
}

TEST(Thermo, HessianMatchesFiniteDifferences) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const TauE x = random_state(rng);
        const double ht = 1e-6 * x.tau;
        const double he = 1e-6 * std::max(1.0, std::abs(x.e));
        if (!in_domain(kEos, {x.tau - ht, x.e - he})) continue;
        const Hessian2 h = entropy_hessian(kEos, x);
        const auto gp = entropy_gradient(kEos, {x.tau + ht, x.e});
        const auto gm = entropy_gradient(kEos, {x.tau - ht, x.e});
        const auto ep = entropy_gradient(kEos, {x.tau, x.e + he});
        const auto em = entropy_gradient(kEos, {x.tau, x.e - he});
        const double tt = (gp.p_over_T - gm.p_over_T) / (2 * ht);
        const double te = (ep.p_over_T - em.p_over_T) / (2 * he);
        const double et = (gp.inv_T - gm.inv_T) / (2 * ht);
        const double ee = (ep.inv_T - em.inv_T) / (2 * he);
        const double scale = std::abs(h.s_tt) + std::abs(h.s_te) + std::abs(h.s_ee);
        ASSERT_NEAR(h.s_tt, tt, 1e-5 * scale);
        ASSERT_NEAR(h.s_te, te, 1e-5 * scale);
        ASSERT_NEAR(h.s_te, et, 1e-5 * scale);
        ASSERT_NEAR(h.s_ee, ee, 1e-5 * scale);
        ASSERT_LT(h.s_ee, 0.0);
    }
}

TEST(Thermo, HessianDeterminantSigns) {
    EXPECT_LT(entropy_hessian(kEos, {2.0, 2.5}).det(), 0.0);
    EXPECT_GT(entropy_hessian(kEos, {0.8, 2.1}).det(), 0.0);
}

TEST(Thermo, IsothermRoundTrip) {
    EXPECT_NEAR(isotherm_energy(kEos, 3.0, temperature(kEos, {3.0, 3.1})), 3.1, 1e-12);
    EXPECT_NEAR(isotherm_pressure(kEos, 0.8, 1.1166), 0.2986, 1e-3);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10000; ++i) {
        const TauE x = random_state(rng);
        ASSERT_NEAR(isotherm_energy(kEos, x.tau, temperature(kEos, x)), x.e,
                    1e-12 * std::max(1.0, std::abs(x.e)));
    }
}

TEST(Thermo, RelativeEntropy) {
    const TauE x{0.8, 2.1};
    EXPECT_DOUBLE_EQ(relative_entropy(kEos, x, x), 0.0);
    // Strictly concave region: negative for a nearby distinct state.
    EXPECT_LT(relative_entropy(kEos, {0.81, 2.11}, x), 0.0);
    EXPECT_LT(relative_entropy(kEos, {3.3, 2.95}, {3.2, 2.9}), 0.0);
}

TEST(Thermo, CriticalPoint) {
    const CriticalPoint c = critical_point(kEos);
    EXPECT_EQ(c.tau, 1.5);
    EXPECT_NEAR(c.T, 8.0 * kEos.a / (27.0 * kEos.R * kEos.b), 1e-15);
    EXPECT_NEAR(c.T, 1.18519, 1e-5);
    EXPECT_NEAR(c.e, 2.88889, 1e-5);
    EXPECT_NEAR(c.e, spinodal_energy(kEos, c.tau), 1e-12);
    // Inflection with horizontal tangent.
    const double h = 1e-4;
    auto p = [&](double t) { return isotherm_pressure(kEos, t, c.T); };
    EXPECT_NEAR((p(c.tau + h) - p(c.tau - h)) / (2 * h), 0.0, 1e-7);
    EXPECT_NEAR((p(c.tau + h) - 2 * p(c.tau) + p(c.tau - h)) / (h * h), 0.0, 1e-5);
    EXPECT_NEAR(isotherm_pressure_slope(kEos, c.tau, c.T), 0.0, 1e-14);
}

TEST(Thermo, ParameterValidation) {
    EosParams bad;
    bad.b = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    EXPECT_NO_THROW(kEos.validate());
}
