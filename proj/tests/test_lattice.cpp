#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "alrh/lattice.hpp"

using alrh::cplx;
using alrh::LatticeField;

namespace {

const cplx I{0.0, 1.0};

LatticeField random_field(unsigned seed, int half, double max_abs) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LatticeField f{-half, std::vector<cplx>(static_cast<std::size_t>(2 * half + 1)), 0.0};
    for (auto& v : f.q) v = std::polar(max_abs * u(rng), 2.0 * M_PI * u(rng));
    return f;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(AlRhs, ZeroFieldHasZeroDerivative) {
    const LatticeField f{-3, std::vector<cplx>(7), 0.0};
    for (const auto& v : alrh::al_rhs(f)) EXPECT_EQ(v, cplx(0.0));
}

TEST(AlRhs, SingleSiteDirectSubstitution) {
    const cplx c{0.3, 0.2};
    const LatticeField f{-1, {0.0, c, 0.0}, 0.0};
    const auto d = alrh::al_rhs(f);
    // -i[q_{n+1} - 2 q_n + q_{n-1} - |q_n|^2 (q_{n+1} + q_{n-1})]
    EXPECT_LT(std::abs(d[1] - 2.0 * I * c), 1e-15);
    EXPECT_LT(std::abs(d[0] + I * c), 1e-15);
    EXPECT_LT(std::abs(d[2] + I * c), 1e-15);
}

TEST(AlRhs, MatchesTermByTermExpansion) {
    const auto f = random_field(7, 30, 0.5);
    const auto d = alrh::al_rhs(f);
    for (int n = f.n_min; n <= f.n_max(); ++n) {
        const cplx qn = f.at(n);
        const cplx qp = f.contains(n + 1) ? f.at(n + 1) : 0.0;
        const cplx qm = f.contains(n - 1) ? f.at(n - 1) : 0.0;
        // expanded in real and imaginary parts
        const double a = qn.real(), b = qn.imag();
        const double m2 = a * a + b * b;
        const double re_bracket = qp.real() - 2 * a + qm.real() - m2 * (qp.real() + qm.real());
        const double im_bracket = qp.imag() - 2 * b + qm.imag() - m2 * (qp.imag() + qm.imag());
        const cplx expected{im_bracket, -re_bracket};
        EXPECT_LT(std::abs(d[static_cast<std::size_t>(n - f.n_min)] - expected), 1e-15) << "n = " << n;
    }
}

TEST(AlRhs, RejectsInadmissibleField) {
    const LatticeField f{0, {0.1, 1.0, 0.1}, 0.0};
    EXPECT_THROW(alrh::al_rhs(f), alrh::AdmissibilityError);
    const LatticeField g{0, {0.1, 1.0 - 1e-10, 0.1}, 0.0};
    EXPECT_THROW(alrh::al_rhs(g), alrh::AdmissibilityError);
}

TEST(Step, ZeroFieldStaysZero) {
    const LatticeField f{-2, std::vector<cplx>(5), 1.5};
    const auto g = alrh::step(f, 0.3);
    EXPECT_DOUBLE_EQ(g.time, 1.8);
    for (const auto& v : g.q) EXPECT_EQ(v, cplx(0.0));
}

TEST(Step, RejectsNonPositiveDt) {
    const LatticeField f{0, {0.1}, 0.0};
    EXPECT_THROW(alrh::step(f, 0.0), alrh::DomainError);
    EXPECT_THROW(alrh::step(f, -1e-3), alrh::DomainError);
}

TEST(Step, SingleSiteAgreesWithRefinedReference) {
    const auto f = alrh::padded(alrh::single_site_field(0.3), -6, 6);
    const auto coarse = alrh::step(f, 1e-3);
    const auto fine = alrh::advance_to(f, 1e-3, 1e-5);
    EXPECT_LT(std::abs(coarse.at(0) - fine.at(0)), 1e-12);
}

TEST(Step, GaussianOneStepConservesLogMass) {
    const auto f = alrh::gaussian_field(0.3, 20.0, 400);
    const auto g = alrh::step(f, 0.01);
    EXPECT_LT(std::abs(alrh::conserved_log_mass(g) - alrh::conserved_log_mass(f)), 1e-12);
}

TEST(Step, FourthOrderConvergence) {
    const auto f = alrh::gaussian_field(0.4, 4.0, 60);
    const double t = 1.0;
    const auto ref = alrh::advance_to(f, t, 0.002);
    const auto h1 = alrh::advance_to(f, t, 0.1);
    const auto h2 = alrh::advance_to(f, t, 0.05);
    const double ratio = max_diff(h1.q, ref.q) / max_diff(h2.q, ref.q);
    EXPECT_GE(ratio, 12.0);
    EXPECT_LE(ratio, 20.0);
}

TEST(Step, GaugeCovariance) {
    const auto f = random_field(11, 20, 0.4);
    auto g = f;
    const cplx phase = std::polar(1.0, 0.7);
    for (auto& v : g.q) v *= phase;
    const auto ff = alrh::advance_to(alrh::padded(f, -40, 40), 2.0, 0.01);
    const auto gg = alrh::advance_to(alrh::padded(g, -40, 40), 2.0, 0.01);
    for (int n = -40; n <= 40; ++n) EXPECT_LT(std::abs(gg.at(n) - phase * ff.at(n)), 1e-10);
}

TEST(AdvanceTo, RefusesBackwardIntegration) {
    LatticeField f{0, {0.1}, 2.0};
    EXPECT_THROW(alrh::advance_to(f, 1.0, 0.01), alrh::DomainError);
}

TEST(Simulate, ZeroFieldStaysZero) {
    const LatticeField f{-4, std::vector<cplx>(9), 0.0};
    const auto res = alrh::simulate(f, {0.05, 1.0, 5, 1e-12});
    for (const auto& s : res.snapshots)
        for (const auto& v : s.q) EXPECT_EQ(v, cplx(0.0));
    EXPECT_EQ(res.max_log_mass_drift, 0.0);
    EXPECT_TRUE(res.warnings.empty());
}

TEST(Simulate, RecordsEveryKthStepAndTheFinalState) {
    const auto f = alrh::padded(alrh::single_site_field(0.2), -20, 20);
    const auto res = alrh::simulate(f, {0.1, 1.0, 3, 1e-12});
    ASSERT_EQ(res.snapshots.size(), 5u);  // t = 0, 0.3, 0.6, 0.9, 1.0
    EXPECT_DOUBLE_EQ(res.snapshots.front().time, 0.0);
    EXPECT_NEAR(res.snapshots[1].time, 0.3, 1e-14);
    EXPECT_DOUBLE_EQ(res.snapshots.back().time, 1.0);
}

TEST(Simulate, SingleSiteDecaysAndConservesLogMass) {
    const auto f = alrh::padded(alrh::single_site_field(0.3), -120, 120);
    const auto res = alrh::simulate(f, {0.01, 20.0, 100, 1e-12});
    EXPECT_LT(res.max_log_mass_drift, 1e-8);
    EXPECT_LT(std::abs(res.snapshots.back().at(0)), 0.3);
    EXPECT_LT(std::abs(res.snapshots.back().at(0)), std::abs(res.snapshots[1].at(0)));
    EXPECT_TRUE(res.warnings.empty());
}

TEST(Simulate, WarnsWhenTheWindowEdgeIsReached) {
    const auto f = alrh::padded(alrh::single_site_field(0.3), -3, 3);
    const auto res = alrh::simulate(f, {0.01, 2.0, 50, 1e-12});
    EXPECT_FALSE(res.warnings.empty());
}

TEST(ConservedLogMass, ClosedForms) {
    EXPECT_EQ(alrh::conserved_log_mass(LatticeField{0, std::vector<cplx>(4), 0.0}), 0.0);
    // ln(0.75)
    EXPECT_NEAR(alrh::conserved_log_mass(alrh::single_site_field(0.5)), -0.287682072451780927439219, 1e-15);
}

TEST(Padded, PreservesValuesAndRejectsShrinking) {
    const LatticeField f{2, {0.1, 0.2}, 0.5};
    const auto g = alrh::padded(f, 0, 5);
    EXPECT_EQ(g.n_min, 0);
    EXPECT_EQ(g.size(), 6u);
    EXPECT_EQ(g.at(3), cplx(0.2));
    EXPECT_EQ(g.at(0), cplx(0.0));
    EXPECT_EQ(g.time, 0.5);
    EXPECT_THROW(alrh::padded(f, 3, 5), alrh::ConfigError);
}
