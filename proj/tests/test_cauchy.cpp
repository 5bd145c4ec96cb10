#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "alrh/cauchy.hpp"

using alrh::cplx;
using alrh::Side;

namespace {

std::vector<cplx> monomial(std::size_t n, int m) {
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = std::polar(1.0, 2.0 * M_PI * m * static_cast<double>(k) / n);
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Cauchy, ConstantGoesToTheMinusSide) {
    const std::vector<cplx> one(64, 1.0);
    const auto plus = alrh::cauchy_project(one, Side::plus);
    const auto minus = alrh::cauchy_project(one, Side::minus);
    for (std::size_t k = 0; k < one.size(); ++k) {
        EXPECT_LT(std::abs(plus[k]), 1e-15);
        EXPECT_LT(std::abs(minus[k] + 1.0), 1e-15);
    }
}

TEST(Cauchy, MonomialsAreProjectedExactly) {
    const std::size_t n = 64;
    const std::vector<cplx> zero(n);
    for (int m = -31; m <= 31; ++m) {
        const auto f = monomial(n, m);
        std::vector<cplx> neg = f;
        for (auto& v : neg) v = -v;
        const auto plus = alrh::cauchy_project(f, Side::plus);
        const auto minus = alrh::cauchy_project(f, Side::minus);
        EXPECT_LT(max_diff(plus, m < 0 ? f : zero), 1e-12) << "m = " << m;
        EXPECT_LT(max_diff(minus, m < 0 ? zero : neg), 1e-12) << "m = " << m;
    }
}

TEST(Cauchy, PlemeljOnRandomTrigonometricPolynomials) {
    const std::size_t n = 256;
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> f(n);
        for (int m = -static_cast<int>(n / 4); m <= static_cast<int>(n / 4); ++m) {
            const cplx c{g(rng), g(rng)};
            const auto e = monomial(n, m);
            for (std::size_t k = 0; k < n; ++k) f[k] += c * e[k];
        }
        const auto plus = alrh::cauchy_project(f, Side::plus);
        const auto minus = alrh::cauchy_project(f, Side::minus);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(plus[k] - minus[k] - f[k]));
        EXPECT_LT(worst, 1e-12);
    }
}

TEST(Cauchy, MatrixOverloadActsEntrywise) {
    const std::size_t n = 32;
    std::vector<alrh::Mat2> m(n);
    const auto e = monomial(n, -2);
    for (std::size_t k = 0; k < n; ++k) m[k] << e[k], 1.0, 0.0, 2.0 * e[k];
    const auto plus = alrh::cauchy_project(m, Side::plus);
    for (std::size_t k = 0; k < n; ++k) {
        EXPECT_LT(std::abs(plus[k](0, 0) - e[k]), 1e-14);
        EXPECT_LT(std::abs(plus[k](0, 1)), 1e-14);
        EXPECT_LT(std::abs(plus[k](1, 1) - 2.0 * e[k]), 1e-14);
    }
}

TEST(Cauchy, RejectsBadSizes) {
    EXPECT_THROW(alrh::CauchyProjector(48), alrh::DomainError);
    alrh::CauchyProjector p(16);
    EXPECT_THROW(p.project(std::vector<cplx>(8), Side::plus), alrh::DomainError);
}
