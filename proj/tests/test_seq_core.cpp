#include <szegolab/seq_core.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace szegolab;

TEST(LpNorm, GeometricSeriesSumsToOne)
{
    CVec a;
    for (int n = 1; n <= 40; ++n)
        a.push_back(std::pow(0.5, n));
    EXPECT_NEAR(lp_norm(a, 1), 1.0, 1e-10);
}

TEST(LpNorm, ZeroSequence)
{
    const CVec a{0.0};
    EXPECT_EQ(lp_norm(a, 1), 0.0);
    EXPECT_EQ(lp_norm(a, 2), 0.0);
    EXPECT_EQ(h_half_norm_sq(a), 0.0);
}

TEST(LpNorm, RejectsUnsupportedExponent)
{
    const CVec a{1.0};
    EXPECT_THROW(lp_norm(a, 3), Error);
}

TEST(LpNorm, FarimaPacfL1KeepsGrowingLogarithmically)
{
    const double d = 0.25;
    auto partial = [&](int n_max) {
        double s = 0.0;
        for (int n = 1; n <= n_max; ++n)
            s += d / (n - d);
        return s;
    };
    CVec a;
    for (int n = 1; n <= 10000; ++n)
        a.push_back(d / (n - d));
    const double full = lp_norm(a, 1);
    EXPECT_NEAR(full, partial(10000), 1e-10);
    EXPECT_GE(full, 2.0);
    // Doubling the range adds about d log 2.
    CVec half(a.begin(), a.begin() + 5000);
    EXPECT_NEAR(full - lp_norm(half, 1), d * std::log(2.0), 1e-4);
}

TEST(HHalfNorm, SingleEntryAtIndexOne)
{
    const CVec a{0.0, 0.3};
    EXPECT_NEAR(h_half_norm_sq(a), 0.18, 1e-15);
}

TEST(HHalfNorm, Ar1CepstrumMatchesPartialSumOracle)
{
    const double phi = 0.6;
    CVec L{0.0};
    for (int n = 1; n <= 200; ++n)
        L.push_back(std::pow(phi, n) / n);
    // Oracle: sum until terms stop changing the total.
    double oracle = 0.0;
    for (int n = 1; n < 10000; ++n) {
        const double t = (1.0 + n) * std::pow(phi, 2 * n) / (double(n) * n);
        if (oracle + t == oracle)
            break;
        oracle += t;
    }
    EXPECT_NEAR(h_half_norm_sq(L), oracle, 1e-14);
}

TEST(SeriesExp, ConstantDensity)
{
    const CoeffSeries L({std::log(4.0), 0.0, 0.0, 0.0}, Role::Cepstrum);
    const auto m = series_exp(L, 3);
    EXPECT_NEAR(m[0].real(), 2.0, 1e-15);
    for (std::size_t n = 1; n <= 3; ++n)
        EXPECT_EQ(m[n], cplx{});
}

TEST(SeriesExp, ZeroCepstrumIsIdentity)
{
    const CoeffSeries L({0.0}, Role::Cepstrum);
    const auto m = series_exp(L, 5);
    EXPECT_EQ(m[0], cplx(1.0));
    for (std::size_t n = 1; n <= 5; ++n)
        EXPECT_EQ(m[n], cplx{});
}

TEST(SeriesExp, Ar1CepstrumGivesGeometricCoefficients)
{
    const double phi = 0.6;
    CVec Lc{0.0};
    for (int n = 1; n <= 30; ++n)
        Lc.push_back(std::pow(phi, n) / n);
    const auto m = series_exp(CoeffSeries(Lc, Role::Cepstrum), 30);
    // (1 - phi z) * sum m_n z^n must be 1.
    for (std::size_t n = 0; n <= 30; ++n) {
        const cplx prod = m[n] - (n > 0 ? phi * m[n - 1] : cplx{});
        EXPECT_NEAR(std::abs(prod - (n == 0 ? 1.0 : 0.0)), 0.0, 1e-14) << n;
        EXPECT_NEAR(m[n].real(), std::pow(phi, n), 1e-14);
    }
}

TEST(SeriesReciprocal, IdentityAndZeroLead)
{
    const auto r = series_reciprocal_negated(CoeffSeries({1.0, 0.0, 0.0}, Role::MA), 2);
    EXPECT_EQ(r[0], cplx(-1.0));
    EXPECT_EQ(r[1], cplx{});
    EXPECT_THROW(series_reciprocal_negated(CoeffSeries({0.0, 1.0}, Role::Poly), 2), Error);
}

TEST(SeriesReciprocal, Ar1AndMa1)
{
    CVec m;
    for (int n = 0; n <= 20; ++n)
        m.push_back(std::pow(0.6, n));
    const auto r = series_reciprocal_negated(CoeffSeries(m, Role::MA), 20);
    EXPECT_NEAR(r[0].real(), -1.0, 1e-15);
    EXPECT_NEAR(r[1].real(), 0.6, 1e-15);
    for (std::size_t n = 2; n <= 20; ++n)
        EXPECT_NEAR(std::abs(r[n]), 0.0, 1e-15);

    const auto r2 = series_reciprocal_negated(CoeffSeries({1.0, 0.5}, Role::MA), 6);
    const double expect[] = {-1.0, 0.5, -0.25, 0.125, -0.0625, 0.03125, -0.015625};
    for (std::size_t n = 0; n <= 6; ++n)
        EXPECT_NEAR(r2[n].real(), expect[n], 1e-15);
    // Convolution oracle.
    const auto prod = cauchy_product(CVec{1.0, 0.5}, r2.values(), 6);
    EXPECT_NEAR(prod[0].real(), -1.0, 1e-15);
    for (std::size_t n = 1; n <= 6; ++n)
        EXPECT_NEAR(std::abs(prod[n]), 0.0, 1e-15);
}

TEST(ConvolveAcov, ClosedForms)
{
    const auto g = convolve_acov(CoeffSeries({1.0, 0.5}, Role::MA), 3);
    EXPECT_NEAR(g[0].real(), 1.25, 1e-15);
    EXPECT_NEAR(g[1].real(), 0.5, 1e-15);
    EXPECT_EQ(g[2], cplx{});

    const auto w = convolve_acov(CoeffSeries({1.7}, Role::MA));
    EXPECT_NEAR(w.gamma0(), 1.7 * 1.7, 1e-15);

    CVec m;
    for (int n = 0; n <= 80; ++n)
        m.push_back(std::pow(0.6, n));
    const auto ar = convolve_acov(CoeffSeries(m, Role::MA), 10);
    EXPECT_NEAR(ar.gamma0(), 1.5625, 1e-12);
    for (std::size_t n = 0; n <= 10; ++n)
        EXPECT_NEAR(ar[n].real(), std::pow(0.6, n) / 0.64, 1e-12);
}

TEST(SeqTypes, InvariantsAreEnforced)
{
    EXPECT_THROW(AutocovSeq({-1.0, 0.0}), Error);
    EXPECT_THROW(AutocovSeq({1.0, 1.5}), Error);
    EXPECT_THROW(VerblunskySeq({0.5, 1.0}), Error);
    EXPECT_THROW(SpectralGrid(std::vector<double>(6, 1.0)), Error);
    EXPECT_THROW(CoeffSeries({-1.0}, Role::MA), Error);
    const AutocovSeq g{2.0, 1.0};
    EXPECT_EQ(g.lag(-1), cplx(1.0));
    EXPECT_EQ(g.lag(5), cplx{});
}

// Random cepstra with |L_n| <= 0.5 * 2^-n.
class RandomCepstrum : public ::testing::TestWithParam<int> {};

TEST_P(RandomCepstrum, SeriesAlgebraProperties)
{
    std::mt19937_64 rng(1000 + GetParam());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t N = 48;
    CVec Lc(N + 1);
    Lc[0] = 0.5 * u(rng);
    for (std::size_t n = 1; n <= N; ++n)
        Lc[n] = cplx(u(rng), u(rng)) * (0.5 * std::pow(2.0, -double(n)) / std::sqrt(2.0));
    const CoeffSeries L(Lc, Role::Cepstrum);
    const auto m = series_exp(L, N);

    // Pointwise: h(z) = exp(L_0/2 + sum L_n z^n) at points inside the disc.
    for (int j = 0; j < 16; ++j) {
        const cplx z = std::polar(0.5, 2.0 * oracle::kPi * j / 16.0);
        cplx exponent = L[0] / 2.0;
        cplx zp = 1.0;
        for (std::size_t n = 1; n <= N; ++n) {
            zp *= z;
            exponent += L[n] * zp;
        }
        EXPECT_NEAR(std::abs(m.evaluate(z) - std::exp(exponent)), 0.0, 1e-10);
    }

    // m * r = -1 as power series.
    const auto r = series_reciprocal_negated(m, N);
    const auto prod = cauchy_product(m.values(), r.values(), N);
    EXPECT_NEAR(std::abs(prod[0] + 1.0), 0.0, 1e-12);
    for (std::size_t n = 1; n <= N; ++n)
        EXPECT_NEAR(std::abs(prod[n]), 0.0, 1e-12);

    // h^{1/2} norm dominates l2 norm squared.
    EXPECT_GE(h_half_norm_sq(m), std::pow(lp_norm(m, 2), 2));

    // Cauchy-Schwarz on the convolved autocovariance.
    const auto g = convolve_acov(m);
    for (std::size_t n = 1; n <= g.order(); ++n)
        EXPECT_LE(std::abs(g[n]), g.gamma0() * (1 + 1e-15));
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCepstrum, ::testing::Range(0, 20));

TEST(SeriesLog, InvertsSeriesExp)
{
    const CVec p{1.0, 0.5, -0.2};
    const auto q = series_log(p, 12);
    CVec lc = q;
    lc[0] *= 2.0; // series_exp halves L_0
    const auto back = series_exp(CoeffSeries(lc, Role::Cepstrum), 12);
    for (std::size_t n = 0; n <= 12; ++n)
        EXPECT_NEAR(std::abs(back[n] - (n < p.size() ? p[n] : cplx{})), 0.0, 1e-14);
}
