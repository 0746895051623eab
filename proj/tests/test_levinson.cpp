#include <szegolab/dense.hpp>
#include <szegolab/levinson.hpp>
#include <szegolab/models.hpp>
#include <szegolab/szego.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace szegolab;

namespace {

std::vector<cplx> as_vec(const AutocovSeq& g) { return {g.values().begin(), g.values().end()}; }

std::vector<ModelSpec> zoo()
{
    return {ModelSpec::free(),          ModelSpec::ar1(0.6),         ModelSpec::ar1(-0.8),
            ModelSpec::ma_q({0.5}),     ModelSpec::ma_q({0.4, -0.3}), ModelSpec::arma({0.5}, {0.4}),
            ModelSpec::farima(0.25),    ModelSpec::bloomfield({0.0, 0.3}), ModelSpec::ma_q({1.0})};
}

} // namespace

TEST(PacfFromAcov, FreeCase)
{
    const auto st = pacf_from_acov(AutocovSeq({1.0, 0.0, 0.0, 0.0}));
    for (const auto& a : st.alpha.values())
        EXPECT_EQ(a, cplx{});
    for (double v : st.v)
        EXPECT_EQ(v, 1.0);
}

TEST(PacfFromAcov, Ma1HandValues)
{
    const auto st = pacf_from_acov(AutocovSeq({1.25, 0.5, 0.0, 0.0, 0.0}));
    EXPECT_NEAR(st.alpha.alpha(1).real(), 0.4, 1e-15);
    EXPECT_NEAR(st.alpha.alpha(2).real(), -4.0 / 21.0, 1e-15);
    EXPECT_NEAR(st.v[1], 1.05, 1e-15);
    const double th = 0.5;
    for (int n = 1; n <= 4; ++n) {
        const double closed = -std::pow(-th, n) * (1 - th * th) / (1 - std::pow(th, 2 * (n + 1)));
        EXPECT_NEAR(st.alpha.alpha(n).real(), closed, 1e-14);
    }
}

TEST(PacfFromAcov, Ar1MatchesYuleWalkerOracle)
{
    const auto g = exact_acov(ModelSpec::ar1(0.6), 12);
    const auto st = pacf_from_acov(g);
    const auto brute = oracle::pacf_brute(as_vec(g), 12);
    for (int n = 1; n <= 12; ++n) {
        EXPECT_NEAR(std::abs(st.alpha.alpha(n) - brute[n - 1]), 0.0, 1e-12);
        EXPECT_NEAR(st.alpha.alpha(n).real(), n == 1 ? 0.6 : 0.0, 1e-12);
        EXPECT_NEAR(st.v[n], 1.0, 1e-12);
    }
}

TEST(PacfFromAcov, FarimaClosedForm)
{
    const auto st = pacf_from_acov(exact_acov(ModelSpec::farima(0.25), 20));
    EXPECT_NEAR(st.alpha.alpha(1).real(), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(st.alpha.alpha(2).real(), 1.0 / 7.0, 1e-12);
    EXPECT_NEAR(st.alpha.alpha(3).real(), 1.0 / 11.0, 1e-12);
}

TEST(PacfFromAcov, RejectsNonPositiveDefinite)
{
    // |gamma_1| <= gamma_0 but the 3x3 section is indefinite.
    EXPECT_THROW(pacf_from_acov(AutocovSeq({1.0, 0.9, 0.0})), Error);
    try {
        pacf_from_acov(AutocovSeq({1.0, 1.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
    }
}

TEST(PacfFromAcov, StateInvariants)
{
    const auto st = pacf_from_acov(exact_acov(ModelSpec::arma({0.5}, {0.4}), 30));
    double prod = 1.0;
    for (std::size_t n = 1; n <= 30; ++n) {
        EXPECT_EQ(st.phi(n).back(), st.alpha.alpha(n));
        EXPECT_LE(st.v[n], st.v[n - 1]);
        prod *= 1.0 - std::norm(st.alpha.alpha(n));
        EXPECT_NEAR(st.v[n] / st.v[0], prod, 1e-14);
    }
}

// The conjugated reversal must reproduce the dense Yule-Walker solution for
// complex Hermitian autocovariances.
TEST(PacfFromAcov, ComplexCaseAgreesWithDenseSolve)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto gv = oracle::random_hermitian_acov(rng, 4, 10);
        const auto st = pacf_from_acov(AutocovSeq(CVec(gv)));
        for (int n = 1; n <= 10; ++n) {
            const auto yw = oracle::yule_walker(gv, n);
            const auto& phi = st.phi(n);
            for (int j = 0; j < n; ++j)
                EXPECT_NEAR(std::abs(phi[j] - yw[j]), 0.0, 1e-10) << trial << " " << n << " " << j;
        }
    }
}

TEST(AcovFromPacf, FreeAndMa1)
{
    const auto g = acov_from_pacf(VerblunskySeq({0.0, 0.0, 0.0}), 1.0);
    EXPECT_EQ(g[0], cplx(1.0));
    EXPECT_EQ(g[1], cplx{});
    EXPECT_EQ(g[3], cplx{});

    const auto m = acov_from_pacf(VerblunskySeq({0.4, -4.0 / 21.0}), 1.25);
    EXPECT_NEAR(m[1].real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(m[2]), 0.0, 1e-15);

    const auto full = acov_from_pacf(exact_pacf(ModelSpec::ma_q({0.5}), 20), 1.25);
    for (std::size_t n = 2; n <= 20; ++n)
        EXPECT_NEAR(std::abs(full[n]), 0.0, 1e-14);
}

TEST(AcovFromPacf, RejectsUnitModulus)
{
    EXPECT_THROW(acov_from_pacf(VerblunskySeq(CVec{0.2, cplx(0.6, 0.8)}), 1.0), Error);
    EXPECT_THROW(acov_from_pacf(VerblunskySeq({0.2}), 0.0), Error);
}

// |alpha_n| <= 0.9/n keeps v_N bounded away from zero, so the inverse map is
// well conditioned at N = 64.
TEST(Bijection, RandomRoundtripsBothDirections)
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        CVec a(64);
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = std::polar(0.9 * u(rng) / double(k + 1), 2.0 * oracle::kPi * u(rng));
        const VerblunskySeq alpha(a);
        const auto g = acov_from_pacf(alpha, 1.0 + u(rng));
        const auto back = pacf_from_acov(g).alpha;
        for (std::size_t k = 0; k < 64; ++k)
            EXPECT_NEAR(std::abs(back[k] - a[k]), 0.0, 1e-10 * std::max(1.0, std::abs(a[k])));
        const auto g2 = acov_from_pacf(back, g.gamma0());
        for (std::size_t n = 0; n <= 64; ++n)
            EXPECT_NEAR(std::abs(g2[n] - g[n]), 0.0, 1e-10 * g.gamma0());
    }
}

// With i.i.d. |alpha_n| <= 0.9 the recursion stays exact at small orders.
TEST(Bijection, LargeCoefficientsShortOrder)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        CVec a(12);
        for (auto& x : a)
            x = std::polar(0.9 * u(rng), 2.0 * oracle::kPi * u(rng));
        const auto back = pacf_from_acov(acov_from_pacf(VerblunskySeq(a), 1.0)).alpha;
        for (std::size_t k = 0; k < a.size(); ++k)
            EXPECT_NEAR(std::abs(back[k] - a[k]), 0.0, 1e-10);
    }
}

TEST(ToeplitzDet, HandValues)
{
    EXPECT_NEAR(toeplitz_det(AutocovSeq({1.0, 0.0, 0.0, 0.0}), 4), 1.0, 1e-15);
    const AutocovSeq ma1{1.25, 0.5, 0.0, 0.0};
    EXPECT_NEAR(toeplitz_det(ma1, 2), 1.3125, 1e-12);
    EXPECT_NEAR(toeplitz_det(ma1, 3), 1.328125, 1e-12);
    const auto ar = exact_acov(ModelSpec::ar1(0.6), 10);
    for (std::size_t n = 1; n <= 10; ++n)
        EXPECT_NEAR(toeplitz_det(ar, n), 1.5625, 1e-12);
    EXPECT_EQ(toeplitz_det(ar, 0), 1.0);
}

TEST(ToeplitzDet, MatchesDenseAcrossZoo)
{
    for (const auto& spec : zoo()) {
        const auto g = exact_acov(spec, 64);
        const auto v = as_vec(g);
        for (std::size_t n : {1u, 2u, 5u, 16u, 33u, 64u}) {
            const double lev = toeplitz_det(g, n);
            const double dense = oracle::det_real(v, static_cast<int>(n));
            EXPECT_NEAR(lev / dense, 1.0, 1e-9) << spec.describe() << " n=" << n;
            const double lib_dense = dense_determinant(toeplitz_matrix(g, n)).real();
            EXPECT_NEAR(lib_dense / dense, 1.0, 1e-9);
        }
    }
}

TEST(ToeplitzDet, LogSpaceHandlesLargeOrders)
{
    // gamma_0 = 4, white noise: det T_600 = 4^600 overflows double.
    CVec g(601);
    g[0] = 4.0;
    const AutocovSeq w(g);
    EXPECT_NEAR(toeplitz_log_det(w, 600), 600 * std::log(4.0), 1e-9);
    EXPECT_TRUE(std::isinf(toeplitz_det(w, 600)));
}

TEST(FinitePredictors, Ar1WhiteNoiseAndMa1Gap)
{
    const auto ar = exact_acov(ModelSpec::ar1(0.6), 8);
    const auto phi = finite_predictors(ar, 8);
    EXPECT_NEAR(phi[0].real(), 0.6, 1e-14);
    for (std::size_t j = 1; j < 8; ++j)
        EXPECT_NEAR(std::abs(phi[j]), 0.0, 1e-14);
    const auto yw = oracle::yule_walker(std::vector<cplx>(ar.values().begin(), ar.values().end()), 8);
    for (std::size_t j = 0; j < 8; ++j)
        EXPECT_NEAR(std::abs(phi[j] - yw[j]), 0.0, 1e-12);

    for (const auto& c : finite_predictors(AutocovSeq({1.0, 0.0, 0.0, 0.0}), 3))
        EXPECT_EQ(c, cplx{});

    const auto ma = exact_acov(ModelSpec::ma_q({0.5}), 64);
    const auto f = spectral_factors(ma, 64);
    double prev = 1e300;
    for (std::size_t n : {5u, 10u, 15u, 20u}) {
        const double gap = predictor_l2_gap(finite_predictors(ma, n), f.sigma(), f.ar);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(Opuc, FreeCaseAndFirstStep)
{
    const auto p = opuc_polynomials(VerblunskySeq({0.0, 0.0, 0.0}), 3);
    ASSERT_EQ(p.degree(), 3u);
    EXPECT_EQ(p.coeffs[3], cplx(1.0));
    for (int j = 0; j < 3; ++j)
        EXPECT_EQ(p.coeffs[j], cplx{});

    const cplx a1(0.3, -0.4);
    const auto p1 = opuc_polynomials(VerblunskySeq(CVec{a1}), 1);
    EXPECT_EQ(p1.coeffs[1], cplx(1.0));
    EXPECT_EQ(p1.coeffs[0], -std::conj(a1));
}

TEST(Opuc, ConstantTermIsMinusConjAlpha)
{
    const VerblunskySeq a(CVec{cplx(0.3, 0.1), cplx(-0.2, 0.5), cplx(0.1, 0.0), cplx(0.0, -0.7)});
    const auto fam = opuc_family(a, 4);
    for (std::size_t n = 1; n <= 4; ++n) {
        EXPECT_EQ(fam[n].coeffs.back(), cplx(1.0));
        EXPECT_NEAR(std::abs(fam[n].coeffs[0] + std::conj(a.alpha(n))), 0.0, 1e-15);
    }
}

namespace {

// Trapezoid quadrature of f conj(g) w on the grid.
cplx inner(const OpucPoly& f, const OpucPoly& g, const SpectralGrid& w)
{
    cplx s{};
    for (std::size_t j = 0; j < w.size(); ++j) {
        const cplx z = std::polar(1.0, w.theta(j));
        s += f(z) * std::conj(g(z)) * w[j];
    }
    return s / static_cast<double>(w.size());
}

} // namespace

TEST(Opuc, Ma1OrthogonalityOnGrid)
{
    const auto g = exact_acov(ModelSpec::ma_q({0.5}), 8);
    const auto st = pacf_from_acov(g);
    const auto fam = opuc_family(st.alpha, 2);
    const auto w = grid_from_acov(g, 1024);
    EXPECT_NEAR(std::abs(inner(fam[2], fam[1], w)), 0.0, 1e-12);
}

TEST(Opuc, NormsAndOrthogonalityAcrossSmoothZoo)
{
    for (const auto& spec : {ModelSpec::ar1(0.6), ModelSpec::ma_q({0.5}), ModelSpec::arma({0.5}, {0.4}),
                             ModelSpec::bloomfield({0.0, 0.3})}) {
        const auto g = exact_acov(spec, 64);
        const auto st = pacf_from_acov(g);
        const auto fam = opuc_family(st.alpha, 8);
        const auto w = grid_from_acov(g, 4096);
        for (std::size_t n = 0; n <= 8; ++n) {
            const double nn = inner(fam[n], fam[n], w).real();
            EXPECT_NEAR(nn, st.v[n], 1e-6) << spec.describe();
            for (std::size_t m = 0; m < n; ++m) {
                const double mm = inner(fam[m], fam[m], w).real();
                EXPECT_LT(std::abs(inner(fam[n], fam[m], w)), 1e-6 * std::sqrt(nn * mm));
            }
        }
    }
}

TEST(Opuc, ComplexMeasureOrthogonality)
{
    std::mt19937_64 rng(3);
    const auto gv = oracle::random_hermitian_acov(rng, 3, 12);
    const AutocovSeq g{CVec(gv)};
    const auto fam = opuc_family(pacf_from_acov(g).alpha, 6);
    const auto w = grid_from_acov(g, 256);
    for (std::size_t n = 1; n <= 6; ++n)
        for (std::size_t m = 0; m < n; ++m)
            EXPECT_LT(std::abs(inner(fam[n], fam[m], w)), 1e-10);
}

TEST(Rakhmanov, PacfDecaysForPositiveDensities)
{
    for (const auto& spec : {ModelSpec::ar1(0.6), ModelSpec::ma_q({0.5}), ModelSpec::arma({0.5}, {0.4}),
                             ModelSpec::bloomfield({0.0, 0.3}), ModelSpec::farima(0.25)}) {
        const auto st = pacf_from_acov(exact_acov(spec, 200));
        EXPECT_LT(std::abs(st.alpha.alpha(200)), 1e-2) << spec.describe();
    }
}

TEST(ToeplitzSolve, AgreesWithDenseSolve)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 2u, 8u, 40u}) {
        const auto gv = oracle::random_hermitian_acov(rng, 5, static_cast<int>(n));
        const AutocovSeq g{CVec(gv)};
        CVec y(n);
        for (auto& v : y)
            v = cplx(nd(rng), nd(rng));
        const auto x = toeplitz_solve(g, y);
        Eigen::VectorXcd rhs(n);
        for (std::size_t i = 0; i < n; ++i)
            rhs(i) = y[i];
        const Eigen::VectorXcd ref = oracle::toeplitz(gv, static_cast<int>(n)).fullPivLu().solve(rhs);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(std::abs(x[i] - ref(i)), 0.0, 1e-10 * std::max(1.0, std::abs(ref(i))));
        const auto xd = dense_solve(toeplitz_matrix(g, n), y);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_NEAR(std::abs(xd[i] - ref(i)), 0.0, 1e-10 * std::max(1.0, std::abs(ref(i))));
    }
}
