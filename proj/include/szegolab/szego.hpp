#pragma once

// Frequency-domain side: spectral grids from autocovariances, the cepstrum,
// the geometric mean, MA/AR coefficients of the Szego function h and of -1/h,
// phase coefficients, Kolmogorov's formula and the Gibbs functional.
//
// Densities are taken against the normalized measure dtheta/2pi, so sigma =
// h(0) = exp(L_0/2) with no extra sqrt(2 pi).

#include <szegolab/fft.hpp>
#include <szegolab/levinson.hpp>
#include <szegolab/seq_core.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace szegolab {

inline constexpr std::size_t kDefaultGridSize = 4096;

/// Refuse log w when min w < kLogFloor * max w.
inline constexpr double kLogFloor = 1e-12;

/// w(theta) = sum_{|n|<=N} c_n gamma_n e^{i n theta}, c_n = 1 (Dirichlet) or
/// 1 - |n|/(N+1) (Fejer). M must be a power of two with M >= 4N.
inline SpectralGrid grid_from_acov(const AutocovSeq& g, std::size_t M,
                                   Summation summation = Summation::Dirichlet,
                                   double offset = 0.0)
{
    const std::size_t N = g.order();
    if (!is_power_of_two(M))
        fail(ErrorCode::InvalidArgument, "grid size must be a power of two");
    if (M < 4 * N)
        fail(ErrorCode::InvalidArgument, "grid size must be at least 4x the truncation order");
    if (summation == Summation::Exact)
        fail(ErrorCode::InvalidArgument, "grid_from_acov sums a truncated series; pick Dirichlet or Fejer");

    CVec a(M);
    const double shift = 2.0 * kPi * offset / static_cast<double>(M);
    for (std::size_t n = 1; n <= N; ++n) {
        const double weight = summation == Summation::Fejer
                                  ? 1.0 - static_cast<double>(n) / static_cast<double>(N + 1)
                                  : 1.0;
        a[n] = weight * g[n] * std::polar(1.0, shift * static_cast<double>(n));
    }
    const CVec s = fft::transform(a, fft::Direction::Backward);
    std::vector<double> w(M);
    for (std::size_t j = 0; j < M; ++j)
        w[j] = g.gamma0() + 2.0 * s[j].real();

    const double lo = *std::min_element(w.begin(), w.end());
    if (lo < -1e-10 * g.gamma0())
        fail(ErrorCode::NegativeDensity,
             "summed density reaches " + std::to_string(lo) + " (truncation artifact or invalid gamma)");
    return SpectralGrid(std::move(w), offset, summation);
}

/// Density sampled from a closed form on an M-point grid.
template <class Density>
SpectralGrid grid_from_density(Density&& w, std::size_t M, double offset = 0.0)
{
    std::vector<double> vals(M);
    for (std::size_t j = 0; j < M; ++j)
        vals[j] = w(2.0 * kPi * (static_cast<double>(j) + offset) / static_cast<double>(M));
    return SpectralGrid(std::move(vals), offset, Summation::Exact);
}

inline void require_log_admissible(const SpectralGrid& w)
{
    const double lo = w.min();
    const double hi = w.max();
    if (!(lo > 0.0) || lo < kLogFloor * hi)
        fail(ErrorCode::NonpositiveDensity,
             "density not bounded away from zero on the grid (min " + std::to_string(lo) + ")");
}

/// Mean of f(theta_j) e^{i n theta_j} for n = 0..N, exact for trigonometric
/// polynomials of degree < M/2.
inline CVec grid_fourier(const SpectralGrid& grid, std::span<const double> f, std::size_t N)
{
    const std::size_t M = grid.size();
    if (N >= M / 2)
        fail(ErrorCode::InvalidArgument, "order must be below half the grid size");
    const CVec vals(f.begin(), f.end());
    const CVec s = fft::transform(vals, fft::Direction::Backward);
    const double shift = 2.0 * kPi * grid.offset() / static_cast<double>(M);
    CVec out(N + 1);
    for (std::size_t n = 0; n <= N; ++n)
        out[n] = s[n] * std::polar(1.0, shift * static_cast<double>(n)) / static_cast<double>(M);
    return out;
}

/// L_n = mean of log w(theta) e^{i n theta}, n = 0..N.
inline CoeffSeries cepstrum(const SpectralGrid& w, std::size_t N)
{
    require_log_admissible(w);
    std::vector<double> logw(w.size());
    std::transform(w.values().begin(), w.values().end(), logw.begin(), [](double x) { return std::log(x); });
    CVec L = grid_fourier(w, logw, N);
    L[0] = L[0].real();
    return CoeffSeries(std::move(L), Role::Cepstrum);
}

/// G = exp(L_0).
inline double geometric_mean(const CoeffSeries& L) { return std::exp(L[0].real()); }

/// m: Maclaurin coefficients of the Szego function h.
inline CoeffSeries ma_coefficients(const CoeffSeries& L, std::size_t N) { return series_exp(L, N); }

/// r: Maclaurin coefficients of -1/h.
inline CoeffSeries ar_coefficients(const CoeffSeries& m, std::size_t N)
{
    return series_reciprocal_negated(m, N);
}

/// b_n = sum_{k=0}^{N-n} conj(m_k) r_{n+k}, n = 0..N. For real m this is the
/// textbook sum of m_k r_{n+k}; its values are the nonnegative-index Fourier
/// coefficients of -conj(h)/h.
inline CoeffSeries phase_coefficients(const CoeffSeries& m, const CoeffSeries& r, std::size_t N)
{
    CVec b(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        cplx s{};
        for (std::size_t k = 0; k + n <= N; ++k)
            s += std::conj(m.at_or_zero(k)) * r.at_or_zero(n + k);
        b[n] = s;
    }
    return CoeffSeries(std::move(b), Role::Phase);
}

/// Everything the frequency side derives from one autocovariance.
struct SpectralFactors {
    SpectralGrid grid;
    CoeffSeries cepstrum;
    CoeffSeries ma;
    CoeffSeries ar;
    CoeffSeries phase;

    double geometric_mean() const { return szegolab::geometric_mean(cepstrum); }
    double sigma() const { return ma[0].real(); }
};

/// gamma -> grid -> L -> m -> r -> b, all to order N.
inline SpectralFactors spectral_factors(const AutocovSeq& g, std::size_t N, std::size_t M = kDefaultGridSize,
                                        Summation summation = Summation::Dirichlet)
{
    SpectralGrid grid = grid_from_acov(g, M, summation);
    CoeffSeries L = cepstrum(grid, N);
    CoeffSeries m = ma_coefficients(L, N);
    CoeffSeries r = ar_coefficients(m, N);
    CoeffSeries b = phase_coefficients(m, r, N);
    return {std::move(grid), std::move(L), std::move(m), std::move(r), std::move(b)};
}

struct KolmogorovReport {
    double sigma2_product = 0.0; ///< gamma_0 prod (1 - |alpha_n|^2)
    double sigma2_geomean = 0.0; ///< exp(L_0)
    double sigma2_limit_v = 0.0; ///< v_N

    double max_pairwise_gap() const
    {
        return std::max({std::abs(sigma2_product - sigma2_geomean), std::abs(sigma2_product - sigma2_limit_v),
                         std::abs(sigma2_geomean - sigma2_limit_v)});
    }
};

inline KolmogorovReport kolmogorov_check(const AutocovSeq& g, std::size_t N, std::size_t M = kDefaultGridSize,
                                         Summation summation = Summation::Dirichlet)
{
    const auto st = levinson_scan(g, N);
    KolmogorovReport rep;
    double prod = g.gamma0();
    for (const auto& a : st.alpha.values())
        prod *= 1.0 - std::norm(a);
    rep.sigma2_product = prod;
    rep.sigma2_limit_v = st.v.back();
    const auto grid = grid_from_acov(g, M, summation);
    rep.sigma2_geomean = geometric_mean(cepstrum(grid, 0));
    return rep;
}

/// (mean of e^{g} w) / exp(mean of g), evaluated in log space.
inline double gibbs_functional(const SpectralGrid& w, std::span<const double> g)
{
    if (g.size() != w.size())
        fail(ErrorCode::InvalidArgument, "test function must live on the density grid");
    require_log_admissible(w);
    const std::size_t M = w.size();
    std::vector<double> e(M);
    double gmean = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        e[j] = g[j] + std::log(w[j]);
        gmean += g[j];
    }
    gmean /= static_cast<double>(M);
    const double top = *std::max_element(e.begin(), e.end());
    double s = 0.0;
    for (double x : e)
        s += std::exp(x - top);
    const double log_mean = top + std::log(s / static_cast<double>(M));
    return std::exp(log_mean - gmean);
}

} // namespace szegolab
