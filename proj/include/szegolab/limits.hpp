#pragma once

// Numerical checks of the weak and strong Szego limit theorems, the
// Ibragimov/Golinskii product identity for the strong constant, and the
// Borodin-Okounkov / Widom Fredholm-determinant forms of det T_n / G^n.

#include <szegolab/dense.hpp>
#include <szegolab/levinson.hpp>
#include <szegolab/seq_core.hpp>
#include <szegolab/szego.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace szegolab {

/// (1/n) log det T_n for each requested order (n >= 1). Tends to log G.
inline std::vector<double> weak_szego(const AutocovSeq& g, std::span<const std::size_t> orders)
{
    if (orders.empty())
        return {};
    const std::size_t top = *std::max_element(orders.begin(), orders.end());
    const auto logdets = toeplitz_log_dets(g, top);
    std::vector<double> out;
    out.reserve(orders.size());
    for (std::size_t n : orders) {
        if (n == 0)
            fail(ErrorCode::InvalidArgument, "weak Szego sequence starts at n = 1");
        out.push_back(logdets[n] / static_cast<double>(n));
    }
    return out;
}

struct StrongSzegoConstants {
    double e_cepstral = 1.0; ///< exp(sum k |L_k|^2)
    double e_product = 1.0;  ///< prod (1 - |alpha_j|^2)^{-j}

    double relative_gap() const { return std::abs(e_cepstral - e_product) / e_cepstral; }
};

inline double e_cepstral(const CoeffSeries& L, std::size_t N)
{
    double s = 0.0;
    for (std::size_t k = 1; k <= N && k < L.size(); ++k)
        s += static_cast<double>(k) * std::norm(L[k]);
    return std::exp(s);
}

inline double e_product(const VerblunskySeq& a, std::size_t N)
{
    double s = 0.0;
    for (std::size_t j = 1; j <= N && j <= a.order(); ++j)
        s -= static_cast<double>(j) * std::log1p(-std::norm(a.alpha(j)));
    return std::exp(s);
}

inline StrongSzegoConstants strong_szego_constant(const CoeffSeries& L, const VerblunskySeq& a, std::size_t N)
{
    return {e_cepstral(L, N), e_product(a, N)};
}

struct LimitReport {
    std::vector<std::size_t> n_values;
    std::vector<double> ratios;   ///< det T_n / G^n
    std::vector<double> weak_seq; ///< (1/n) log det T_n
    double log_g = 0.0;
    double e_cepstral = 1.0;
    double e_product = 1.0;
    std::vector<double> bo_ratios; ///< optional; filled by callers that run Borodin-Okounkov
    bool converged = false;
    double tol = 0.0;
};

/// Ratio table det T_n / G^n against both strong-constant estimates. G and
/// the cepstrum come from an M-point grid of g; alpha from Levinson on g.
/// Converged when the last (up to) three ratios sit within tol of E_cepstral.
inline LimitReport strong_szego_check(const AutocovSeq& g, std::span<const std::size_t> orders,
                                      std::size_t M = kDefaultGridSize, double tol = 1e-3,
                                      Summation summation = Summation::Dirichlet)
{
    LimitReport rep;
    rep.tol = tol;
    const std::size_t N = g.order();
    const auto grid = grid_from_acov(g, M, summation);
    const auto L = cepstrum(grid, std::min(N, M / 2 - 1));
    rep.log_g = L[0].real();
    const auto st = levinson_scan(g, N);
    rep.e_cepstral = e_cepstral(L, N);
    rep.e_product = e_product(st.alpha, N);

    if (orders.empty())
        return rep;
    const std::size_t top = *std::max_element(orders.begin(), orders.end());
    if (top > N + 1)
        fail(ErrorCode::OutOfRange, "det T_n needs gamma up to lag n - 1");
    std::vector<double> logdets(top + 1, 0.0);
    for (std::size_t n = 1; n <= top; ++n)
        logdets[n] = logdets[n - 1] + std::log(st.v[n - 1]);
    for (std::size_t n : orders) {
        if (n == 0)
            fail(ErrorCode::InvalidArgument, "orders start at 1");
        rep.n_values.push_back(n);
        rep.ratios.push_back(std::exp(logdets[n] - static_cast<double>(n) * rep.log_g));
        rep.weak_seq.push_back(logdets[n] / static_cast<double>(n));
    }
    const std::size_t tail = std::min<std::size_t>(3, rep.ratios.size());
    rep.converged = std::all_of(rep.ratios.end() - static_cast<std::ptrdiff_t>(tail), rep.ratios.end(),
                                [&](double r) { return std::abs(r - rep.e_cepstral) <= tol; });
    return rep;
}

// --- Borodin-Okounkov ------------------------------------------------------

/// Inputs for the Hankel products: b holds the Fourier coefficients b_k
/// (k >= 0) of the phase function conj(h)/h, c_tilde holds c_{-k} (k >= 0)
/// of its inverse h/conj(h).
struct HankelSymbols {
    CoeffSeries b;
    CoeffSeries c_tilde;
};

/// Builds both symbols from the MA and AR coefficients. The phase-coefficient
/// sum yields -conj(h)/h, hence the sign flip; c_{-k} = conj(b_k) because the
/// phase function has unit modulus.
inline HankelSymbols hankel_symbols(const CoeffSeries& m, const CoeffSeries& r, std::size_t length)
{
    const auto raw = phase_coefficients(m, r, length);
    CVec b(raw.size()), c(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        b[k] = -raw[k];
        c[k] = std::conj(b[k]);
    }
    return {CoeffSeries(std::move(b), Role::Phase), CoeffSeries(std::move(c), Role::Phase)};
}

/// M x M section of H(s) = (s_{j+k+1}).
inline DenseMatrix hankel_matrix(const CoeffSeries& s, std::size_t M)
{
    DenseMatrix h(M, M);
    for (std::size_t j = 0; j < M; ++j)
        for (std::size_t k = 0; k < M; ++k)
            h(j, k) = s.at_or_zero(j + k + 1);
    return h;
}

struct BorodinOkounkovResult {
    std::vector<std::size_t> n_values;
    std::vector<double> ratios; ///< det(I - Q_n K Q_n) / det(I - K)
    double widom = 1.0;         ///< 1 / det(I - K)
    std::size_t hankel_size = 0;
    double max_truncation_change = 0.0; ///< |value(M) - value(M/2)| relative, over all outputs
};

namespace detail {

struct BoSection {
    std::vector<double> ratios;
    double widom;
};

inline BoSection bo_section(const HankelSymbols& s, std::span<const std::size_t> orders, std::size_t M)
{
    DenseMatrix a = multiply(hankel_matrix(s.b, M), hankel_matrix(s.c_tilde, M));
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < M; ++j)
            a(i, j) = (i == j ? 1.0 : 0.0) - a(i, j);
    const LogDet full = dense_log_determinant(a);
    if (full.singular)
        fail(ErrorCode::TruncationUnstable, "I - H(b)H(c~) is singular");
    BoSection out;
    out.widom = std::exp(-full.log_abs) * (1.0 / full.phase).real();
    for (std::size_t n : orders) {
        if (n >= M)
            fail(ErrorCode::OutOfRange, "projection order must be below the Hankel truncation");
        const LogDet part = n == 0 ? full : dense_log_determinant(a.trailing_block(n));
        out.ratios.push_back(std::exp(part.log_abs - full.log_abs) * (part.phase / full.phase).real());
    }
    return out;
}

} // namespace detail

/// Right-hand side of the Borodin-Okounkov identity for each order n, with
/// H(b), H(c~) truncated to M x M and Q_n the projection onto indices >= n,
/// plus Widom's 1/det(I - H(b)H(c~)). Recomputed at M/2; a relative change
/// above tol raises TruncationUnstable.
inline BorodinOkounkovResult borodin_okounkov(const HankelSymbols& s, std::span<const std::size_t> orders,
                                              std::size_t M, double tol = 1e-8)
{
    if (M < 2)
        fail(ErrorCode::InvalidArgument, "Hankel truncation must be >= 2");
    const auto big = detail::bo_section(s, orders, M);
    const auto half = detail::bo_section(s, orders, M / 2);
    BorodinOkounkovResult out;
    out.n_values.assign(orders.begin(), orders.end());
    out.ratios = big.ratios;
    out.widom = big.widom;
    out.hankel_size = M;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); };
    double worst = rel(big.widom, half.widom);
    for (std::size_t i = 0; i < big.ratios.size(); ++i)
        worst = std::max(worst, rel(big.ratios[i], half.ratios[i]));
    out.max_truncation_change = worst;
    if (worst > tol)
        fail(ErrorCode::TruncationUnstable,
             "Hankel truncation " + std::to_string(M) + " vs " + std::to_string(M / 2) + " differs by " +
                 std::to_string(worst));
    return out;
}

inline double borodin_okounkov(const HankelSymbols& s, std::size_t n, std::size_t M, double tol = 1e-8)
{
    const std::size_t orders[] = {n};
    return borodin_okounkov(s, orders, M, tol).ratios.front();
}

} // namespace szegolab
