#pragma once

// Durbin-Levinson recursion and its inverse (the Verblunsky bijection between
// autocovariances and partial autocorrelations), Toeplitz determinants as
// products of prediction-error variances, finite predictors, monic orthogonal
// polynomials on the unit circle, and a Levinson Toeplitz solver.
//
// Convention: gamma_n = E[X_{t+n} conj(X_t)], predictor
//   X^_{n+1} = phi_{n,1} X_n + ... + phi_{n,n} X_1,
// and for complex data the reversal in the coefficient update is conjugated:
//   phi_{n+1,j} = phi_{n,j} - alpha_{n+1} conj(phi_{n,n+1-j}).

#include <szegolab/seq_core.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace szegolab {

/// 1 - |alpha|^2 below this is treated as loss of positive definiteness.
inline constexpr double kDegenerateDeficit = 1e-14;

struct LevinsonState {
    VerblunskySeq alpha;
    std::vector<double> v;        ///< v_0..v_N
    std::vector<CVec> predictors; ///< predictors[n-1] = (phi_{n,1}, ..., phi_{n,n})

    std::size_t order() const noexcept { return alpha.order(); }
    const CVec& phi(std::size_t n) const { return predictors.at(n - 1); }
};

namespace detail {

inline void check_step(std::size_t n, cplx a, double v_prev)
{
    if (!(std::abs(a) < 1.0) || 1.0 - std::norm(a) < kDegenerateDeficit || !(v_prev > 0.0))
        fail(ErrorCode::NotPositiveDefinite,
             "Toeplitz section not positive definite at order " + std::to_string(n));
}

/// Shared recursion. When `keep_rows` is false only the current predictor row
/// is held, so memory is O(N).
inline LevinsonState run_levinson(const AutocovSeq& g, std::size_t order, bool keep_rows)
{
    if (order > g.order())
        fail(ErrorCode::OutOfRange, "requested order exceeds autocovariance truncation");
    LevinsonState st;
    st.v.reserve(order + 1);
    st.v.push_back(g.gamma0());
    CVec alpha;
    alpha.reserve(order);
    CVec phi;
    phi.reserve(order);
    CVec next;
    next.reserve(order);
    for (std::size_t n = 0; n < order; ++n) {
        // alpha_{n+1} = [gamma_{n+1} - sum_j phi_{n,j} gamma_{n+1-j}] / v_n
        cplx num = g[n + 1];
        for (std::size_t j = 1; j <= n; ++j)
            num -= phi[j - 1] * g[n + 1 - j];
        const double vn = st.v.back();
        const cplx a = num / vn;
        detail::check_step(n + 1, a, vn);

        next.assign(n + 1, cplx{});
        for (std::size_t j = 1; j <= n; ++j)
            next[j - 1] = phi[j - 1] - a * std::conj(phi[n - j]);
        next[n] = a;
        phi.swap(next);

        alpha.push_back(a);
        st.v.push_back(vn * (1.0 - std::norm(a)));
        if (keep_rows)
            st.predictors.push_back(phi);
    }
    if (!keep_rows && order > 0)
        st.predictors.push_back(phi);
    st.alpha = VerblunskySeq(std::move(alpha));
    return st;
}

} // namespace detail

/// Full Durbin-Levinson state to the truncation order of g.
inline LevinsonState pacf_from_acov(const AutocovSeq& g)
{
    return detail::run_levinson(g, g.order(), true);
}

inline LevinsonState pacf_from_acov(const AutocovSeq& g, std::size_t order)
{
    return detail::run_levinson(g, order, true);
}

/// Verblunsky coefficients and variances only; keeps the last predictor row.
inline LevinsonState levinson_scan(const AutocovSeq& g, std::size_t order)
{
    return detail::run_levinson(g, order, false);
}

/// Inverse map: the unique autocovariance with the given PACF and gamma_0,
/// via gamma_{n+1} = alpha_{n+1} v_n + sum_j phi_{n,j} gamma_{n+1-j}.
inline AutocovSeq acov_from_pacf(const VerblunskySeq& a, double gamma0)
{
    if (!(gamma0 > 0.0))
        fail(ErrorCode::InvalidArgument, "gamma_0 must be > 0");
    const std::size_t N = a.order();
    CVec gamma(N + 1);
    gamma[0] = gamma0;
    CVec phi, next;
    phi.reserve(N);
    next.reserve(N);
    double v = gamma0;
    for (std::size_t n = 0; n < N; ++n) {
        const cplx an = a[n];
        if (!(std::abs(an) < 1.0))
            fail(ErrorCode::InvalidCoefficient, "|alpha| must be < 1");
        cplx g = an * v;
        for (std::size_t j = 1; j <= n; ++j)
            g += phi[j - 1] * gamma[n + 1 - j];
        gamma[n + 1] = g;

        next.assign(n + 1, cplx{});
        for (std::size_t j = 1; j <= n; ++j)
            next[j - 1] = phi[j - 1] - an * std::conj(phi[n - j]);
        next[n] = an;
        phi.swap(next);
        v *= 1.0 - std::norm(an);
    }
    return AutocovSeq(std::move(gamma));
}

/// log det T_n = sum_{k<n} log v_k. T_0 is the empty matrix (det 1).
inline double toeplitz_log_det(const AutocovSeq& g, std::size_t n)
{
    if (n == 0)
        return 0.0;
    const auto st = levinson_scan(g, n - 1);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        s += std::log(st.v[k]);
    return s;
}

inline double toeplitz_det(const AutocovSeq& g, std::size_t n) { return std::exp(toeplitz_log_det(g, n)); }

/// log det T_n for n = 0..order from one recursion.
inline std::vector<double> toeplitz_log_dets(const AutocovSeq& g, std::size_t order)
{
    std::vector<double> out(order + 1, 0.0);
    if (order == 0)
        return out;
    const auto st = levinson_scan(g, order - 1);
    for (std::size_t n = 1; n <= order; ++n)
        out[n] = out[n - 1] + std::log(st.v[n - 1]);
    return out;
}

/// phi_{n,1..n}.
inline CVec finite_predictors(const AutocovSeq& g, std::size_t n)
{
    if (n == 0)
        return {};
    return levinson_scan(g, n).predictors.back();
}

/// l2 distance between a finite predictor (zero-padded) and the infinite
/// predictor phi_j = sigma * r_j, j >= 1.
inline double predictor_l2_gap(std::span<const cplx> phi, double sigma, const CoeffSeries& r)
{
    const std::size_t len = std::max(phi.size(), r.size() == 0 ? 0 : r.size() - 1);
    double s = 0.0;
    for (std::size_t j = 1; j <= len; ++j) {
        const cplx f = j <= phi.size() ? phi[j - 1] : cplx{};
        s += std::norm(f - sigma * r.at_or_zero(j));
    }
    return std::sqrt(s);
}

/// Monic polynomial, coefficients in ascending powers.
struct OpucPoly {
    CVec coeffs;

    std::size_t degree() const noexcept { return coeffs.size() - 1; }

    cplx operator()(cplx z) const noexcept
    {
        cplx acc{};
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }

    /// Q*(z) = z^n conj(Q(1/conj z)): reverse and conjugate the coefficients.
    OpucPoly reversed() const
    {
        OpucPoly out{CVec(coeffs.rbegin(), coeffs.rend())};
        for (auto& c : out.coeffs)
            c = std::conj(c);
        return out;
    }
};

/// Phi_0..Phi_n by Szego recursion Phi_{k+1} = z Phi_k - conj(alpha_{k+1}) Phi_k^*.
inline std::vector<OpucPoly> opuc_family(const VerblunskySeq& a, std::size_t n)
{
    if (n > a.order())
        fail(ErrorCode::OutOfRange, "degree exceeds number of Verblunsky coefficients");
    std::vector<OpucPoly> out;
    out.reserve(n + 1);
    out.push_back(OpucPoly{CVec{1.0}});
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ak = a[k];
        if (!(std::abs(ak) < 1.0))
            fail(ErrorCode::InvalidCoefficient, "|alpha| must be < 1");
        const OpucPoly& cur = out.back();
        const OpucPoly rev = cur.reversed();
        CVec next(k + 2, cplx{});
        for (std::size_t j = 0; j <= k; ++j) {
            next[j + 1] += cur.coeffs[j];
            next[j] -= std::conj(ak) * rev.coeffs[j];
        }
        out.push_back(OpucPoly{std::move(next)});
    }
    return out;
}

inline OpucPoly opuc_polynomials(const VerblunskySeq& a, std::size_t n)
{
    return opuc_family(a, n).back();
}

/// Solves T x = y for the Hermitian Toeplitz matrix T(i,j) = gamma_{j-i} in
/// O(n^2) with the forward/backward-vector Levinson recursion.
inline CVec toeplitz_solve(const AutocovSeq& g, std::span<const cplx> y)
{
    const std::size_t n = y.size();
    if (n == 0)
        return {};
    if (n > g.size())
        fail(ErrorCode::OutOfRange, "system larger than autocovariance truncation");
    // Row-major entries M(i,j) = t_{i-j} with t_k = gamma_{-k}.
    auto t = [&](std::ptrdiff_t k) { return g.lag(-k); };
    const double t0 = g.gamma0();
    CVec f{1.0 / t0}, b{1.0 / t0}, x{y[0] / t0};
    CVec nf, nb;
    for (std::size_t k = 1; k < n; ++k) {
        cplx ef{}, eb{}, ex{};
        for (std::size_t i = 0; i < k; ++i) {
            const auto ki = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(i);
            ef += t(ki) * f[i];
            eb += t(-static_cast<std::ptrdiff_t>(i) - 1) * b[i];
            ex += t(ki) * x[i];
        }
        const cplx denom = 1.0 - ef * eb;
        if (std::abs(denom) < kDegenerateDeficit)
            fail(ErrorCode::NotPositiveDefinite, "Levinson solve broke down at order " + std::to_string(k));
        nf.assign(k + 1, cplx{});
        nb.assign(k + 1, cplx{});
        for (std::size_t i = 0; i < k; ++i) {
            nf[i] += f[i];
            nf[i + 1] -= ef * b[i];
            nb[i + 1] += b[i];
            nb[i] -= eb * f[i];
        }
        for (std::size_t i = 0; i <= k; ++i) {
            nf[i] /= denom;
            nb[i] /= denom;
        }
        f.swap(nf);
        b.swap(nb);
        x.push_back(cplx{});
        const cplx corr = y[k] - ex;
        for (std::size_t i = 0; i <= k; ++i)
            x[i] += corr * b[i];
    }
    return x;
}

} // namespace szegolab
