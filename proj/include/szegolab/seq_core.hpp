#pragma once

// Sequence types shared by every module, plus norms and one-sided power-series
// algebra. All sequences are stored one-sided; Hermitian extensions are applied
// by whoever consumes them.

#include <szegolab/errors.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace szegolab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

inline CVec to_complex(std::span<const double> xs)
{
    return CVec(xs.begin(), xs.end());
}

inline std::vector<double> real_parts(std::span<const cplx> xs)
{
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [](cplx c) { return c.real(); });
    return out;
}

inline bool is_power_of_two(std::size_t m) noexcept { return m != 0 && (m & (m - 1)) == 0; }

/// Autocovariance gamma_0..gamma_N, index = lag. gamma_{-n} = conj(gamma_n).
///
/// Construction checks the cheap invariants (gamma_0 real and positive,
/// |gamma_n| <= gamma_0). Positive definiteness of the Toeplitz sections is left
/// to the Levinson recursion, which notices it for free.
class AutocovSeq {
public:
    explicit AutocovSeq(CVec gamma) : gamma_(std::move(gamma))
    {
        if (gamma_.empty())
            fail(ErrorCode::InvalidArgument, "autocovariance needs at least gamma_0");
        const cplx g0 = gamma_[0];
        if (!(g0.real() > 0.0) || std::abs(g0.imag()) > 1e-12 * g0.real())
            fail(ErrorCode::NotPositiveDefinite, "gamma_0 must be real and > 0");
        gamma_[0] = g0.real();
        const double bound = g0.real() * (1.0 + 1e-10);
        for (std::size_t n = 1; n < gamma_.size(); ++n) {
            if (!std::isfinite(gamma_[n].real()) || !std::isfinite(gamma_[n].imag()))
                fail(ErrorCode::InvalidArgument, "non-finite autocovariance at lag " + std::to_string(n));
            if (std::abs(gamma_[n]) > bound)
                fail(ErrorCode::NotPositiveDefinite,
                     "|gamma_" + std::to_string(n) + "| exceeds gamma_0");
        }
    }

    explicit AutocovSeq(std::span<const double> gamma) : AutocovSeq(to_complex(gamma)) {}
    AutocovSeq(std::initializer_list<double> gamma)
        : AutocovSeq(std::span<const double>(gamma.begin(), gamma.size()))
    {
    }

    std::size_t order() const noexcept { return gamma_.size() - 1; }
    std::size_t size() const noexcept { return gamma_.size(); }
    double gamma0() const noexcept { return gamma_[0].real(); }
    const cplx& operator[](std::size_t n) const noexcept { return gamma_[n]; }

    /// Two-sided access; lags beyond the truncation read as zero.
    cplx lag(std::ptrdiff_t n) const noexcept
    {
        const auto k = static_cast<std::size_t>(n < 0 ? -n : n);
        if (k >= gamma_.size())
            return {};
        return n < 0 ? std::conj(gamma_[k]) : gamma_[k];
    }

    std::span<const cplx> values() const noexcept { return gamma_; }

    AutocovSeq truncated(std::size_t order) const
    {
        if (order > this->order())
            fail(ErrorCode::OutOfRange, "truncation order exceeds available lags");
        return AutocovSeq(CVec(gamma_.begin(), gamma_.begin() + static_cast<std::ptrdiff_t>(order) + 1));
    }

private:
    CVec gamma_;
};

/// Verblunsky coefficients alpha_1..alpha_N. Storage is zero-based, so
/// `values()[k]` is alpha_{k+1}; `alpha(n)` uses the one-based lag.
class VerblunskySeq {
public:
    VerblunskySeq() = default;

    explicit VerblunskySeq(CVec alpha) : alpha_(std::move(alpha))
    {
        for (std::size_t k = 0; k < alpha_.size(); ++k) {
            if (!(std::abs(alpha_[k]) < 1.0))
                fail(ErrorCode::InvalidCoefficient,
                     "|alpha_" + std::to_string(k + 1) + "| must be < 1");
        }
    }

    explicit VerblunskySeq(std::span<const double> alpha) : VerblunskySeq(to_complex(alpha)) {}
    VerblunskySeq(std::initializer_list<double> alpha)
        : VerblunskySeq(std::span<const double>(alpha.begin(), alpha.size()))
    {
    }

    std::size_t order() const noexcept { return alpha_.size(); }
    cplx alpha(std::size_t n) const noexcept { return alpha_[n - 1]; }
    const cplx& operator[](std::size_t k) const noexcept { return alpha_[k]; }
    std::span<const cplx> values() const noexcept { return alpha_; }

private:
    CVec alpha_;
};

enum class Summation { Dirichlet, Fejer, Exact };

constexpr std::string_view to_string(Summation s) noexcept
{
    switch (s) {
    case Summation::Dirichlet: return "dirichlet";
    case Summation::Fejer: return "fejer";
    case Summation::Exact: return "exact";
    }
    return "unknown";
}

/// Spectral density sampled at theta_j = 2*pi*(j + offset)/M, normalized
/// against dtheta/2pi so the grid mean approximates gamma_0. `offset` is a
/// fraction of a cell; a half-cell shift keeps isolated zeros at theta = 0 or
/// pi off the grid.
class SpectralGrid {
public:
    SpectralGrid(std::vector<double> values, double offset = 0.0,
                 Summation summation = Summation::Exact)
        : values_(std::move(values)), offset_(offset), summation_(summation)
    {
        if (!is_power_of_two(values_.size()))
            fail(ErrorCode::InvalidArgument, "spectral grid size must be a power of two");
        for (double v : values_) {
            if (!std::isfinite(v))
                fail(ErrorCode::InvalidArgument, "spectral grid holds a non-finite sample");
        }
    }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    std::span<const double> values() const noexcept { return values_; }
    double offset() const noexcept { return offset_; }
    Summation summation() const noexcept { return summation_; }

    double theta(std::size_t j) const noexcept
    {
        return 2.0 * kPi * (static_cast<double>(j) + offset_) / static_cast<double>(values_.size());
    }

    double mean() const noexcept
    {
        double s = 0.0;
        for (double v : values_)
            s += v;
        return s / static_cast<double>(values_.size());
    }

    double min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
    double max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

private:
    std::vector<double> values_;
    double offset_;
    Summation summation_;
};

enum class Role { MA, AR, Cepstrum, Phase, Poly };

constexpr std::string_view to_string(Role r) noexcept
{
    switch (r) {
    case Role::MA: return "ma";
    case Role::AR: return "ar";
    case Role::Cepstrum: return "cepstrum";
    case Role::Phase: return "phase";
    case Role::Poly: return "poly";
    }
    return "unknown";
}

/// One-sided power series c_0..c_N with a tag saying what it represents.
class CoeffSeries {
public:
    CoeffSeries(CVec coeffs, Role role) : coeffs_(std::move(coeffs)), role_(role)
    {
        if (coeffs_.empty())
            fail(ErrorCode::InvalidArgument, "coefficient series must be non-empty");
        if (role_ == Role::MA) {
            const cplx c0 = coeffs_[0];
            if (!(c0.real() > 0.0) || std::abs(c0.imag()) > 1e-12 * c0.real())
                fail(ErrorCode::InvalidArgument, "MA series needs real positive m_0");
        }
    }

    CoeffSeries(std::initializer_list<double> coeffs, Role role)
        : CoeffSeries(CVec(coeffs.begin(), coeffs.end()), role)
    {
    }

    Role role() const noexcept { return role_; }
    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    const cplx& operator[](std::size_t n) const noexcept { return coeffs_[n]; }
    cplx at_or_zero(std::size_t n) const noexcept { return n < coeffs_.size() ? coeffs_[n] : cplx{}; }
    std::span<const cplx> values() const noexcept { return coeffs_; }

    /// Horner evaluation of the truncated series at z.
    cplx evaluate(cplx z) const noexcept
    {
        cplx acc{};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * z + *it;
        return acc;
    }

private:
    CVec coeffs_;
    Role role_;
};

struct NormReport {
    double l1 = 0.0;
    double l2 = 0.0;
    double h_half_sq = 0.0;
    // Filled by the classifier's tail fit; truncated sums alone cannot decide.
    struct {
        std::optional<bool> l1, l2, h_half;
    } diverging;
};

// --- norms ---------------------------------------------------------------

inline double lp_norm(std::span<const cplx> a, int p)
{
    if (p == 1) {
        double s = 0.0;
        for (const auto& x : a)
            s += std::abs(x);
        return s;
    }
    if (p == 2) {
        double s = 0.0;
        for (const auto& x : a)
            s += std::norm(x);
        return std::sqrt(s);
    }
    fail(ErrorCode::InvalidArgument, "lp_norm supports p in {1, 2}");
}

inline double lp_norm(const CoeffSeries& a, int p) { return lp_norm(a.values(), p); }

/// sum (1 + n)|a_n|^2 with a_0 at index 0.
inline double h_half_norm_sq(std::span<const cplx> a, std::size_t first_index = 0)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += (1.0 + static_cast<double>(k + first_index)) * std::norm(a[k]);
    return s;
}

inline double h_half_norm_sq(const CoeffSeries& a) { return h_half_norm_sq(a.values()); }

inline NormReport norm_report(std::span<const cplx> a, std::size_t first_index = 0)
{
    NormReport r;
    r.l1 = lp_norm(a, 1);
    r.l2 = lp_norm(a, 2);
    r.h_half_sq = h_half_norm_sq(a, first_index);
    return r;
}

// --- power-series algebra --------------------------------------------------

/// Cauchy product truncated to order N.
inline CVec cauchy_product(std::span<const cplx> a, std::span<const cplx> b, std::size_t order)
{
    CVec out(order + 1);
    for (std::size_t k = 0; k < a.size() && k <= order; ++k) {
        for (std::size_t j = 0; j < b.size() && k + j <= order; ++j)
            out[k + j] += a[k] * b[j];
    }
    return out;
}

/// Coefficients of h = exp(L_0/2 + sum_{n>=1} L_n z^n) to order N.
inline CoeffSeries series_exp(const CoeffSeries& cepstrum, std::size_t order)
{
    CVec m(order + 1);
    m[0] = std::exp(cepstrum[0] / 2.0);
    for (std::size_t n = 1; n <= order; ++n) {
        cplx s{};
        for (std::size_t k = 1; k <= n; ++k)
            s += static_cast<double>(k) * cepstrum.at_or_zero(k) * m[n - k];
        m[n] = s / static_cast<double>(n);
    }
    return CoeffSeries(std::move(m), Role::MA);
}

/// Formal logarithm of a series with p_0 != 0: q = log p to order N.
inline CVec series_log(std::span<const cplx> p, std::size_t order)
{
    if (p.empty() || p[0] == cplx{})
        fail(ErrorCode::ZeroLeadingCoefficient, "series_log needs p_0 != 0");
    CVec q(order + 1);
    q[0] = std::log(p[0]);
    auto coeff = [&](std::size_t k) { return k < p.size() ? p[k] : cplx{}; };
    for (std::size_t n = 1; n <= order; ++n) {
        cplx s = static_cast<double>(n) * coeff(n);
        for (std::size_t k = 1; k < n; ++k)
            s -= static_cast<double>(k) * q[k] * coeff(n - k);
        q[n] = s / (static_cast<double>(n) * p[0]);
    }
    return q;
}

/// r with (sum m_n z^n)(sum r_n z^n) = -1 to order N, i.e. the series of -1/h.
inline CoeffSeries series_reciprocal_negated(const CoeffSeries& m, std::size_t order)
{
    if (m[0] == cplx{})
        fail(ErrorCode::ZeroLeadingCoefficient, "m_0 = 0 has no reciprocal");
    CVec r(order + 1);
    r[0] = -1.0 / m[0];
    for (std::size_t n = 1; n <= order; ++n) {
        cplx s{};
        for (std::size_t k = 1; k <= n; ++k)
            s += m.at_or_zero(k) * r[n - k];
        r[n] = -s / m[0];
    }
    return CoeffSeries(std::move(r), Role::AR);
}

/// gamma_n = sum_k m_{n+k} conj(m_k), n = 0..order (defaults to the length of m).
inline AutocovSeq convolve_acov(const CoeffSeries& m, std::optional<std::size_t> order = std::nullopt)
{
    const std::size_t len = m.size();
    const std::size_t N = order.value_or(len - 1);
    CVec gamma(N + 1);
    for (std::size_t n = 0; n <= N; ++n) {
        cplx s{};
        for (std::size_t k = 0; k + n < len; ++k)
            s += m[n + k] * std::conj(m[k]);
        gamma[n] = s;
    }
    return AutocovSeq(std::move(gamma));
}

} // namespace szegolab
