#pragma once

// Dependence-regime classification. Summability of an infinite sequence cannot
// be read off a truncation, so verdicts come either from known decay laws of a
// zoo model or from a tail fit, and "undetermined" is a legitimate answer.

#include <szegolab/levinson.hpp>
#include <szegolab/models.hpp>
#include <szegolab/seq_core.hpp>
#include <szegolab/szego.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace szegolab {

enum class Verdict { Holds, Fails, Undetermined };

constexpr std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

inline Verdict negate(Verdict v) noexcept
{
    return v == Verdict::Holds ? Verdict::Fails : v == Verdict::Fails ? Verdict::Holds : Verdict::Undetermined;
}

enum class TailRegime { Exponential, Power, Undetermined };

constexpr std::string_view to_string(TailRegime r) noexcept
{
    switch (r) {
    case TailRegime::Exponential: return "exponential";
    case TailRegime::Power: return "power";
    case TailRegime::Undetermined: return "undetermined";
    }
    return "undetermined";
}

inline constexpr double kTailResidualThreshold = 0.05;
/// Fitted exponents this close to a summability threshold are not decided.
inline constexpr double kExponentMargin = 0.05;

struct TailFit {
    double exponent = std::numeric_limits<double>::infinity(); ///< p in |a_n| ~ C n^{-p}
    double amplitude = 0.0;                                    ///< C (power) or prefactor (exponential)
    double rate = 0.0;                                         ///< kappa in |a_n| ~ C e^{-kappa n}
    TailRegime regime = TailRegime::Undetermined;
    std::size_t lo = 0, hi = 0;
    double residual_power = 0.0;
    double residual_exponential = 0.0;
    std::size_t points = 0;
};

namespace detail {

struct LineFit {
    double slope, intercept, rms;
};

inline LineFit least_squares(std::span<const double> x, std::span<const double> y)
{
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

} // namespace detail

/// Fits log|a_n| against log n and against n over n in [lo, hi], where the
/// sequence element a[k] has index n = k + first_index. Entries with
/// |a_n| <= floor are skipped.
inline TailFit tail_exponent(std::span<const cplx> a, std::size_t first_index, std::size_t lo, std::size_t hi,
                             double floor = 0.0)
{
    if (lo < std::max<std::size_t>(first_index, 1) || hi < lo || hi >= a.size() + first_index)
        fail(ErrorCode::OutOfRange, "tail window outside the truncation");
    std::vector<double> logn, n_lin, logv;
    for (std::size_t n = lo; n <= hi; ++n) {
        const double v = std::abs(a[n - first_index]);
        if (!(v > floor) || !std::isfinite(v))
            continue;
        logn.push_back(std::log(static_cast<double>(n)));
        n_lin.push_back(static_cast<double>(n));
        logv.push_back(std::log(v));
    }
    if (logv.size() < 8)
        fail(ErrorCode::InsufficientData, "fewer than 8 usable points in the tail window");
    const auto pw = detail::least_squares(logn, logv);
    const auto ex = detail::least_squares(n_lin, logv);
    TailFit fit;
    fit.lo = lo;
    fit.hi = hi;
    fit.points = logv.size();
    fit.residual_power = pw.rms;
    fit.residual_exponential = ex.rms;
    if (std::min(pw.rms, ex.rms) > kTailResidualThreshold) {
        fit.regime = TailRegime::Undetermined;
        fit.exponent = -pw.slope;
        fit.amplitude = std::exp(pw.intercept);
    } else if (ex.rms < pw.rms && ex.slope < 0.0) {
        fit.regime = TailRegime::Exponential;
        fit.rate = -ex.slope;
        fit.amplitude = std::exp(ex.intercept);
    } else {
        fit.regime = TailRegime::Power;
        fit.exponent = -pw.slope;
        fit.amplitude = std::exp(pw.intercept);
    }
    return fit;
}

/// Default window [N/4, N] over a sequence with indices first_index..N.
inline TailFit tail_exponent(std::span<const cplx> a, std::size_t first_index = 0)
{
    const std::size_t N = a.size() + first_index - 1;
    return tail_exponent(a, first_index, std::max<std::size_t>(N / 4, std::max<std::size_t>(first_index, 1)), N);
}

// --- summability evidence -----------------------------------------------------------

/// Where a verdict's decay information came from.
struct TailEvidence {
    bool from_model = false;
    TailLaw law;                ///< valid when from_model
    std::optional<TailFit> fit; ///< valid when !from_model and a fit was attempted
    bool decayed_to_rounding = false;
    std::string note;

    /// Verdict on sum n^{weight} |a_n|^{power} < infinity, i.e. on
    /// exponent * power - weight > 1 for a power law.
    Verdict summable(double power, double weight) const
    {
        const double threshold = (1.0 + weight) / power;
        if (from_model) {
            if (law.geometric)
                return Verdict::Holds;
            return law.exponent > threshold ? Verdict::Holds : Verdict::Fails;
        }
        if (decayed_to_rounding)
            return Verdict::Holds;
        if (!fit || fit->regime == TailRegime::Undetermined)
            return Verdict::Undetermined;
        if (fit->regime == TailRegime::Exponential)
            return Verdict::Holds;
        if (fit->exponent > threshold + kExponentMargin)
            return Verdict::Holds;
        if (fit->exponent < threshold - kExponentMargin)
            return Verdict::Fails;
        return Verdict::Undetermined;
    }
};

/// Fit-based evidence for a raw sequence. Entries below 1e-13 of the peak are
/// rounding noise; a window that is entirely noise means the sequence decayed
/// faster than the truncation can resolve.
inline TailEvidence fit_evidence(std::span<const cplx> a, std::size_t first_index)
{
    TailEvidence ev;
    double peak = 0.0;
    for (const auto& x : a)
        peak = std::max(peak, std::abs(x));
    const double floor = 1e-13 * peak;
    if (a.empty() || peak == 0.0) {
        ev.decayed_to_rounding = true;
        ev.note = "identically zero";
        return ev;
    }
    const std::size_t N = a.size() + first_index - 1;
    const std::size_t lo = std::max<std::size_t>(N / 4, std::max<std::size_t>(first_index, 1));
    if (lo > N) {
        ev.note = "truncation too short for a tail fit";
        return ev;
    }
    double window_peak = 0.0;
    for (std::size_t n = lo; n <= N; ++n)
        window_peak = std::max(window_peak, std::abs(a[n - first_index]));
    try {
        ev.fit = tail_exponent(a, first_index, lo, N, floor);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientData)
            throw;
        // Too few points above the noise floor: either the tail is already at
        // rounding level or the sequence has only a handful of nonzero lags.
        const double last = std::abs(a.back());
        if (window_peak <= floor || last <= floor) {
            ev.decayed_to_rounding = true;
            ev.note = "tail at rounding level";
        } else {
            ev.note = "insufficient data for a tail fit";
        }
    }
    return ev;
}

inline TailEvidence model_evidence(TailLaw law)
{
    TailEvidence ev;
    ev.from_model = true;
    ev.law = law;
    ev.note = law.geometric ? "closed form: geometric decay" : "closed form: power decay";
    return ev;
}

// --- spectral evidence ------------------------------------------------------------------

/// Grid mean of 1/w; +inf when w vanishes somewhere on the grid.
inline double inverse_density_mean(const SpectralGrid& w)
{
    double s = 0.0;
    for (double x : w.values()) {
        if (!(x > 0.0))
            return std::numeric_limits<double>::infinity();
        s += 1.0 / x;
    }
    return s / static_cast<double>(w.size());
}

struct A2Estimate {
    std::vector<double> per_level; ///< sup over arcs of 2^j cells, j = 0..levels
    double sup = 0.0;
};

/// Muckenhoupt A2 product (mean of w)(mean of 1/w) maximized over every
/// contiguous arc of dyadic length (all start positions, wrapping).
inline A2Estimate muckenhoupt_a2(const SpectralGrid& w, std::size_t max_level)
{
    const std::size_t M = w.size();
    if (!(w.min() > 0.0))
        fail(ErrorCode::NonpositiveDensity, "A2 needs a strictly positive density");
    std::vector<double> pw(2 * M + 1, 0.0), pinv(2 * M + 1, 0.0);
    for (std::size_t i = 0; i < 2 * M; ++i) {
        pw[i + 1] = pw[i] + w[i % M];
        pinv[i + 1] = pinv[i] + 1.0 / w[i % M];
    }
    A2Estimate out;
    for (std::size_t level = 0; level <= max_level; ++level) {
        const std::size_t len = std::size_t{1} << level;
        if (len > M)
            break;
        double best = 0.0;
        const double inv_len = 1.0 / static_cast<double>(len);
        for (std::size_t i = 0; i < M; ++i) {
            const double v = (pw[i + len] - pw[i]) * inv_len * (pinv[i + len] - pinv[i]) * inv_len;
            best = std::max(best, v);
        }
        out.per_level.push_back(best);
        out.sup = std::max(out.sup, best);
    }
    return out;
}

// --- canonical correlation of past and future -------------------------------------------

inline constexpr std::size_t kMaxCanonicalBlock = 64;

/// Largest canonical correlation between span(X_{-n..-1}) and span(X_{0..n-1}).
inline double canonical_correlation(const AutocovSeq& g, std::size_t n)
{
    if (n == 0 || n > kMaxCanonicalBlock)
        fail(ErrorCode::OutOfRange, "block size must be in 1..64");
    if (g.order() < 2 * n - 1)
        fail(ErrorCode::OutOfRange, "needs autocovariance to lag 2n - 1");
    (void)levinson_scan(g, 2 * n - 1);

    using Mat = Eigen::MatrixXcd;
    const auto N = static_cast<Eigen::Index>(n);
    Mat P(N, N), F(N, N), C(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index k = 0; k < N; ++k) {
            P(i, k) = g.lag(k - i);                // E[X_{-1-i} conj X_{-1-k}]
            F(i, k) = g.lag(i - k);                // E[X_i conj X_k]
            C(i, k) = std::conj(g.lag(i + k + 1)); // E[X_{-1-i} conj X_k]
        }
    }
    auto inv_sqrt = [](const Mat& A) {
        Eigen::SelfAdjointEigenSolver<Mat> es(A);
        const auto& ev = es.eigenvalues();
        if (ev.minCoeff() <= 0.0)
            fail(ErrorCode::NotPositiveDefinite, "Toeplitz block not positive definite");
        return Mat(es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint());
    };
    const Mat K = inv_sqrt(P) * C * inv_sqrt(F);
    Eigen::JacobiSVD<Mat> svd(K);
    return std::min(svd.singularValues()(0), 1.0 - 1e-12);
}

/// H = d + 1/2 for fractional noise with d in (0, 1/2).
inline double hurst_from_d(double d)
{
    if (!(d > 0.0 && d < 0.5))
        fail(ErrorCode::OutOfRange, "d must lie in (0, 1/2)");
    return d + 0.5;
}

// --- condition flags --------------------------------------------------------------------------

struct ConditionFlags {
    Verdict sz = Verdict::Undetermined;
    Verdict baxter = Verdict::Undetermined;
    Verdict ssz = Verdict::Undetermined;
    Verdict minimal = Verdict::Undetermined;
    Verdict lrd_di = Verdict::Undetermined;
    Verdict lrd_li = Verdict::Undetermined;

    struct Evidence {
        TailEvidence alpha, gamma;
        std::optional<TailEvidence> ar;
        NormReport alpha_norms;
        NormReport gamma_norms;
        std::optional<double> inv_density_mean, inv_density_mean_doubled;
        std::optional<double> a2, a2_doubled;
        std::size_t grid_size = 0;
        std::string minimal_note;
    } evidence;

    /// baxter => sz, ssz => sz, lrd_di <=> not baxter.
    bool implications_hold() const
    {
        if (baxter == Verdict::Holds && sz != Verdict::Holds)
            return false;
        if (ssz == Verdict::Holds && sz != Verdict::Holds)
            return false;
        return lrd_di == negate(baxter);
    }
};

struct ClassifyInput {
    VerblunskySeq alpha;
    AutocovSeq gamma{1.0};
    std::optional<CoeffSeries> ar;
    std::optional<SpectralGrid> grid, grid_doubled; ///< same density at M and 2M
    std::optional<KnownTails> known;
};

inline constexpr double kDoublingGrowth = 0.10;

inline ConditionFlags classify_conditions(const ClassifyInput& in)
{
    ConditionFlags f;
    auto& ev = f.evidence;
    if (in.known) {
        ev.alpha = model_evidence(in.known->alpha);
        ev.gamma = model_evidence(in.known->gamma);
        ev.ar = model_evidence(in.known->ar);
    } else {
        ev.alpha = fit_evidence(in.alpha.values(), 1);
        ev.gamma = fit_evidence(in.gamma.values(), 0);
        if (in.ar)
            ev.ar = fit_evidence(in.ar->values(), 0);
    }

    // alpha in l2 / l1 / H^{1/2}.
    f.sz = ev.alpha.summable(2.0, 0.0);
    f.baxter = ev.alpha.summable(1.0, 0.0);
    f.ssz = ev.alpha.summable(2.0, 1.0);
    f.lrd_di = negate(f.baxter);
    f.lrd_li = negate(ev.gamma.summable(2.0, 1.0));

    ev.alpha_norms = norm_report(in.alpha.values(), 1);
    ev.alpha_norms.diverging.l1 = f.baxter == Verdict::Undetermined ? std::nullopt : std::optional(f.baxter == Verdict::Fails);
    ev.alpha_norms.diverging.l2 = f.sz == Verdict::Undetermined ? std::nullopt : std::optional(f.sz == Verdict::Fails);
    ev.alpha_norms.diverging.h_half = f.ssz == Verdict::Undetermined ? std::nullopt : std::optional(f.ssz == Verdict::Fails);
    ev.gamma_norms = norm_report(in.gamma.values(), 0);
    ev.gamma_norms.diverging.h_half =
        f.lrd_li == Verdict::Undetermined ? std::nullopt : std::optional(f.lrd_li == Verdict::Holds);

    // Minimality: r in l2, cross-checked against integrability of 1/w.
    const Verdict by_r = ev.ar ? ev.ar->summable(2.0, 0.0) : Verdict::Undetermined;
    Verdict by_grid = Verdict::Undetermined;
    if (in.grid && in.grid_doubled) {
        const double a = inverse_density_mean(*in.grid);
        const double b = inverse_density_mean(*in.grid_doubled);
        ev.inv_density_mean = a;
        ev.inv_density_mean_doubled = b;
        ev.grid_size = in.grid->size();
        if (!std::isfinite(a) || !std::isfinite(b))
            by_grid = Verdict::Fails;
        else
            by_grid = std::abs(b - a) < kDoublingGrowth * a ? Verdict::Holds : Verdict::Fails;
        if (in.grid->min() > 0.0 && in.grid_doubled->min() > 0.0) {
            const auto lv = [](const SpectralGrid& g) {
                std::size_t lvl = 0;
                while ((std::size_t{1} << (lvl + 1)) <= g.size())
                    ++lvl;
                return lvl;
            };
            ev.a2 = muckenhoupt_a2(*in.grid, lv(*in.grid)).sup;
            ev.a2_doubled = muckenhoupt_a2(*in.grid_doubled, lv(*in.grid_doubled)).sup;
        }
    }
    if (by_r != Verdict::Undetermined && by_grid != Verdict::Undetermined && by_r != by_grid) {
        f.minimal = Verdict::Undetermined;
        ev.minimal_note = "r-tail and 1/w quadrature disagree";
    } else {
        f.minimal = by_r != Verdict::Undetermined ? by_r : by_grid;
        ev.minimal_note = by_r == by_grid ? "r-tail and 1/w quadrature agree"
                          : by_r != Verdict::Undetermined ? "from r-tail only"
                                                          : "from 1/w quadrature only";
    }
    return f;
}

/// Classification of a zoo model: closed-form decay laws where known, plus
/// half-cell-shifted closed-form density grids at M and 2M for the 1/w and A2
/// evidence. alpha and gamma come from the exact model to order N.
inline ConditionFlags classify_model(const ModelSpec& spec, std::size_t N, std::size_t M = 1024)
{
    ClassifyInput in;
    in.gamma = exact_acov(spec, N);
    try {
        in.alpha = exact_pacf(spec, N);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoClosedForm)
            throw;
        in.alpha = pacf_from_acov(in.gamma).alpha;
    }
    in.known = known_tails(spec);
    in.grid = grid_from_density([&](double th) { return exact_density(spec, th); }, M, 0.5);
    in.grid_doubled = grid_from_density([&](double th) { return exact_density(spec, th); }, 2 * M, 0.5);
    if (!in.known) {
        try {
            const auto L = cepstrum(*in.grid, std::min(N, M / 2 - 1));
            in.ar = ar_coefficients(ma_coefficients(L, N), N);
        } catch (const Error&) {
            // grid not log-admissible; minimality falls back to quadrature
        }
    }
    return classify_conditions(in);
}

} // namespace szegolab
