#pragma once

// Closed-form model zoo (white noise, AR(1), MA(q), ARMA(p,q), fractional
// noise FARIMA(0,d,0), Bloomfield exponential models), Gaussian path
// simulation through a truncated moving-average filter, and the biased sample
// autocovariance. Serves as the oracle and ingestion layer for everything else.

#include <szegolab/seq_core.hpp>
#include <szegolab/szego.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace szegolab {

enum class ModelKind { Free, AR1, MA, ARMA, Farima, Bloomfield };

struct ModelSpec {
    ModelKind kind = ModelKind::Free;
    std::vector<double> ar;        ///< phi_1..phi_p: X_t = sum phi_j X_{t-j} + ...
    std::vector<double> ma;        ///< theta_1..theta_q: ... + xi_t + sum theta_j xi_{t-j}
    double d = 0.0;                ///< fractional differencing order
    std::vector<double> cepstrum;  ///< Bloomfield L_0..L_p
    double innovation_var = 1.0;   ///< ignored for Bloomfield, whose innovation variance is exp(L_0)

    static ModelSpec free() { return {}; }
    static ModelSpec ar1(double phi) { return {ModelKind::AR1, {phi}, {}, 0.0, {}, 1.0}; }
    static ModelSpec ma_q(std::vector<double> theta) { return {ModelKind::MA, {}, std::move(theta), 0.0, {}, 1.0}; }
    static ModelSpec arma(std::vector<double> phi, std::vector<double> theta)
    {
        return {ModelKind::ARMA, std::move(phi), std::move(theta), 0.0, {}, 1.0};
    }
    static ModelSpec farima(double d) { return {ModelKind::Farima, {}, {}, d, {}, 1.0}; }
    static ModelSpec bloomfield(std::vector<double> L) { return {ModelKind::Bloomfield, {}, {}, 0.0, std::move(L), 1.0}; }

    std::string describe() const
    {
        std::ostringstream os;
        // shortest text that parses back to the same double
        auto put = [&](double x) {
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof buf, x);
            os.write(buf, res.ptr - buf);
        };
        auto list = [&](const std::vector<double>& v) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                os << (i ? "," : "");
                put(v[i]);
            }
        };
        switch (kind) {
        case ModelKind::Free: os << "free"; break;
        case ModelKind::AR1: os << "ar1:"; put(ar.at(0)); break;
        case ModelKind::MA: os << "ma:"; list(ma); break;
        case ModelKind::ARMA: os << "arma:"; list(ar); os << "/"; list(ma); break;
        case ModelKind::Farima: os << "farima:"; put(d); break;
        case ModelKind::Bloomfield: os << "bloomfield:"; list(cepstrum); break;
        }
        return os.str();
    }
};

// --- polynomial helpers ------------------------------------------------------

/// Step-down (Schur-Cohn) test on 1 - c_1 z - ... - c_p z^p: true iff every
/// root lies strictly outside the closed unit disc.
inline bool roots_outside_unit_disc(std::span<const double> c)
{
    std::vector<double> a(c.begin(), c.end());
    while (!a.empty() && a.back() == 0.0)
        a.pop_back();
    while (!a.empty()) {
        const std::size_t p = a.size();
        const double k = a[p - 1];
        if (!(std::abs(k) < 1.0))
            return false;
        std::vector<double> lower(p - 1);
        for (std::size_t j = 0; j + 1 < p; ++j)
            lower[j] = (a[j] + k * a[p - 2 - j]) / (1.0 - k * k);
        a.swap(lower);
    }
    return true;
}

/// theta(z) = 1 + theta_1 z + ... invertible iff roots outside the closed disc.
inline bool ma_invertible(std::span<const double> theta)
{
    std::vector<double> neg(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j)
        neg[j] = -theta[j];
    return roots_outside_unit_disc(neg);
}

inline void validate(const ModelSpec& s)
{
    auto all_finite = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x))
                return false;
        return true;
    };
    if (!(s.innovation_var > 0.0) || !std::isfinite(s.innovation_var))
        fail(ErrorCode::InvalidModel, "innovation variance must be positive");
    if (!all_finite(s.ar) || !all_finite(s.ma) || !all_finite(s.cepstrum))
        fail(ErrorCode::InvalidModel, "model parameters must be finite");
    switch (s.kind) {
    case ModelKind::Free: break;
    case ModelKind::AR1:
        if (s.ar.size() != 1 || !(std::abs(s.ar[0]) < 1.0))
            fail(ErrorCode::InvalidModel, "AR(1) needs |phi| < 1");
        break;
    case ModelKind::MA:
        if (s.ma.empty())
            fail(ErrorCode::InvalidModel, "MA model needs at least one theta");
        break;
    case ModelKind::ARMA:
        if (!roots_outside_unit_disc(s.ar))
            fail(ErrorCode::InvalidModel, "AR polynomial has a root in the closed unit disc");
        break;
    case ModelKind::Farima:
        if (!(s.d > 0.0 && s.d < 0.5))
            fail(ErrorCode::InvalidModel, "FARIMA(0,d,0) needs d in (0, 1/2)");
        break;
    case ModelKind::Bloomfield:
        if (s.cepstrum.empty())
            fail(ErrorCode::InvalidModel, "Bloomfield model needs L_0");
        break;
    }
}

/// Parses `kind:p1,p2,...`. Kinds: free, ar1:phi, ma1:theta, ma:t1,...,
/// arma:phi1,.../theta1,..., farima:d, bloomfield:L0,L1,...
inline ModelSpec parse_model_spec(std::string_view text)
{
    auto parse_list = [&](std::string_view s) {
        std::vector<double> out;
        if (s.empty())
            return out;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const std::size_t comma = s.find(',', pos);
            const std::string_view tok = s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos);
            double v = 0.0;
            const std::string tmp(tok);
            std::size_t used = 0;
            try {
                v = std::stod(tmp, &used);
            } catch (const std::exception&) {
                fail(ErrorCode::ParseError, "bad number '" + tmp + "' in model spec");
            }
            if (used != tmp.size())
                fail(ErrorCode::ParseError, "bad number '" + tmp + "' in model spec");
            out.push_back(v);
            if (comma == std::string_view::npos)
                break;
            pos = comma + 1;
        }
        return out;
    };

    const std::size_t colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    ModelSpec spec;
    if (kind == "free" || kind == "white") {
        if (!args.empty())
            fail(ErrorCode::ParseError, "free takes no parameters");
        spec = ModelSpec::free();
    } else if (kind == "ar1") {
        const auto v = parse_list(args);
        if (v.size() != 1)
            fail(ErrorCode::ParseError, "ar1 takes one parameter");
        spec = ModelSpec::ar1(v[0]);
    } else if (kind == "ma1" || kind == "ma") {
        auto v = parse_list(args);
        if (v.empty() || (kind == "ma1" && v.size() != 1))
            fail(ErrorCode::ParseError, "ma needs theta coefficients");
        spec = ModelSpec::ma_q(std::move(v));
    } else if (kind == "arma") {
        const std::size_t slash = args.find('/');
        if (slash == std::string_view::npos)
            fail(ErrorCode::ParseError, "arma expects 'phi,.../theta,...'");
        spec = ModelSpec::arma(parse_list(args.substr(0, slash)), parse_list(args.substr(slash + 1)));
    } else if (kind == "farima") {
        const auto v = parse_list(args);
        if (v.size() != 1)
            fail(ErrorCode::ParseError, "farima takes d");
        spec = ModelSpec::farima(v[0]);
    } else if (kind == "bloomfield") {
        auto v = parse_list(args);
        if (v.empty())
            fail(ErrorCode::ParseError, "bloomfield needs L_0,...");
        spec = ModelSpec::bloomfield(std::move(v));
    } else {
        fail(ErrorCode::ParseError, "unknown model kind '" + std::string(kind) + "'");
    }
    validate(spec);
    return spec;
}

// --- moving-average filters ------------------------------------------------------

namespace detail {

/// psi weights of theta(z)/phi(z) for k = 0..K.
inline std::vector<double> arma_psi(std::span<const double> phi, std::span<const double> theta, std::size_t K)
{
    std::vector<double> psi(K + 1, 0.0);
    psi[0] = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        double s = k <= theta.size() ? theta[k - 1] : 0.0;
        for (std::size_t j = 1; j <= phi.size() && j <= k; ++j)
            s += phi[j - 1] * psi[k - j];
        psi[k] = s;
    }
    return psi;
}

/// Length after which the psi weights are negligible (|psi| < 1e-18 max over
/// a run of p + 1 consecutive lags past q).
inline std::size_t arma_psi_length(std::span<const double> phi, std::span<const double> theta)
{
    constexpr std::size_t kCap = 2'000'000;
    if (phi.empty())
        return theta.size();
    std::vector<double> psi{1.0};
    double peak = 1.0;
    std::size_t quiet = 0;
    for (std::size_t k = 1; k < kCap; ++k) {
        double s = k <= theta.size() ? theta[k - 1] : 0.0;
        for (std::size_t j = 1; j <= phi.size() && j <= k; ++j)
            s += phi[j - 1] * psi[k - j];
        psi.push_back(s);
        peak = std::max(peak, std::abs(s));
        quiet = std::abs(s) < 1e-18 * peak ? quiet + 1 : 0;
        if (k > theta.size() && quiet > phi.size())
            return k;
    }
    fail(ErrorCode::InvalidModel, "ARMA impulse response does not decay (root too close to the unit circle)");
}

inline std::vector<double> ma_acov(std::span<const double> psi, double scale, std::size_t N)
{
    std::vector<double> g(N + 1, 0.0);
    for (std::size_t n = 0; n <= N && n < psi.size(); ++n) {
        double s = 0.0;
        for (std::size_t k = 0; k + n < psi.size(); ++k)
            s += psi[k] * psi[k + n];
        g[n] = scale * s;
    }
    return g;
}

inline std::vector<double> with_leading_one(std::span<const double> theta)
{
    std::vector<double> v{1.0};
    v.insert(v.end(), theta.begin(), theta.end());
    return v;
}

inline std::size_t bloomfield_grid(std::size_t N)
{
    std::size_t M = kDefaultGridSize;
    while (M < 4 * (N + 1))
        M *= 2;
    return M;
}

inline double bloomfield_density(std::span<const double> L, double theta)
{
    double e = L[0];
    for (std::size_t k = 1; k < L.size(); ++k)
        e += 2.0 * L[k] * std::cos(static_cast<double>(k) * theta);
    return std::exp(e);
}

} // namespace detail

/// Coefficients of a moving-average filter driven by unit-variance innovations
/// whose output has the model's autocovariance, k = 0..K. Coincides with the
/// Wold/Szego coefficients m for stationary invertible models.
inline CoeffSeries filter_coefficients(const ModelSpec& s, std::size_t K)
{
    validate(s);
    const double sigma = std::sqrt(s.innovation_var);
    CVec m(K + 1);
    switch (s.kind) {
    case ModelKind::Free: m[0] = sigma; break;
    case ModelKind::AR1:
    case ModelKind::MA:
    case ModelKind::ARMA: {
        const auto psi = detail::arma_psi(s.ar, s.ma, K);
        for (std::size_t k = 0; k <= K; ++k)
            m[k] = sigma * psi[k];
        break;
    }
    case ModelKind::Farima: {
        double c = 1.0;
        m[0] = sigma;
        for (std::size_t n = 1; n <= K; ++n) {
            c *= (static_cast<double>(n) - 1.0 + s.d) / static_cast<double>(n);
            m[n] = sigma * c;
        }
        break;
    }
    case ModelKind::Bloomfield: {
        CVec L(s.cepstrum.begin(), s.cepstrum.end());
        return series_exp(CoeffSeries(std::move(L), Role::Cepstrum), K);
    }
    }
    return CoeffSeries(std::move(m), Role::MA);
}

/// Exact autocovariance gamma_0..gamma_N.
inline AutocovSeq exact_acov(const ModelSpec& s, std::size_t N)
{
    validate(s);
    const double s2 = s.innovation_var;
    std::vector<double> g(N + 1, 0.0);
    switch (s.kind) {
    case ModelKind::Free: g[0] = s2; break;
    case ModelKind::AR1: {
        const double phi = s.ar[0];
        double p = 1.0;
        for (std::size_t n = 0; n <= N; ++n, p *= phi)
            g[n] = s2 * p / (1.0 - phi * phi);
        break;
    }
    case ModelKind::MA: g = detail::ma_acov(detail::with_leading_one(s.ma), s2, N); break;
    case ModelKind::ARMA: {
        const std::size_t K = detail::arma_psi_length(s.ar, s.ma) + N;
        g = detail::ma_acov(detail::arma_psi(s.ar, s.ma, K), s2, N);
        break;
    }
    case ModelKind::Farima: {
        // gamma_0 = Gamma(1-2d)/Gamma(1-d)^2, then the ratio recurrence.
        const double d = s.d;
        g[0] = s2 * std::tgamma(1.0 - 2.0 * d) / std::pow(std::tgamma(1.0 - d), 2);
        for (std::size_t n = 1; n <= N; ++n) {
            const double dn = static_cast<double>(n);
            g[n] = g[n - 1] * (dn - 1.0 + d) / (dn - d);
        }
        break;
    }
    case ModelKind::Bloomfield: {
        const std::size_t M = detail::bloomfield_grid(N);
        const auto grid = grid_from_density(
            [&](double th) { return detail::bloomfield_density(s.cepstrum, th); }, M);
        const CVec c = grid_fourier(grid, grid.values(), N);
        for (std::size_t n = 0; n <= N; ++n)
            g[n] = c[n].real();
        break;
    }
    }
    return AutocovSeq(std::span<const double>(g));
}

/// Closed-form PACF where one is known: free, AR(1), MA(1), FARIMA(0,d,0).
inline VerblunskySeq exact_pacf(const ModelSpec& s, std::size_t N)
{
    validate(s);
    std::vector<double> a(N, 0.0);
    switch (s.kind) {
    case ModelKind::Free: break;
    case ModelKind::AR1:
        if (N > 0)
            a[0] = s.ar[0];
        break;
    case ModelKind::MA: {
        if (s.ma.size() != 1)
            fail(ErrorCode::NoClosedForm, "closed-form PACF only for MA(1)");
        const double th = s.ma[0];
        for (std::size_t n = 1; n <= N; ++n) {
            const double sign_pow = std::pow(-th, static_cast<double>(n));
            if (std::abs(std::abs(th) - 1.0) < 1e-15)
                a[n - 1] = -sign_pow / static_cast<double>(n + 1);
            else
                a[n - 1] = -sign_pow * (1.0 - th * th) / (1.0 - std::pow(th, 2.0 * static_cast<double>(n + 1)));
        }
        break;
    }
    case ModelKind::Farima:
        for (std::size_t n = 1; n <= N; ++n)
            a[n - 1] = s.d / (static_cast<double>(n) - s.d);
        break;
    default: fail(ErrorCode::NoClosedForm, "no closed-form PACF for " + s.describe());
    }
    return VerblunskySeq(std::span<const double>(a));
}

/// Closed-form cepstrum L_0..L_N. FARIMA is routed through a grid instead.
inline CoeffSeries exact_cepstrum(const ModelSpec& s, std::size_t N)
{
    validate(s);
    CVec L(N + 1);
    L[0] = std::log(s.innovation_var);
    switch (s.kind) {
    case ModelKind::Free: break;
    case ModelKind::AR1: {
        double p = 1.0;
        for (std::size_t n = 1; n <= N; ++n) {
            p *= s.ar[0];
            L[n] = p / static_cast<double>(n);
        }
        break;
    }
    case ModelKind::MA:
    case ModelKind::ARMA: {
        if (s.kind == ModelKind::MA && s.ma.size() == 1 && std::abs(s.ma[0]) > 1.0) {
            // Same spectrum as theta' = 1/theta with variance scaled by theta^2.
            const double th = 1.0 / s.ma[0];
            L[0] = std::log(s.innovation_var / (th * th));
            double p = 1.0;
            for (std::size_t n = 1; n <= N; ++n) {
                p *= -th;
                L[n] = -p / static_cast<double>(n);
            }
            break;
        }
        const bool unit_ma1 = s.kind == ModelKind::MA && s.ma.size() == 1;
        if (!unit_ma1 && !ma_invertible(s.ma))
            fail(ErrorCode::NoClosedForm, "cepstrum closed form needs an invertible MA polynomial");
        const auto theta = detail::with_leading_one(s.ma);
        std::vector<double> phi{1.0};
        for (double c : s.ar)
            phi.push_back(-c);
        const CVec lt = series_log(to_complex(theta), N);
        const CVec lp = series_log(to_complex(phi), N);
        for (std::size_t n = 1; n <= N; ++n)
            L[n] = lt[n] - lp[n];
        break;
    }
    case ModelKind::Farima: fail(ErrorCode::NoClosedForm, "FARIMA cepstrum is computed on a grid");
    case ModelKind::Bloomfield:
        L[0] = 0.0;
        for (std::size_t n = 0; n <= N && n < s.cepstrum.size(); ++n)
            L[n] = s.cepstrum[n];
        break;
    }
    return CoeffSeries(std::move(L), Role::Cepstrum);
}

/// Spectral density w(theta) in closed form.
inline double exact_density(const ModelSpec& s, double theta)
{
    validate(s);
    const cplx z = std::polar(1.0, theta);
    auto poly = [&](std::span<const double> c, double sign) {
        cplx acc = 1.0, p = 1.0;
        for (double x : c) {
            p *= z;
            acc += sign * x * p;
        }
        return acc;
    };
    switch (s.kind) {
    case ModelKind::Free: return s.innovation_var;
    case ModelKind::AR1:
    case ModelKind::MA:
    case ModelKind::ARMA: return s.innovation_var * std::norm(poly(s.ma, 1.0)) / std::norm(poly(s.ar, -1.0));
    case ModelKind::Farima: return s.innovation_var * std::pow(std::norm(1.0 - z), -s.d);
    case ModelKind::Bloomfield: return detail::bloomfield_density(s.cepstrum, theta);
    }
    return 0.0;
}

/// Asymptotic decay laws |a_n| ~ C n^{-exponent} of the model's sequences,
/// or geometric (including finite support).
struct TailLaw {
    bool geometric = true;
    double exponent = std::numeric_limits<double>::infinity();

    static TailLaw power(double p) { return {false, p}; }
};

struct KnownTails {
    TailLaw alpha, gamma, ar, cepstrum;
};

inline std::optional<KnownTails> known_tails(const ModelSpec& s)
{
    validate(s);
    switch (s.kind) {
    case ModelKind::Free:
    case ModelKind::AR1:
    case ModelKind::Bloomfield: return KnownTails{};
    case ModelKind::MA:
    case ModelKind::ARMA:
        if (s.ma.size() == 1 && std::abs(std::abs(s.ma[0]) - 1.0) < 1e-15) {
            // Unit root: alpha ~ 1/n, L ~ 1/n, r does not decay.
            return KnownTails{TailLaw::power(1.0), TailLaw{}, TailLaw::power(0.0), TailLaw::power(1.0)};
        }
        if (ma_invertible(s.ma) || (s.ma.size() == 1 && std::abs(s.ma[0]) > 1.0))
            return KnownTails{};
        return std::nullopt;
    case ModelKind::Farima:
        return KnownTails{TailLaw::power(1.0), TailLaw::power(1.0 - 2.0 * s.d), TailLaw::power(1.0 + s.d),
                          TailLaw::power(1.0)};
    }
    return std::nullopt;
}

// --- simulation and estimation ----------------------------------------------------

inline constexpr std::string_view kGeneratorName = "mt19937_64 seeded with the user seed; Box-Muller normals from 53-bit uniforms";

/// Deterministic standard normal stream; bit-identical across platforms for a
/// given seed because both the engine and the transform are fully specified.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double operator()()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do
            u1 = uniform();
        while (u1 == 0.0);
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(2.0 * kPi * u2);
        has_spare_ = true;
        return radius * std::cos(2.0 * kPi * u2);
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Gaussian path of length T from the truncated filter sum_{k<=K} m_k xi_{t-k}.
/// K must leave tail energy below 1e-6 of gamma_0.
inline std::vector<double> simulate_path(const ModelSpec& s, std::size_t T, std::uint64_t seed, std::size_t K)
{
    if (T < 1)
        fail(ErrorCode::InvalidArgument, "path length must be >= 1");
    const auto m = filter_coefficients(s, K);
    const double g0 = exact_acov(s, 0).gamma0();
    double energy = 0.0;
    for (const auto& c : m.values())
        energy += std::norm(c);
    if (g0 - energy >= 1e-6 * g0)
        fail(ErrorCode::TruncationTooShort,
             "filter length " + std::to_string(K) + " leaves tail energy " + std::to_string(g0 - energy));

    NormalStream normal(seed);
    std::vector<double> xi(T + K);
    for (auto& x : xi)
        x = normal();
    std::vector<double> out(T);
    for (std::size_t t = 0; t < T; ++t) {
        double s_t = 0.0;
        for (std::size_t k = 0; k <= K; ++k)
            s_t += m[k].real() * xi[t + K - k];
        out[t] = s_t;
    }
    return out;
}

/// Exact Gaussian path by circulant embedding of gamma_0..gamma_T (Davies-Harte).
/// For long memory, where no practical filter length meets the tail-energy
/// criterion. Fails with NotPositiveDefinite if the embedding has a negative
/// eigenvalue.
inline std::vector<double> simulate_path_circulant(const ModelSpec& s, std::size_t T, std::uint64_t seed)
{
    if (T < 1)
        fail(ErrorCode::InvalidArgument, "path length must be >= 1");
    const auto g = exact_acov(s, T);
    const std::size_t m = 2 * T;
    CVec c(m);
    for (std::size_t k = 0; k <= T; ++k)
        c[k] = g[k];
    for (std::size_t k = T + 1; k < m; ++k)
        c[k] = g[m - k];
    const CVec lambda = fft::transform(c, fft::Direction::Forward);
    double top = 0.0;
    for (const auto& l : lambda)
        top = std::max(top, l.real());
    NormalStream normal(seed);
    CVec z(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double l = lambda[k].real();
        if (l < -1e-10 * top)
            fail(ErrorCode::NotPositiveDefinite, "circulant embedding has a negative eigenvalue");
        const double re = normal();
        const double im = normal();
        z[k] = std::sqrt(std::max(l, 0.0) / static_cast<double>(m)) * cplx(re, im);
    }
    const CVec x = fft::transform(z, fft::Direction::Backward);
    std::vector<double> out(T);
    for (std::size_t t = 0; t < T; ++t)
        out[t] = x[t].real();
    return out;
}

/// Smallest filter length meeting the tail-energy criterion, up to `cap`.
inline std::size_t filter_length(const ModelSpec& s, std::size_t cap = 1u << 20)
{
    const double g0 = exact_acov(s, 0).gamma0();
    std::size_t K = 16;
    while (true) {
        const auto m = filter_coefficients(s, K);
        double energy = 0.0;
        for (const auto& c : m.values())
            energy += std::norm(c);
        if (g0 - energy < 1e-6 * g0)
            break;
        if (K >= cap)
            fail(ErrorCode::TruncationTooShort, "filter tail energy does not fall below 1e-6 within the cap");
        K *= 2;
    }
    return K;
}

struct SampleAutocov {
    std::vector<double> gamma;
    bool degenerate = false; ///< gamma_0 == 0: not a valid autocovariance

    AutocovSeq acov() const
    {
        if (degenerate)
            fail(ErrorCode::NotPositiveDefinite, "degenerate sample autocovariance (zero series)");
        return AutocovSeq(std::span<const double>(gamma));
    }
};

/// Biased estimator gamma^_n = (1/T) sum_t x_{t+n} x_t, n = 0..N.
inline SampleAutocov sample_acov(std::span<const double> x, std::size_t N)
{
    const std::size_t T = x.size();
    if (T <= N)
        fail(ErrorCode::InsufficientData, "series shorter than requested lag order");
    SampleAutocov out;
    out.gamma.assign(N + 1, 0.0);
    for (std::size_t n = 0; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t t = 0; t + n < T; ++t)
            s += x[t + n] * x[t];
        out.gamma[n] = s / static_cast<double>(T);
    }
    out.degenerate = !(out.gamma[0] > 0.0);
    return out;
}

} // namespace szegolab
