#pragma once

// Orchestration behind the szego-lab subcommands. Each run_* function writes
// its document to `out` and returns the process exit code; argument parsing
// and the error-to-exit-code mapping live in szego_lab.cpp.

#include <szegolab/szegolab.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace szegolab::app {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "szego-lab";
inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::size_t kMaxOrder = 1u << 14;
inline constexpr std::size_t kMaxGrid = 1u << 22;
inline constexpr std::size_t kMaxHankel = 1024;
inline constexpr std::size_t kSimulationFilterCap = 1u << 20;

enum class Exit { Pass = 0, VerificationFailed = 1, InputError = 2, NumericError = 3 };

struct Options {
    std::optional<std::string> model;
    std::optional<std::string> acov_path;
    std::optional<std::string> series_path;
    std::size_t order = 64;
    std::size_t grid = kDefaultGridSize;
    Summation summation = Summation::Dirichlet;
    std::string theorem;
    std::string orders;
    std::optional<double> tol;
    std::size_t hankel = 256;
    std::size_t horizon = 20;
    std::uint64_t seed = 1;
    std::size_t length = 1000;
    std::vector<std::size_t> sizes;
    std::size_t bench_cap = 4096;
    std::optional<std::string> csv_dir;
};

// --- formatting -------------------------------------------------------------------------

/// 17 significant digits: round-trips every double.
inline std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline bool all_real(std::span<const cplx> xs)
{
    return std::all_of(xs.begin(), xs.end(), [](const cplx& c) { return c.imag() == 0.0; });
}

/// Real arrays stay plain; complex ones become [re, im] pairs.
inline json to_json(std::span<const cplx> xs)
{
    json a = json::array();
    const bool real = all_real(xs);
    for (const auto& c : xs) {
        if (real)
            a.push_back(c.real());
        else
            a.push_back(json::array({c.real(), c.imag()}));
    }
    return a;
}

inline json to_json(std::span<const double> xs) { return json(std::vector<double>(xs.begin(), xs.end())); }

inline json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline void write_csv_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows)
{
    std::ofstream f(path);
    if (!f)
        fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        f << (i ? "," : "") << header[i];
    f << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            f << (i ? "," : "") << r[i];
        f << '\n';
    }
}

inline void write_sequence_csv(const std::filesystem::path& dir, const std::string& name, std::span<const cplx> xs,
                               std::size_t first_index)
{
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i)
        rows.push_back({std::to_string(i + first_index), fmt(xs[i].real()), fmt(xs[i].imag())});
    write_csv_file(dir / (name + ".csv"), {"n", "re", "im"}, rows);
}

// --- input ------------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::optional<double> parse_number(const std::string& tok)
{
    const std::string t = trim(tok);
    if (t.empty())
        return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size())
            return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, sep))
        out.push_back(tok);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

inline std::ifstream open_input(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        fail(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
    return f;
}

} // namespace detail

/// Two columns (lag, value) or three (lag, re, im); lags 0, 1, 2, ... in order.
/// Blank lines and '#' comments are skipped, as is one non-numeric header row.
inline AutocovSeq read_acov_csv(std::istream& in, const std::string& name = "acov")
{
    CVec gamma;
    std::string line;
    std::size_t lineno = 0, width = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto cols = detail::split(t, ',');
        const auto lag = detail::parse_number(cols[0]);
        if (!lag && !seen_data) {
            seen_data = true; // header
            continue;
        }
        seen_data = true;
        const auto where = name + ":" + std::to_string(lineno);
        if (cols.size() != 2 && cols.size() != 3)
            fail(ErrorCode::ParseError, where + ": expected 2 or 3 columns");
        if (width == 0)
            width = cols.size();
        else if (cols.size() != width)
            fail(ErrorCode::ParseError, where + ": column count changed");
        if (!lag || *lag != static_cast<double>(gamma.size()))
            fail(ErrorCode::ParseError, where + ": lags must run 0, 1, 2, ... without gaps");
        const auto re = detail::parse_number(cols[1]);
        const auto im = width == 3 ? detail::parse_number(cols[2]) : std::optional<double>(0.0);
        if (!re || !im)
            fail(ErrorCode::ParseError, where + ": bad number");
        gamma.emplace_back(*re, *im);
    }
    if (gamma.empty())
        fail(ErrorCode::ParseError, name + ": no autocovariance rows");
    try {
        return AutocovSeq(std::move(gamma));
    } catch (const Error& e) {
        fail(ErrorCode::InvalidArgument, name + ": " + e.what());
    }
}

/// One value per line; '#' comments and blank lines skipped.
inline std::vector<double> read_series(std::istream& in, const std::string& name = "series")
{
    std::vector<double> x;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto v = detail::parse_number(t);
        if (!v || !std::isfinite(*v))
            fail(ErrorCode::ParseError, name + ":" + std::to_string(lineno) + ": bad value");
        x.push_back(*v);
    }
    if (x.empty())
        fail(ErrorCode::ParseError, name + ": empty series");
    return x;
}

/// "1..32", "64", "1,2,4", "1..8,16,32".
inline std::vector<std::size_t> parse_orders(std::string_view text)
{
    std::vector<std::size_t> out;
    for (const auto& raw : detail::split(std::string(text), ',')) {
        const std::string item = detail::trim(raw);
        const auto dots = item.find("..");
        auto num = [&](const std::string& s) {
            const auto v = detail::parse_number(s);
            if (!v || *v < 1 || *v != std::floor(*v) || *v > static_cast<double>(kMaxOrder))
                fail(ErrorCode::ParseError, "bad order '" + s + "' in '" + std::string(text) + "'");
            return static_cast<std::size_t>(*v);
        };
        if (dots == std::string::npos) {
            out.push_back(num(item));
        } else {
            const std::size_t lo = num(item.substr(0, dots)), hi = num(item.substr(dots + 2));
            if (hi < lo)
                fail(ErrorCode::ParseError, "empty order range '" + item + "'");
            for (std::size_t n = lo; n <= hi; ++n)
                out.push_back(n);
        }
    }
    if (out.empty())
        fail(ErrorCode::ParseError, "no orders given");
    return out;
}

struct Loaded {
    AutocovSeq gamma{1.0};
    std::optional<ModelSpec> model;
    std::string kind; ///< model, acov, series
    std::string label;
    std::size_t series_length = 0;
};

/// Resolves the single input source to an autocovariance of order `want`
/// (files may cap it at what they contain).
inline Loaded load_input(const Options& o, std::size_t want)
{
    const int given = int(o.model.has_value()) + int(o.acov_path.has_value()) + int(o.series_path.has_value());
    if (given != 1)
        fail(ErrorCode::InvalidArgument, "give exactly one of --model, --acov, --series");
    if (want > kMaxOrder)
        fail(ErrorCode::InvalidArgument, "order above cap " + std::to_string(kMaxOrder));
    Loaded in;
    if (o.model) {
        in.model = parse_model_spec(*o.model);
        in.kind = "model";
        in.label = *o.model;
        in.gamma = exact_acov(*in.model, want);
    } else if (o.acov_path) {
        auto f = detail::open_input(*o.acov_path);
        const auto g = read_acov_csv(f, *o.acov_path);
        in.kind = "acov";
        in.label = *o.acov_path;
        in.gamma = g.order() > want ? g.truncated(want) : g;
    } else {
        auto f = detail::open_input(*o.series_path);
        const auto x = read_series(f, *o.series_path);
        if (x.size() < 2)
            fail(ErrorCode::InsufficientData, "series needs at least two values");
        in.kind = "series";
        in.label = *o.series_path;
        in.series_length = x.size();
        in.gamma = sample_acov(x, std::min(want, x.size() - 1)).acov();
    }
    return in;
}

inline json describe_input(const Loaded& in)
{
    json j{{"kind", in.kind}};
    if (in.model)
        j["model"] = in.label;
    else
        j["path"] = in.label;
    if (in.kind == "series")
        j["series_length"] = in.series_length;
    return j;
}

inline void check_grid(std::size_t M)
{
    if (!is_power_of_two(M) || M < 8 || M > kMaxGrid)
        fail(ErrorCode::InvalidArgument, "grid size must be a power of two in [8, " + std::to_string(kMaxGrid) + "]");
}

// --- spectral side with fallbacks -------------------------------------------------------------

struct Spectral {
    std::optional<SpectralGrid> grid;
    std::optional<CoeffSeries> L, m, r, b;
    std::string source;
    std::vector<std::string> notes;

    bool ok() const { return L.has_value(); }
    double log_g() const { return (*L)[0].real(); }
};

/// gamma -> grid -> L first; for zoo models, falls back to the closed-form
/// cepstrum and then to a half-cell-shifted grid of the closed-form density
/// when the truncated sum is not log-admissible.
inline Spectral resolve_spectral(const Loaded& in, std::size_t K, std::size_t M, Summation s)
{
    Spectral sp;
    K = std::min(K, M / 2 - 1);
    const bool real = all_real(in.gamma.values());
    auto finish = [&](CoeffSeries L) {
        // A real autocovariance has an even real density and a real cepstrum.
        if (real) {
            CVec c(L.values().begin(), L.values().end());
            for (auto& x : c)
                x = x.real();
            L = CoeffSeries(std::move(c), Role::Cepstrum);
        }
        sp.m = ma_coefficients(L, K);
        sp.r = ar_coefficients(*sp.m, K);
        sp.b = phase_coefficients(*sp.m, *sp.r, K);
        sp.L = std::move(L);
    };
    try {
        sp.grid = grid_from_acov(in.gamma, M, s);
        finish(cepstrum(*sp.grid, K));
        sp.source = "autocovariance grid";
        return sp;
    } catch (const Error& e) {
        if (e.is_input_error())
            throw;
        sp.notes.push_back(std::string(e.what()));
    }
    if (!in.model)
        return sp;
    try {
        finish(exact_cepstrum(*in.model, K));
        sp.source = "closed-form cepstrum";
        return sp;
    } catch (const Error& e) {
        sp.notes.push_back(std::string(e.what()));
    }
    try {
        sp.grid = grid_from_density([&](double th) { return exact_density(*in.model, th); }, M, 0.5);
        finish(cepstrum(*sp.grid, K));
        sp.source = "closed-form density grid (half-cell offset)";
    } catch (const Error& e) {
        sp.notes.push_back(std::string(e.what()));
    }
    return sp;
}

// --- classification ------------------------------------------------------------------------

inline json evidence_json(const TailEvidence& ev)
{
    json j{{"source", ev.from_model ? "closed form" : "tail fit"}, {"note", ev.note}};
    if (ev.from_model) {
        j["law"] = ev.law.geometric ? "geometric" : "power";
        if (!ev.law.geometric)
            j["exponent"] = ev.law.exponent;
    } else if (ev.fit) {
        j["regime"] = to_string(ev.fit->regime);
        j["window"] = {ev.fit->lo, ev.fit->hi};
        j["points"] = ev.fit->points;
        j["exponent"] = finite_or_null(ev.fit->exponent);
        j["rate"] = ev.fit->rate;
        j["residual_power"] = ev.fit->residual_power;
        j["residual_exponential"] = ev.fit->residual_exponential;
    }
    return j;
}

inline json norms_json(const NormReport& n)
{
    auto tri = [](const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); };
    return {{"l1", n.l1},
            {"l2", n.l2},
            {"h_half_sq", n.h_half_sq},
            {"diverging", {{"l1", tri(n.diverging.l1)}, {"l2", tri(n.diverging.l2)}, {"h_half", tri(n.diverging.h_half)}}}};
}

inline json flags_json(const ConditionFlags& f)
{
    const auto& ev = f.evidence;
    json e{{"alpha", evidence_json(ev.alpha)}, {"gamma", evidence_json(ev.gamma)}};
    if (ev.ar)
        e["ar"] = evidence_json(*ev.ar);
    e["alpha_norms"] = norms_json(ev.alpha_norms);
    e["gamma_norms"] = norms_json(ev.gamma_norms);
    if (ev.inv_density_mean) {
        e["inverse_density_mean"] = {{"grid", ev.grid_size},
                                     {"value", finite_or_null(*ev.inv_density_mean)},
                                     {"value_doubled_grid", finite_or_null(*ev.inv_density_mean_doubled)}};
    }
    if (ev.a2)
        e["a2"] = {{"grid", ev.grid_size}, {"sup", *ev.a2}, {"sup_doubled_grid", *ev.a2_doubled}};
    e["minimal_note"] = ev.minimal_note;
    return {{"sz", to_string(f.sz)},         {"baxter", to_string(f.baxter)}, {"ssz", to_string(f.ssz)},
            {"minimal", to_string(f.minimal)}, {"lrd_di", to_string(f.lrd_di)}, {"lrd_li", to_string(f.lrd_li)},
            {"implications_hold", f.implications_hold()}, {"evidence", e}};
}

inline ConditionFlags classify_loaded(const Loaded& in, const VerblunskySeq& alpha, const Spectral& sp,
                                      std::size_t M, Summation s)
{
    if (in.model)
        return classify_model(*in.model, in.gamma.order(), M);
    ClassifyInput ci;
    ci.alpha = alpha;
    ci.gamma = in.gamma;
    if (sp.r)
        ci.ar = *sp.r;
    if (sp.grid) {
        try {
            ci.grid = *sp.grid;
            ci.grid_doubled = grid_from_acov(in.gamma, 2 * M, s);
        } catch (const Error&) {
            ci.grid.reset();
            ci.grid_doubled.reset();
        }
    }
    return classify_conditions(ci);
}

inline json canonical_table(const AutocovSeq& g)
{
    json rows = json::array();
    for (std::size_t n = 1; n <= kMaxCanonicalBlock && 2 * n - 1 <= g.order(); n *= 2)
        rows.push_back({{"n", n}, {"rho", canonical_correlation(g, n)}});
    return rows;
}

// --- analyze ---------------------------------------------------------------------------------

inline json header(const Loaded& in, const Options& o, std::size_t N)
{
    return {{"tool", {{"name", kToolName}, {"version", kVersion}}},
            {"input", describe_input(in)},
            {"settings", {{"order", N}, {"grid", o.grid}, {"summation", to_string(o.summation)}}}};
}

inline int run_analyze(const Options& o, std::ostream& out)
{
    check_grid(o.grid);
    const Loaded in = load_input(o, o.order);
    const std::size_t N = in.gamma.order();
    if (o.grid < 4 * N)
        fail(ErrorCode::InvalidArgument, "grid must be at least 4x the order");
    const auto st = levinson_scan(in.gamma, N);
    const Spectral sp = resolve_spectral(in, N, o.grid, o.summation);

    json rep = header(in, o, N);
    rep["gamma"] = to_json(in.gamma.values());
    rep["alpha"] = to_json(st.alpha.values());
    rep["v"] = to_json(st.v);

    json spec{{"source", sp.ok() ? json(sp.source) : json(nullptr)}, {"notes", sp.notes}};
    rep["spectral"] = spec;
    if (sp.ok()) {
        rep["cepstrum"] = to_json(sp.L->values());
        rep["ma"] = to_json(sp.m->values());
        rep["ar"] = to_json(sp.r->values());
        rep["phase"] = to_json(sp.b->values());
    }
    const double G = sp.ok() ? std::exp(sp.log_g()) : std::nan("");
    rep["G"] = finite_or_null(G);
    double prod = in.gamma.gamma0();
    for (const auto& a : st.alpha.values())
        prod *= 1.0 - std::norm(a);
    rep["sigma2"] = {{"product", prod}, {"geometric_mean", finite_or_null(G)}, {"v_N", st.v.back()}};
    rep["sigma"] = sp.ok() ? json((*sp.m)[0].real()) : json(nullptr);
    rep["E"] = {{"cepstral", sp.ok() ? json(e_cepstral(*sp.L, N)) : json(nullptr)},
                {"product", e_product(st.alpha, N)}};
    if (in.model && in.model->kind == ModelKind::Farima)
        rep["hurst"] = hurst_from_d(in.model->d);

    rep["flags"] = flags_json(classify_loaded(in, st.alpha, sp, o.grid, o.summation));

    // Convergence tables.
    json det = json::array();
    double logdet = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        logdet += std::log(st.v[n - 1]);
        json row{{"n", n}, {"log_det", logdet}, {"det", std::exp(logdet)}, {"weak", logdet / double(n)}};
        row["ratio"] = sp.ok() ? json(std::exp(logdet - double(n) * sp.log_g())) : json(nullptr);
        det.push_back(row);
    }
    json strong = json::array();
    for (std::size_t n = 1; n <= N; n *= 2)
        strong.push_back({{"N", n},
                          {"e_cepstral", sp.ok() ? json(e_cepstral(*sp.L, n)) : json(nullptr)},
                          {"e_product", e_product(st.alpha, n)}});
    rep["tables"] = {{"det", det}, {"strong_constant", strong}, {"canonical_correlation", canonical_table(in.gamma)}};

    if (o.csv_dir) {
        const std::filesystem::path dir(*o.csv_dir);
        std::filesystem::create_directories(dir);
        write_sequence_csv(dir, "gamma", in.gamma.values(), 0);
        write_sequence_csv(dir, "alpha", st.alpha.values(), 1);
        write_sequence_csv(dir, "v", to_complex(st.v), 0);
        if (sp.ok()) {
            write_sequence_csv(dir, "cepstrum", sp.L->values(), 0);
            write_sequence_csv(dir, "ma", sp.m->values(), 0);
            write_sequence_csv(dir, "ar", sp.r->values(), 0);
            write_sequence_csv(dir, "phase", sp.b->values(), 0);
        }
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : det)
            rows.push_back({std::to_string(r["n"].get<std::size_t>()), fmt(r["log_det"].get<double>()),
                            fmt(r["det"].get<double>()), r["ratio"].is_null() ? "" : fmt(r["ratio"].get<double>()),
                            fmt(r["weak"].get<double>())});
        write_csv_file(dir / "det.csv", {"n", "log_det", "det", "ratio", "weak"}, rows);
    }
    out << rep.dump(2) << '\n';
    return int(Exit::Pass);
}

// --- classify --------------------------------------------------------------------------------

inline int run_classify(const Options& o, std::ostream& out)
{
    check_grid(o.grid);
    const Loaded in = load_input(o, o.order);
    const std::size_t N = in.gamma.order();
    const auto st = levinson_scan(in.gamma, N);
    const Spectral sp = resolve_spectral(in, N, o.grid, o.summation);
    json rep = header(in, o, N);
    rep["flags"] = flags_json(classify_loaded(in, st.alpha, sp, o.grid, o.summation));
    if (in.model && in.model->kind == ModelKind::Farima)
        rep["hurst"] = hurst_from_d(in.model->d);
    rep["canonical_correlation"] = canonical_table(in.gamma);
    out << rep.dump(2) << '\n';
    return int(Exit::Pass);
}

// --- verify ----------------------------------------------------------------------------------

inline double default_tol(std::string_view theorem)
{
    if (theorem == "weak")
        return 1e-2;
    if (theorem == "strong")
        return 1e-3;
    if (theorem == "bo")
        return 1e-4;
    if (theorem == "gibbs")
        return 1e-8;
    return 1e-6; // kolmogorov
}

namespace detail {

/// Convergence checks judge the tail: the last (up to) three rows.
inline bool tail_passes(const json& rows)
{
    const std::size_t k = std::min<std::size_t>(3, rows.size());
    for (std::size_t i = rows.size() - k; i < rows.size(); ++i)
        if (!rows[i]["pass"].get<bool>())
            return false;
    return true;
}

inline json row(std::size_t n, double value, double target, double tol)
{
    const double err = std::abs(value - target);
    return {{"n", n}, {"value", value}, {"target", target}, {"error", err}, {"pass", err <= tol}};
}

} // namespace detail

inline int run_verify(const Options& o, std::ostream& out)
{
    static const std::vector<std::string> kTheorems{"weak", "strong", "bo", "gibbs", "kolmogorov"};
    if (std::find(kTheorems.begin(), kTheorems.end(), o.theorem) == kTheorems.end())
        fail(ErrorCode::InvalidArgument, "theorem must be one of weak, strong, bo, gibbs, kolmogorov");
    check_grid(o.grid);
    const double tol = o.tol.value_or(default_tol(o.theorem));
    if (!(tol > 0.0))
        fail(ErrorCode::InvalidArgument, "tolerance must be positive");

    std::vector<std::size_t> orders;
    if (!o.orders.empty())
        orders = parse_orders(o.orders);
    const std::size_t top = orders.empty() ? 0 : *std::max_element(orders.begin(), orders.end());
    const Loaded in = load_input(o, std::max(o.order, top));
    const std::size_t N = in.gamma.order();
    if (orders.empty()) {
        if (o.theorem == "bo")
            for (std::size_t n = 1; n <= std::min<std::size_t>(16, N + 1); ++n)
                orders.push_back(n);
        else if (o.theorem == "kolmogorov")
            orders.push_back(N);
        else
            for (std::size_t n = 1; n <= N; ++n)
                orders.push_back(n);
    }
    if (o.grid < 4 * N)
        fail(ErrorCode::InvalidArgument, "grid must be at least 4x the order");

    json rep = header(in, o, N);
    rep["theorem"] = o.theorem;
    rep["tol"] = tol;
    rep["orders"] = orders;
    json rows = json::array();
    bool pass = true;

    const auto st = levinson_scan(in.gamma, N);
    std::vector<double> logdets(N + 2, 0.0);
    for (std::size_t n = 1; n <= N + 1; ++n)
        logdets[n] = logdets[n - 1] + std::log(st.v[n - 1]);
    auto need_det = [&](std::size_t n) {
        if (n > N + 1)
            fail(ErrorCode::OutOfRange, "det T_" + std::to_string(n) + " needs lags up to " + std::to_string(n - 1));
    };

    if (o.theorem == "gibbs") {
        const SpectralGrid w = in.model ? grid_from_density([&](double th) { return exact_density(*in.model, th); },
                                                            o.grid, 0.5)
                                        : grid_from_acov(in.gamma, o.grid, o.summation);
        const double G = geometric_mean(cepstrum(w, 0));
        std::vector<double> g(w.size(), 0.0);
        rows.push_back({{"g", "zero"}, {"value", gibbs_functional(w, g)}, {"bound", G},
                        {"pass", gibbs_functional(w, g) >= G - 1e-10}});
        for (std::size_t j = 0; j < w.size(); ++j)
            g[j] = -std::log(w[j]);
        const double at_opt = gibbs_functional(w, g);
        rows.push_back({{"g", "-log w"}, {"value", at_opt}, {"target", G}, {"error", std::abs(at_opt - G)},
                        {"pass", std::abs(at_opt - G) <= tol}});
        NormalStream normal(o.seed);
        double worst = std::numeric_limits<double>::infinity();
        std::size_t below = 0;
        for (int trial = 0; trial < 100; ++trial) {
            double a[9], b[9];
            for (int k = 0; k <= 8; ++k) {
                // uniform on [-1, 1] from the normal stream via the probability integral transform
                a[k] = std::erf(normal() / std::sqrt(2.0));
                b[k] = std::erf(normal() / std::sqrt(2.0));
            }
            for (std::size_t j = 0; j < w.size(); ++j) {
                const double th = w.theta(j);
                double s = a[0];
                for (int k = 1; k <= 8; ++k)
                    s += a[k] * std::cos(k * th) + b[k] * std::sin(k * th);
                g[j] = s;
            }
            const double v = gibbs_functional(w, g);
            worst = std::min(worst, v);
            below += v < G - 1e-10 ? 1 : 0;
        }
        rows.push_back({{"g", "100 random trigonometric, degree <= 8"}, {"min_value", worst}, {"bound", G},
                        {"violations", below}, {"pass", below == 0}});
        for (const auto& r : rows)
            pass = pass && r["pass"].get<bool>();
    } else if (o.theorem == "kolmogorov") {
        const Spectral sp = resolve_spectral(in, 0, o.grid, o.summation);
        if (!sp.ok())
            fail(ErrorCode::NonpositiveDensity, "no log-admissible density: " + sp.notes.front());
        const double G = std::exp(sp.log_g());
        for (std::size_t n : orders) {
            if (n > N)
                fail(ErrorCode::OutOfRange, "order beyond the autocovariance truncation");
            double prod = in.gamma.gamma0();
            for (std::size_t k = 1; k <= n; ++k)
                prod *= 1.0 - std::norm(st.alpha.alpha(k));
            const double gap = std::max({std::abs(prod - G), std::abs(prod - st.v[n]), std::abs(G - st.v[n])});
            rows.push_back({{"n", n}, {"product", prod}, {"geometric_mean", G}, {"v_n", st.v[n]},
                            {"max_pairwise_gap", gap}, {"pass", gap <= tol}});
        }
        pass = detail::tail_passes(rows);
    } else {
        const Spectral sp = resolve_spectral(in, N, o.grid, o.summation);
        if (!sp.ok())
            fail(ErrorCode::NonpositiveDensity, "no log-admissible density: " + sp.notes.front());
        rep["spectral_source"] = sp.source;
        const double logG = sp.log_g();
        const double E = e_cepstral(*sp.L, N);
        rep["log_G"] = logG;
        rep["E_cepstral"] = E;
        rep["E_product"] = e_product(st.alpha, N);
        if (o.theorem == "weak") {
            for (std::size_t n : orders) {
                need_det(n);
                rows.push_back(detail::row(n, logdets[n] / double(n), logG, tol));
            }
            pass = detail::tail_passes(rows);
        } else if (o.theorem == "strong") {
            for (std::size_t n : orders) {
                need_det(n);
                rows.push_back(detail::row(n, std::exp(logdets[n] - double(n) * logG), E, tol));
            }
            pass = detail::tail_passes(rows);
        } else { // bo
            if (o.hankel < 4 || o.hankel > kMaxHankel || !is_power_of_two(o.hankel))
                fail(ErrorCode::InvalidArgument, "Hankel size must be a power of two in [4, 1024]");
            const std::size_t len = 2 * o.hankel;
            CoeffSeries m = in.model ? filter_coefficients(*in.model, len) : *sp.m;
            if (!in.model && m.size() < len + 1) {
                if (len >= o.grid / 2)
                    fail(ErrorCode::InvalidArgument, "grid too small for the Hankel truncation");
                m = spectral_factors(in.gamma, len, o.grid, o.summation).ma;
            }
            const auto syms = hankel_symbols(m, series_reciprocal_negated(m, len), len);
            for (std::size_t n : orders) {
                need_det(n);
                if (n >= o.hankel / 2)
                    fail(ErrorCode::OutOfRange, "orders must stay below half the Hankel size");
            }
            const auto bo = borodin_okounkov(syms, orders, o.hankel, 1e-8);
            for (std::size_t i = 0; i < orders.size(); ++i) {
                json r = detail::row(orders[i], bo.ratios[i], std::exp(logdets[orders[i]] - double(orders[i]) * logG), tol);
                rows.push_back(r);
                pass = pass && r["pass"].get<bool>();
            }
            const bool widom_ok = std::abs(bo.widom - E) <= tol;
            rep["widom"] = {{"value", bo.widom}, {"target", E}, {"error", std::abs(bo.widom - E)}, {"pass", widom_ok}};
            rep["hankel_size"] = o.hankel;
            rep["max_truncation_change"] = bo.max_truncation_change;
            pass = pass && widom_ok;
        }
    }
    rep["rows"] = rows;
    rep["pass"] = pass;

    if (o.csv_dir) {
        const std::filesystem::path dir(*o.csv_dir);
        std::filesystem::create_directories(dir);
        std::vector<std::string> head;
        for (const auto& [k, v] : rows.front().items())
            head.push_back(k);
        std::vector<std::vector<std::string>> table;
        for (const auto& r : rows) {
            std::vector<std::string> line;
            for (const auto& k : head) {
                const auto& v = r[k];
                line.push_back(v.is_number_float() ? fmt(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump());
            }
            table.push_back(line);
        }
        write_csv_file(dir / ("verify_" + o.theorem + ".csv"), head, table);
    }
    out << rep.dump(2) << '\n';
    return pass ? int(Exit::Pass) : int(Exit::VerificationFailed);
}

// --- predict ---------------------------------------------------------------------------------

inline int run_predict(const Options& o, std::ostream& out)
{
    check_grid(o.grid);
    if (o.horizon < 1)
        fail(ErrorCode::InvalidArgument, "horizon must be >= 1");
    const Loaded in = load_input(o, std::max(o.order, o.horizon));
    const std::size_t H = o.horizon;
    if (in.gamma.order() < H)
        fail(ErrorCode::OutOfRange, "autocovariance too short for the horizon");
    const auto st = pacf_from_acov(in.gamma, H);

    // Infinite predictor sigma * r, taken well past the horizon so the gap
    // includes the tail beyond it.
    const std::size_t K = std::min(o.grid / 2 - 1, std::max<std::size_t>(4 * H, 256));
    std::optional<CoeffSeries> r;
    double sigma = 0.0;
    if (in.model) {
        try {
            const auto L = exact_cepstrum(*in.model, K);
            const auto m = ma_coefficients(L, K);
            r = ar_coefficients(m, K);
            sigma = m[0].real();
        } catch (const Error&) {
        }
    }
    if (!r) {
        try {
            const auto f = spectral_factors(in.gamma, K, o.grid, o.summation);
            r = f.ar;
            sigma = f.sigma();
        } catch (const Error& e) {
            if (e.is_input_error())
                throw;
        }
    }

    bool complex = false;
    for (std::size_t n = 1; n <= H; ++n)
        complex = complex || !all_real(st.phi(n));
    std::vector<std::string> head{"n", "v", "ipc_l2_gap"};
    for (std::size_t j = 1; j <= H; ++j) {
        if (complex) {
            head.push_back("phi_" + std::to_string(j) + "_re");
            head.push_back("phi_" + std::to_string(j) + "_im");
        } else {
            head.push_back("phi_" + std::to_string(j));
        }
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t n = 1; n <= H; ++n) {
        const auto& phi = st.phi(n);
        std::vector<std::string> line{std::to_string(n), fmt(st.v[n]), r ? fmt(predictor_l2_gap(phi, sigma, *r)) : ""};
        for (std::size_t j = 1; j <= H; ++j) {
            const cplx c = j <= n ? phi[j - 1] : cplx{};
            line.push_back(fmt(c.real()));
            if (complex)
                line.push_back(fmt(c.imag()));
        }
        rows.push_back(std::move(line));
    }
    out << "# " << kToolName << ' ' << kVersion << " predict; input " << in.kind << ' ' << in.label << "; order "
        << in.gamma.order() << "; grid " << o.grid << "; summation " << to_string(o.summation) << '\n';
    for (std::size_t i = 0; i < head.size(); ++i)
        out << (i ? "," : "") << head[i];
    out << '\n';
    for (const auto& line : rows) {
        for (std::size_t i = 0; i < line.size(); ++i)
            out << (i ? "," : "") << line[i];
        out << '\n';
    }
    if (o.csv_dir) {
        std::filesystem::create_directories(*o.csv_dir);
        write_csv_file(std::filesystem::path(*o.csv_dir) / "predict.csv", head, rows);
    }
    return int(Exit::Pass);
}

// --- simulate ---------------------------------------------------------------------------------

inline int run_simulate(const Options& o, std::ostream& out)
{
    if (!o.model)
        fail(ErrorCode::InvalidArgument, "simulate needs --model");
    if (o.length < 1 || o.length > (1u << 24))
        fail(ErrorCode::InvalidArgument, "length must be in [1, 2^24]");
    const ModelSpec spec = parse_model_spec(*o.model);
    std::vector<double> x;
    std::string method;
    try {
        const std::size_t K = filter_length(spec, kSimulationFilterCap);
        x = simulate_path(spec, o.length, o.seed, K);
        method = "truncated moving-average filter, K = " + std::to_string(K);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TruncationTooShort)
            throw;
        x = simulate_path_circulant(spec, o.length, o.seed);
        method = "circulant embedding (filter tail too heavy for K <= " + std::to_string(kSimulationFilterCap) + ")";
    }
    out << "# " << kToolName << ' ' << kVersion << " simulate\n"
        << "# model " << *o.model << '\n'
        << "# generator " << kGeneratorName << '\n'
        << "# seed " << o.seed << '\n'
        << "# method " << method << '\n'
        << "# length " << o.length << '\n';
    for (double v : x)
        out << fmt(v) << '\n';
    return int(Exit::Pass);
}

// --- bench ------------------------------------------------------------------------------------

struct BenchRow {
    std::size_t size = 0;
    double levinson_seconds = 0.0;
    double dense_seconds = 0.0;
    double rel_diff = 0.0;
};

namespace detail {

/// Best per-call time over three rounds, each at least ~20 ms long.
template <class F>
double time_call(F&& f)
{
    using clock = std::chrono::steady_clock;
    auto once = [&] {
        const auto t0 = clock::now();
        f();
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    const double first = once();
    const auto reps = static_cast<std::size_t>(std::clamp(0.02 / std::max(first, 1e-9), 1.0, 1e6));
    double best = first;
    for (int round = 0; round < 3; ++round) {
        const auto t0 = clock::now();
        for (std::size_t i = 0; i < reps; ++i)
            f();
        best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count() / double(reps));
    }
    return best;
}

} // namespace detail

/// Levinson vs dense LU on the Toeplitz system of a FARIMA(0, 0.25, 0)
/// autocovariance with a seeded Gaussian right-hand side. Geometrically
/// decaying lags would underflow to subnormals past n ~ 1000 and time the
/// FPU's slow path instead of the algorithm.
inline std::vector<BenchRow> bench(std::span<const std::size_t> sizes, std::uint64_t seed)
{
    std::vector<BenchRow> out;
    for (std::size_t n : sizes) {
        const auto g = exact_acov(ModelSpec::farima(0.25), n);
        NormalStream normal(seed);
        CVec y(n);
        for (auto& v : y)
            v = normal();
        const DenseMatrix t = toeplitz_matrix(g, n);
        CVec xl, xd;
        BenchRow row;
        row.size = n;
        row.levinson_seconds = detail::time_call([&] { xl = toeplitz_solve(g, y); });
        row.dense_seconds = detail::time_call([&] { xd = dense_solve(t, y); });
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::norm(xl[i] - xd[i]);
            den += std::norm(xd[i]);
        }
        row.rel_diff = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        out.push_back(row);
    }
    return out;
}

inline int run_bench(const Options& o, std::ostream& out)
{
    std::vector<std::size_t> sizes = o.sizes.empty() ? std::vector<std::size_t>{1, 8, 64, 256, 512, 1024} : o.sizes;
    for (std::size_t n : sizes)
        if (n < 1 || n > o.bench_cap)
            fail(ErrorCode::InvalidArgument, "bench size " + std::to_string(n) + " outside [1, " +
                                                 std::to_string(o.bench_cap) + "]");
    const auto rows = bench(sizes, o.seed);
    std::vector<std::string> head{"size", "levinson_seconds", "dense_seconds", "levinson_ratio", "dense_ratio",
                                  "rel_diff"};
    std::vector<std::vector<std::string>> table;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const bool has_prev = i > 0;
        table.push_back({std::to_string(r.size), fmt(r.levinson_seconds), fmt(r.dense_seconds),
                         has_prev ? fmt(r.levinson_seconds / rows[i - 1].levinson_seconds) : "",
                         has_prev ? fmt(r.dense_seconds / rows[i - 1].dense_seconds) : "", fmt(r.rel_diff)});
    }
    out << "# " << kToolName << ' ' << kVersion << " bench; FARIMA(0,0.25,0) Toeplitz systems; seed " << o.seed
        << "; single thread\n";
    for (std::size_t i = 0; i < head.size(); ++i)
        out << (i ? "," : "") << head[i];
    out << '\n';
    for (const auto& line : table) {
        for (std::size_t i = 0; i < line.size(); ++i)
            out << (i ? "," : "") << line[i];
        out << '\n';
    }
    if (o.csv_dir) {
        std::filesystem::create_directories(*o.csv_dir);
        write_csv_file(std::filesystem::path(*o.csv_dir) / "bench.csv", head, table);
    }
    return int(Exit::Pass);
}

// --- errors ------------------------------------------------------------------------------------

inline int exit_code_for(const Error& e) { return e.is_input_error() ? int(Exit::InputError) : int(Exit::NumericError); }

inline json error_json(const Error& e)
{
    return {{"error", {{"code", to_string(e.code())}, {"message", e.what()}, {"exit_code", exit_code_for(e)}}}};
}

} // namespace szegolab::app
