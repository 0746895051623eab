#include "app.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace szegolab;
using app::json;

namespace {

struct Run {
    int rc = -1;
    std::string text;
    json doc() const { return json::parse(text); }
};

template <class F>
Run run(F&& f, const app::Options& o)
{
    std::ostringstream out;
    Run r;
    r.rc = f(o, out);
    r.text = out.str();
    return r;
}

app::Options model(const std::string& spec, std::size_t order = 64)
{
    app::Options o;
    o.model = spec;
    o.order = order;
    return o;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ','))
            cols.push_back(c);
        rows.push_back(cols);
    }
    return rows;
}

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

const std::string kSamples = SZEGOLAB_SAMPLES_DIR;

} // namespace

TEST(Inputs, AcovCsvFormats)
{
    std::istringstream two("# comment\nlag,gamma\n0,2\n1,0.5\n\n2,0.25\n");
    const auto g = app::read_acov_csv(two);
    EXPECT_EQ(g.order(), 2u);
    EXPECT_EQ(g[1], cplx(0.5));

    std::istringstream three("0,1,0\n1,0.2,0.1\n");
    const auto h = app::read_acov_csv(three);
    EXPECT_EQ(h[1], cplx(0.2, 0.1));
    EXPECT_EQ(h.lag(-1), cplx(0.2, -0.1));
}

TEST(Inputs, AcovCsvRejections)
{
    auto parse = [](const char* text) {
        return code_of([&] {
            std::istringstream in(text);
            app::read_acov_csv(in);
        });
    };
    EXPECT_EQ(parse("0,1\n2,0.5\n"), ErrorCode::ParseError);   // gap
    EXPECT_EQ(parse("0,1\n1,x\n"), ErrorCode::ParseError);     // bad number
    EXPECT_EQ(parse("0,1\n1,0.5,0\n"), ErrorCode::ParseError); // width change
    EXPECT_EQ(parse("# nothing\n"), ErrorCode::ParseError);
    EXPECT_EQ(parse("0,-1\n"), ErrorCode::InvalidArgument);    // gamma_0 <= 0
}

TEST(Inputs, SeriesAndOrders)
{
    std::istringstream s("# sim\n1\n2.5\n\n-3\n");
    EXPECT_EQ(app::read_series(s), (std::vector<double>{1.0, 2.5, -3.0}));
    std::istringstream bad("1\nfoo\n");
    EXPECT_EQ(code_of([&] { app::read_series(bad); }), ErrorCode::ParseError);

    EXPECT_EQ(app::parse_orders("1..4"), (std::vector<std::size_t>{1, 2, 3, 4}));
    EXPECT_EQ(app::parse_orders("64"), (std::vector<std::size_t>{64}));
    EXPECT_EQ(app::parse_orders("1,2,4..5"), (std::vector<std::size_t>{1, 2, 4, 5}));
    EXPECT_EQ(code_of([] { app::parse_orders("0"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { app::parse_orders("5..2"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { app::parse_orders("a"); }), ErrorCode::ParseError);
}

TEST(Inputs, ExactlyOneSource)
{
    app::Options o;
    EXPECT_EQ(code_of([&] { app::load_input(o, 4); }), ErrorCode::InvalidArgument);
    o.model = "free";
    o.acov_path = "x.csv";
    EXPECT_EQ(code_of([&] { app::load_input(o, 4); }), ErrorCode::InvalidArgument);
    app::Options missing;
    missing.acov_path = "/nonexistent/acov.csv";
    EXPECT_EQ(code_of([&] { app::load_input(missing, 4); }), ErrorCode::InvalidArgument);
}

TEST(Analyze, Ar1Report)
{
    const auto r = run(app::run_analyze, model("ar1:0.6"));
    ASSERT_EQ(r.rc, 0);
    const auto d = r.doc();
    EXPECT_EQ(d["tool"]["version"], "0.1.0");
    EXPECT_EQ(d["settings"]["order"], 64);
    EXPECT_EQ(d["settings"]["grid"], 4096);
    EXPECT_EQ(d["settings"]["summation"], "dirichlet");
    EXPECT_NEAR(d["G"].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(d["E"]["cepstral"].get<double>(), 1.5625, 1e-9);
    EXPECT_NEAR(d["E"]["product"].get<double>(), 1.5625, 1e-9);
    EXPECT_NEAR(d["alpha"][0].get<double>(), 0.6, 1e-15);
    EXPECT_NEAR(d["alpha"][1].get<double>(), 0.0, 1e-15);
    for (const char* f : {"sz", "baxter", "ssz", "minimal"})
        EXPECT_EQ(d["flags"][f], "holds") << f;
    EXPECT_EQ(d["flags"]["lrd_di"], "fails");
    EXPECT_EQ(d["flags"]["lrd_li"], "fails");
    // real input gives plain real arrays
    EXPECT_TRUE(d["phase"][0].is_number());
    EXPECT_NEAR(d["tables"]["det"].back()["ratio"].get<double>(), 1.5625, 1e-9);
}

TEST(Analyze, FreeModel)
{
    const auto d = run(app::run_analyze, model("free", 8)).doc();
    for (const auto& a : d["alpha"])
        EXPECT_EQ(a.get<double>(), 0.0);
    for (const auto& row : d["tables"]["det"])
        EXPECT_EQ(row["det"].get<double>(), 1.0);
}

TEST(Analyze, AcovFileMatchesModel)
{
    app::Options o;
    o.acov_path = kSamples + "/ma1_acov.csv";
    const auto d = run(app::run_analyze, o).doc();
    EXPECT_EQ(d["settings"]["order"], 3);
    EXPECT_NEAR(d["alpha"][0].get<double>(), 0.4, 1e-15);
    EXPECT_NEAR(d["alpha"][1].get<double>(), -4.0 / 21.0, 1e-15);
    EXPECT_NEAR(d["ma"][1].get<double>(), 0.5, 1e-12);
    EXPECT_NEAR(d["G"].get<double>(), 1.0, 1e-12);
}

TEST(Analyze, UnitRootFallsBackToClosedForm)
{
    const auto d = run(app::run_analyze, model("ma:1")).doc();
    EXPECT_EQ(d["spectral"]["source"], "closed-form cepstrum");
    EXPECT_FALSE(d["spectral"]["notes"].empty());
    EXPECT_NEAR(d["G"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(d["flags"]["baxter"], "fails");
    EXPECT_EQ(d["flags"]["sz"], "holds");
}

TEST(Analyze, FarimaHasHurstAndLongMemory)
{
    const auto d = run(app::run_analyze, model("farima:0.25")).doc();
    EXPECT_DOUBLE_EQ(d["hurst"].get<double>(), 0.75);
    EXPECT_EQ(d["flags"]["lrd_di"], "holds");
    EXPECT_EQ(d["flags"]["lrd_li"], "holds");
    EXPECT_TRUE(d["flags"]["implications_hold"].get<bool>());
}

TEST(Analyze, ComplexInputKeepsPairs)
{
    const auto dir = std::filesystem::temp_directory_path() / "szegolab_test_app";
    std::filesystem::create_directories(dir);
    const auto path = dir / "complex.csv";
    {
        std::ofstream f(path);
        f << "0,2,0\n1,0.5,0.4\n2,0.1,-0.2\n";
    }
    app::Options o;
    o.acov_path = path.string();
    o.csv_dir = (dir / "tables").string();
    const auto d = run(app::run_analyze, o).doc();
    EXPECT_TRUE(d["alpha"][0].is_array());
    EXPECT_TRUE(d["gamma"][1].is_array());
    EXPECT_TRUE(std::filesystem::exists(dir / "tables" / "alpha.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "tables" / "det.csv"));
}

TEST(Analyze, RejectsSmallGrid)
{
    auto o = model("ar1:0.6", 64);
    o.grid = 128;
    EXPECT_EQ(code_of([&] { run(app::run_analyze, o); }), ErrorCode::InvalidArgument);
    o.grid = 1000;
    EXPECT_EQ(code_of([&] { run(app::run_analyze, o); }), ErrorCode::InvalidArgument);
}

TEST(Verify, StrongAr1)
{
    auto o = model("ar1:0.6");
    o.theorem = "strong";
    o.orders = "1..32";
    const auto r = run(app::run_verify, o);
    EXPECT_EQ(r.rc, 0);
    const auto d = r.doc();
    EXPECT_EQ(d["rows"].size(), 32u);
    for (const auto& row : d["rows"])
        EXPECT_NEAR(row["value"].get<double>(), 1.5625, 1e-9);
    EXPECT_TRUE(d["pass"].get<bool>());
}

TEST(Verify, BoFreeAndAr1)
{
    auto o = model("free");
    o.theorem = "bo";
    EXPECT_EQ(run(app::run_verify, o).rc, 0);
    o.model = "ar1:0.6";
    const auto d = run(app::run_verify, o).doc();
    EXPECT_NEAR(d["widom"]["value"].get<double>(), 1.5625, 1e-10);
    EXPECT_TRUE(d["pass"].get<bool>());
}

TEST(Verify, StrongBloomfieldAt64)
{
    auto o = model("bloomfield:0,0.3");
    o.theorem = "strong";
    o.orders = "64";
    const auto r = run(app::run_verify, o);
    EXPECT_EQ(r.rc, 0);
    EXPECT_NEAR(r.doc()["rows"][0]["value"].get<double>(), std::exp(0.09), 1e-3);
}

TEST(Verify, WeakGibbsKolmogorov)
{
    for (const char* t : {"weak", "gibbs", "kolmogorov"}) {
        // the weak limit closes like log E / n
        auto o = model("arma:0.5/0.3", 256);
        o.theorem = t;
        const auto r = run(app::run_verify, o);
        EXPECT_EQ(r.rc, 0) << t << r.text;
    }
}

TEST(Verify, FailureExitsOne)
{
    // The strong ratio at n = 1 is gamma_0 / G = 1.5625, far from E at tol 1e-3.
    auto o = model("ma:0.5");
    o.theorem = "strong";
    o.orders = "1";
    const auto r = run(app::run_verify, o);
    EXPECT_EQ(r.rc, 1);
    EXPECT_FALSE(r.doc()["pass"].get<bool>());
}

TEST(Verify, InputProblems)
{
    auto o = model("ar1:0.6");
    o.theorem = "nope";
    EXPECT_EQ(code_of([&] { run(app::run_verify, o); }), ErrorCode::InvalidArgument);

    app::Options f;
    f.acov_path = kSamples + "/ma1_acov.csv";
    f.theorem = "strong";
    f.orders = "10";
    EXPECT_EQ(code_of([&] { run(app::run_verify, f); }), ErrorCode::OutOfRange);

    auto bo = model("ma:0.97");
    bo.theorem = "bo";
    bo.hankel = 16;
    bo.orders = "1";
    EXPECT_EQ(code_of([&] { run(app::run_verify, bo); }), ErrorCode::TruncationUnstable);
}

TEST(Predict, Ar1FreeMa1)
{
    auto o = model("ar1:0.6");
    o.horizon = 5;
    auto rows = csv_rows(run(app::run_predict, o).text);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0][0], "n");
    EXPECT_EQ(rows[0][3], "phi_1");
    for (std::size_t n = 1; n <= 5; ++n) {
        EXPECT_NEAR(std::stod(rows[n][1]), 1.0, 1e-12);
        EXPECT_NEAR(std::stod(rows[n][3]), 0.6, 1e-12);
        EXPECT_LT(std::stod(rows[n][2]), 1e-10);
    }

    o.model = "free";
    rows = csv_rows(run(app::run_predict, o).text);
    for (std::size_t n = 1; n <= 5; ++n)
        for (std::size_t c = 3; c < rows[n].size(); ++c)
            EXPECT_EQ(std::stod(rows[n][c]), 0.0);

    o.model = "ma:0.5";
    rows = csv_rows(run(app::run_predict, o).text);
    double prev = 1e9;
    for (std::size_t n = 1; n <= 5; ++n) {
        const double gap = std::stod(rows[n][2]);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_NEAR(std::stod(rows[1][3]), 0.4, 1e-15);
    EXPECT_NEAR(std::stod(rows[2][1]), 1.25 * (1 - 0.16) * (1 - 16.0 / 441.0), 1e-12);
}

TEST(Simulate, MetadataAndReproducibility)
{
    auto o = model("ar1:0.6");
    o.length = 50;
    o.seed = 11;
    const auto a = run(app::run_simulate, o).text;
    EXPECT_EQ(a, run(app::run_simulate, o).text);
    EXPECT_NE(a.find("# generator mt19937_64"), std::string::npos);
    EXPECT_NE(a.find("# method truncated moving-average filter"), std::string::npos);
    EXPECT_EQ(csv_rows(a).size(), 50u);

    o.model = "farima:0.3";
    const auto b = run(app::run_simulate, o).text;
    EXPECT_NE(b.find("# method circulant embedding"), std::string::npos);
    EXPECT_EQ(csv_rows(b).size(), 50u);

    std::istringstream back(a);
    EXPECT_EQ(app::read_series(back).size(), 50u);
}

TEST(Classify, JsonFlags)
{
    const auto d = run(app::run_classify, model("ar1:0.6")).doc();
    EXPECT_EQ(d["flags"]["baxter"], "holds");
    EXPECT_NEAR(d["canonical_correlation"][0]["rho"].get<double>(), 0.6, 1e-12);
}

TEST(Bench, SmallSizesAgree)
{
    app::Options o;
    o.sizes = {1, 8, 32};
    const auto rows = csv_rows(run(app::run_bench, o).text);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0][0], "size");
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_LT(std::stod(rows[i][5]), 1e-12);
    o.sizes = {8192};
    EXPECT_EQ(code_of([&] { run(app::run_bench, o); }), ErrorCode::InvalidArgument);
}

TEST(Errors, ExitCodeMapping)
{
    EXPECT_EQ(app::exit_code_for(Error(ErrorCode::ParseError, "x")), 2);
    EXPECT_EQ(app::exit_code_for(Error(ErrorCode::OutOfRange, "x")), 2);
    EXPECT_EQ(app::exit_code_for(Error(ErrorCode::NotPositiveDefinite, "x")), 3);
    const auto j = app::error_json(Error(ErrorCode::NegativeDensity, "w < 0"));
    EXPECT_EQ(j["error"]["code"], "NegativeDensity");
    EXPECT_EQ(j["error"]["exit_code"], 3);
}
