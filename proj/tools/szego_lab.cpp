#include "app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace app = szegolab::app;

namespace {

void add_source(CLI::App* cmd, app::Options& o)
{
    auto* m = cmd->add_option("--model", o.model, "zoo model, e.g. ar1:0.6, ma:0.5, farima:0.25, bloomfield:0,0.3");
    auto* a = cmd->add_option("--acov", o.acov_path, "autocovariance CSV (lag,value or lag,re,im)");
    auto* s = cmd->add_option("--series", o.series_path, "observations, one per line");
    m->excludes(a)->excludes(s);
    a->excludes(s);
}

void add_numerics(CLI::App* cmd, app::Options& o, std::string& summation)
{
    cmd->add_option("--order", o.order, "truncation order N")->envname("SZEGOLAB_ORDER")->capture_default_str();
    cmd->add_option("--grid", o.grid, "spectral grid size M (power of two)")
        ->envname("SZEGOLAB_GRID")
        ->capture_default_str();
    cmd->add_option("--summation", summation, "dirichlet or fejer")
        ->transform(CLI::IsMember({"dirichlet", "fejer"}, CLI::ignore_case))
        ->envname("SZEGOLAB_SUMMATION")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"Szego-Levinson laboratory: Verblunsky coefficients, Szego limits, condition flags"};
    cli.set_version_flag("--version", std::string(app::kToolName) + " " + std::string(app::kVersion));
    cli.require_subcommand(1);

    app::Options o;
    std::optional<std::string> output;
    std::string summation = "dirichlet";

    auto* analyze = cli.add_subcommand("analyze", "full report as JSON");
    auto* verify = cli.add_subcommand("verify", "check one limit theorem; exit 1 when it fails");
    auto* predict = cli.add_subcommand("predict", "finite predictors as CSV");
    auto* classify = cli.add_subcommand("classify", "condition flags as JSON");
    auto* simulate = cli.add_subcommand("simulate", "simulate a zoo model path");
    auto* bench = cli.add_subcommand("bench", "Levinson vs dense solve timings as CSV");

    for (auto* cmd : {analyze, verify, predict, classify}) {
        add_source(cmd, o);
        add_numerics(cmd, o, summation);
    }
    for (auto* cmd : {analyze, verify, predict, classify, simulate, bench}) {
        cmd->add_option("--output,-o", output, "write to this file instead of stdout");
    }
    for (auto* cmd : {analyze, verify, predict, bench})
        cmd->add_option("--csv-dir", o.csv_dir, "also write CSV tables here");

    verify->add_option("--theorem", o.theorem, "weak, strong, bo, gibbs, kolmogorov")->required();
    verify->add_option("--orders", o.orders, "e.g. 1..32, 64, 1,2,4");
    verify->add_option("--tol", o.tol, "absolute tolerance");
    verify->add_option("--hankel", o.hankel, "Hankel truncation for bo")->envname("SZEGOLAB_HANKEL")->capture_default_str();
    verify->add_option("--seed", o.seed, "seed for the random gibbs test functions")->capture_default_str();

    predict->add_option("--horizon,-H", o.horizon, "largest predictor order")->capture_default_str();

    simulate->add_option("--model", o.model, "zoo model")->required();
    simulate->add_option("--length,-T", o.length, "path length")->capture_default_str();
    simulate->add_option("--seed", o.seed, "generator seed")->envname("SZEGOLAB_SEED")->capture_default_str();

    bench->add_option("--sizes", o.sizes, "system sizes")->delimiter(',');
    bench->add_option("--cap", o.bench_cap, "largest allowed size")->envname("SZEGOLAB_BENCH_CAP")->capture_default_str();
    bench->add_option("--seed", o.seed, "right-hand side seed")->capture_default_str();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : int(app::Exit::InputError);
    }

    o.summation = summation == "fejer" ? szegolab::Summation::Fejer : szegolab::Summation::Dirichlet;

    std::ofstream file;
    if (output) {
        file.open(*output);
        if (!file) {
            std::cerr << "szego-lab: cannot write " << *output << '\n';
            return int(app::Exit::InputError);
        }
    }
    std::ostream& out = output ? static_cast<std::ostream&>(file) : std::cout;

    try {
        if (*analyze)
            return app::run_analyze(o, out);
        if (*verify)
            return app::run_verify(o, out);
        if (*predict)
            return app::run_predict(o, out);
        if (*classify)
            return app::run_classify(o, out);
        if (*simulate)
            return app::run_simulate(o, out);
        return app::run_bench(o, out);
    } catch (const szegolab::Error& e) {
        std::cout << app::error_json(e).dump(2) << '\n';
        std::cerr << "szego-lab: " << e.what() << '\n';
        return app::exit_code_for(e);
    } catch (const std::exception& e) {
        const szegolab::Error wrapped(szegolab::ErrorCode::InvalidArgument, e.what());
        std::cout << app::error_json(wrapped).dump(2) << '\n';
        std::cerr << "szego-lab: " << e.what() << '\n';
        return app::exit_code_for(wrapped);
    }
}
