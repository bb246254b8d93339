#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sealevel/json_io.hpp"
#include "sealevel/simulate.hpp"
#include "sealevel/uncertainty.hpp"

using namespace sealevel;
namespace fs = std::filesystem;

#ifndef SEALEVEL_CLI_PATH
#error "SEALEVEL_CLI_PATH must point at the CLI binary"
#endif

namespace {

const std::string kCli = SEALEVEL_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    auto d = fs::temp_directory_path() / "sealevel_cli_test";
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("surge model survives a json round trip") {
    auto recs = simulate_records(default_sim_truth(), 6, 61);
    PipelineConfig cfg;
    cfg.surge.tail = TailVariant::S4;
    cfg.surge.rate = RateVariant::R1;
    cfg.run_length = 2;
    auto fit = fit_pipeline(recs, cfg);

    const auto j = to_json(fit);
    auto back = pipeline_fit_from_json(j);
    const auto& a = fit.surge.model;
    const auto& b = back.surge.model;
    CHECK(b.data_hash == a.data_hash);
    for (int m : {1, 6, 11}) {
        CovariateContext ctx;
        ctx.month = m;
        ctx.day_of_year = 30 * m;
        ctx.day_of_month = 10;
        ctx.mean_day_of_month = mean_day_of_month(m);
        ctx.peak_tide = 5.5;
        ctx.tide_mean = a.tide_mean;
        ctx.tide_sd = a.tide_sd;
        for (double y : {-0.2, 0.0, 0.1, 0.3, 0.8}) {
            CHECK(b.cdf(y, ctx) == a.cdf(y, ctx));
            CHECK(b.pdf(y, ctx) == a.pdf(y, ctx));
        }
        for (double p : {0.1, 0.5, 0.97, 0.999}) CHECK(b.quantile(p, ctx) == a.quantile(p, ctx));
    }
    REQUIRE(back.exi.has_value());
    for (double y : {0.0, 0.3, 0.5, 1.0}) CHECK(back.exi->eval(y) == fit.exi->eval(y));
}

TEST_CASE("sim truth json overlays onto the defaults") {
    nlohmann::json j = {{"body_sd", 0.2}, {"cluster_alpha", 0.5}};
    auto t = sim_truth_from_json(j);
    CHECK(t.body_sd == doctest::Approx(0.2));
    CHECK(t.cluster_alpha == doctest::Approx(0.5));
    // untouched fields keep their defaults
    auto d = default_sim_truth();
    CHECK(t.tide_base == doctest::Approx(d.tide_base));
    CHECK(t.tail.alpha_sigma == doctest::Approx(d.tail.alpha_sigma));
    // full round trip preserves everything
    auto rt = sim_truth_from_json(to_json(t));
    CHECK(rt.body_sd == doctest::Approx(0.2));
    CHECK(rt.rate.lambda == doctest::Approx(d.rate.lambda));

    nlohmann::json bad = {{"cluster_alpha", 1.5}};
    CHECK_THROWS(sim_truth_from_json(bad));
}

TEST_CASE("cli: usage errors exit with code 2") {
    CHECK(run("") == 2);
    CHECK(run("no-such-command") == 2);
    CHECK(run("fit") == 2);  // --input is required
    const auto dir = scratch_dir();
    const auto csv = dir / "usage.csv";
    CHECK(run("simulate --years 2 --seed 5 --out " + csv.string()) == 0);
    CHECK(run("return-levels --variant bogus --K 2 --input " + csv.string()) == 2);
    // temporal_dependence without a site preset or run length is a usage error
    CHECK(run("fit --input " + csv.string() + " --tail S4 --rate R1") == 2);
}

TEST_CASE("cli: simulate is reproducible byte for byte") {
    const auto dir = scratch_dir();
    const auto a = dir / "sim_a.csv";
    const auto b = dir / "sim_b.csv";
    REQUIRE(run("simulate --years 2 --seed 42 --out " + a.string()) == 0);
    REQUIRE(run("simulate --years 2 --seed 42 --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    REQUIRE(run("simulate --years 2 --seed 43 --out " + b.string()) == 0);
    CHECK(slurp(a) != slurp(b));
}

TEST_CASE("cli: simulate, fit, return-levels round trip") {
    const auto dir = scratch_dir();
    const auto csv = dir / "pipeline.csv";
    const auto model = dir / "model.json";
    REQUIRE(run("simulate --years 6 --seed 7 --out " + csv.string()) == 0);

    REQUIRE(run("fit --input " + csv.string() +
                " --tail S2 --rate R0 --site HEY --out " + model.string()) == 0);
    auto fit = pipeline_fit_from_json(nlohmann::json::parse(slurp(model)));
    CHECK(fit.surge.model.tail.alpha_sigma > 0.0);
    CHECK(fit.exi.has_value());

    REQUIRE(run("return-levels --input " + csv.string() +
                " --variant current --K 2 --p 0.01 --out " + dir.string()) == 0);
    const auto curve = slurp(dir / "return_levels_current.csv");
    CHECK(curve.rfind("p,return_period_years,z_metres\n", 0) == 0);
    CHECK(curve.find("0.010000,100.000000,") != std::string::npos);

    // a malformed config file is a usage error
    const auto badcfg = dir / "bad.json";
    std::ofstream(badcfg) << "{ not json";
    CHECK(run("fit --config " + badcfg.string()) == 2);
}
