// Command-line front end for the sea level return-level pipeline.
//
// Subcommands: simulate, fit, return-levels, bootstrap, diagnostics,
// dependence, seasonality. A JSON config file may supply any option;
// command-line flags take precedence. Exit codes: 0 success, 1 runtime
// failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sealevel/dependence.hpp"
#include "sealevel/exi.hpp"
#include "sealevel/json_io.hpp"
#include "sealevel/maxima.hpp"
#include "sealevel/records.hpp"
#include "sealevel/simulate.hpp"
#include "sealevel/surge_model.hpp"
#include "sealevel/uncertainty.hpp"

namespace {

using nlohmann::json;
using namespace sealevel;

struct SitePreset {
    std::size_t run_length;
    std::size_t expected_block;
};

const std::map<std::string, SitePreset> kSites = {
    {"HEY", {2, 19}},
    {"LOW", {10, 5}},
    {"NEW", {1, 20}},
    {"SHE", {10, 6}},
};

struct Options {
    std::string config_path;
    std::string input;
    std::string output;
    std::string model_path;
    std::string truth_path;
    std::string site;
    std::string variant = "temporal_dependence";
    std::string tail = "S4";
    std::string rate = "R1";
    double q_u = 0.95;
    double v_quantile = 0.99;
    std::size_t run_length = 0;  // 0 = site preset or error
    std::size_t expected_block = 10;
    std::size_t K = 20;
    std::size_t n_reps = 200;
    double mean_block = 10.0;
    std::size_t workers = 0;
    bool banded = false;
    bool prior = false;
    bool all_variants = false;
    bool detrend = false;
    int years = 20;
    int month = 0;
    std::uint64_t seed = 0;
    std::vector<double> ps = {1e-1, 1e-2, 1e-3, 1e-4};
};

void apply_config(Options& o, const json& c) {
    auto get = [&](const char* k, auto& field) {
        if (c.contains(k)) field = c.at(k).get<std::decay_t<decltype(field)>>();
    };
    get("input", o.input);
    get("output", o.output);
    get("model", o.model_path);
    get("truth", o.truth_path);
    get("site", o.site);
    get("variant", o.variant);
    get("tail", o.tail);
    get("rate", o.rate);
    get("q_u", o.q_u);
    get("v_quantile", o.v_quantile);
    get("run_length", o.run_length);
    get("expected_block", o.expected_block);
    get("K", o.K);
    get("n_reps", o.n_reps);
    get("mean_block", o.mean_block);
    get("workers", o.workers);
    get("banded", o.banded);
    get("prior", o.prior);
    get("detrend", o.detrend);
    get("years", o.years);
    get("seed", o.seed);
    get("p", o.ps);
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--seed", o.seed, "RNG seed");
}

std::size_t resolved_run_length(const Options& o) {
    if (o.run_length > 0) return o.run_length;
    auto it = kSites.find(o.site);
    if (it != kSites.end()) return it->second.run_length;
    throw CLI::ValidationError("--run-length", "no site preset; give --run-length explicitly");
}

std::size_t resolved_block(const Options& o) {
    auto it = kSites.find(o.site);
    if (it != kSites.end()) return it->second.expected_block;
    return o.expected_block;
}

std::vector<TidalCycleRecord> load_records(const Options& o) {
    if (o.input.empty()) throw CLI::ValidationError("--input", "input CSV required");
    auto recs = parse_records_file(o.input);
    if (o.detrend) recs = detrend_linear(recs).records;
    return recs;
}

PipelineConfig make_pipeline_config(const Options& o, bool with_exi) {
    PipelineConfig pc;
    pc.surge.q_u = o.q_u;
    pc.surge.tail = tail_variant_from_string(o.tail);
    pc.surge.rate = rate_variant_from_string(o.rate);
    pc.surge.banded_body = o.banded;
    if (o.prior) pc.surge.prior = ShapePrior{};
    pc.surge.seed = o.seed;
    pc.fit_exi = with_exi;
    if (with_exi) pc.run_length = resolved_run_length(o);
    pc.v_quantile = o.v_quantile;
    return pc;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string curve_csv(const ReturnLevelCurve& curve) {
    std::string s = "p,return_period_years,z_metres\n";
    for (const auto& pt : curve.points)
        s += fmt6(pt.p) + "," + fmt6(1.0 / pt.p) + "," + fmt6(pt.z) + "\n";
    return s;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

// Builds the variant's evaluation structure, fitting whichever surge model
// the variant requires. A pre-fitted pipeline JSON (covariate model + exi)
// can be supplied to skip refitting for the top two variants.
VariantSpec build_variant(Variant v, const std::vector<TidalCycleRecord>& recs,
                          const Options& o, const TidalSampleSet& tides) {
    VariantSpec spec;
    spec.variant = v;
    spec.tides = tides;
    switch (v) {
        case Variant::current:
        case Variant::baseline:
        case Variant::seasonal_tide:
            spec.surge = fit_stationary_surge_model(recs, o.q_u, o.seed).model;
            break;
        case Variant::seasonal_surge:
        case Variant::full_seasonal: {
            Options oo = o;
            oo.tail = "S2";
            oo.rate = "R0";
            spec.surge = fit_surge_model(recs, make_pipeline_config(oo, false).surge).model;
            break;
        }
        case Variant::interaction:
        case Variant::temporal_dependence: {
            if (!o.model_path.empty()) {
                auto fit = pipeline_fit_from_json(load_json(o.model_path));
                spec.surge = fit.surge.model;
                spec.exi = fit.exi;
            } else {
                auto fit = fit_pipeline(recs, make_pipeline_config(
                                                  o, v == Variant::temporal_dependence));
                spec.surge = fit.surge.model;
                spec.exi = fit.exi;
            }
            if (v != Variant::temporal_dependence) spec.exi.reset();
            break;
        }
    }
    spec.validate();
    return spec;
}

int cmd_simulate(const Options& o) {
    SimTruth truth =
        o.truth_path.empty() ? default_sim_truth() : sim_truth_from_json(load_json(o.truth_path));
    auto recs = simulate_records(truth, o.years, o.seed);
    std::ofstream out(o.output.empty() ? "simulated.csv" : o.output);
    if (!out) throw std::runtime_error("cannot write output CSV");
    write_records_csv(out, recs);
    std::cerr << "wrote " << recs.size() << " cycles over " << o.years << " years\n";
    return 0;
}

int cmd_fit(const Options& o) {
    auto recs = load_records(o);
    auto fit = fit_pipeline(recs, make_pipeline_config(o, true));
    const json out = to_json(fit);
    const std::string path = o.output.empty() ? "model.json" : o.output;
    write_text(path, out.dump(2) + "\n");
    std::cout << "tail " << o.tail << " nll " << fmt6(fit.surge.tail_fit.nll) << " xi "
              << fmt6(fit.surge.model.tail.xi) << "\n";
    if (fit.exi)
        std::cout << "exi theta " << fmt6(fit.exi->theta) << " psi " << fmt6(fit.exi->psi)
                  << "\n";
    std::cerr << "wrote " << path << "\n";
    return 0;
}

int cmd_return_levels(const Options& o) {
    auto recs = load_records(o);
    auto tides = build_tidal_samples(recs, o.K);
    std::vector<Variant> variants;
    if (o.all_variants) {
        variants = {Variant::current,      Variant::baseline,    Variant::seasonal_surge,
                    Variant::seasonal_tide, Variant::full_seasonal, Variant::interaction,
                    Variant::temporal_dependence};
    } else {
        variants = {variant_from_string(o.variant)};
    }
    const std::string outdir = o.output.empty() ? "." : o.output;
    std::filesystem::create_directories(outdir);
    std::optional<int> month;
    if (o.month >= 1 && o.month <= 12) month = o.month;
    for (Variant v : variants) {
        auto spec = build_variant(v, recs, o, tides);
        auto curve = return_level_curve(spec, o.ps, month);
        const std::string path =
            outdir + "/return_levels_" + to_string(v) + (month ? "_m" + std::to_string(*month) : "") +
            ".csv";
        write_text(path, curve_csv(curve));
        for (const auto& pt : curve.points)
            std::cout << to_string(v) << "," << fmt6(pt.p) << "," << fmt6(pt.z) << "\n";
    }
    return 0;
}

int cmd_bootstrap(const Options& o) {
    auto recs = load_records(o);
    auto tides = build_tidal_samples(recs, o.K);
    const Variant v = variant_from_string(o.variant);
    if (v != Variant::interaction && v != Variant::temporal_dependence)
        throw CLI::ValidationError("--variant",
                                   "bootstrap supports interaction or temporal_dependence");
    auto pc = make_pipeline_config(o, v == Variant::temporal_dependence);
    auto fit = fit_pipeline(recs, pc);
    BootstrapConfig bc;
    bc.n_reps = o.n_reps;
    bc.mean_block = o.mean_block;
    bc.seed = o.seed;
    bc.workers = o.workers;
    auto res = bootstrap_return_levels(recs, pc, fit, tides, v, o.ps, bc);
    std::string csv = "p,z_hat,lo95,hi95\n";
    for (const auto& iv : res.intervals)
        csv += fmt6(iv.p) + "," + fmt6(iv.z_hat) + "," + fmt6(iv.lo95) + "," + fmt6(iv.hi95) +
               "\n";
    const std::string path = o.output.empty() ? "bootstrap.csv" : o.output;
    write_text(path, csv);
    std::cout << csv;
    std::cerr << res.failures << "/" << res.n_reps << " replicates failed\n";
    return 0;
}

int cmd_diagnostics(const Options& o) {
    auto recs = load_records(o);
    auto tides = build_tidal_samples(recs, o.K);
    auto spec = build_variant(variant_from_string(o.variant), recs, o, tides);
    json out;
    out["pit"] = to_json(pit_transform(spec.surge, recs));
    auto maxima = extract_annual_maxima(recs);
    if (maxima.size() >= 5) {
        out["pp_pooled"] = to_json(pp_plot_data(maxima, spec, false));
        out["pp_year_specific"] = to_json(pp_plot_data(maxima, spec, true));
    }
    const std::string path = o.output.empty() ? "diagnostics.json" : o.output;
    write_text(path, out.dump(2) + "\n");
    std::cout << "overall KS p " << fmt6(out["pit"]["ks_p"].get<double>()) << "\n";
    return 0;
}

int cmd_dependence(const Options& o) {
    auto recs = load_records(o);
    auto rep = dependence_report(recs, o.q_u, resolved_block(o), 100, o.seed);
    const std::string path = o.output.empty() ? "dependence.json" : o.output;
    write_text(path, to_json(rep).dump(2) + "\n");
    std::cout << "test,statistic,p\n";
    std::cout << "ks_uniformity," << fmt6(rep.uniformity.statistic) << ","
              << fmt6(rep.uniformity.p_raw) << "\n";
    std::cout << "ks_uniformity_bootstrap,," << fmt6(rep.uniformity.p_bootstrap) << "\n";
    std::cout << "ad_two_sample," << fmt6(rep.ad_all.statistic) << "," << fmt6(rep.ad_all.p_value)
              << "\n";
    std::cout << "quantile_block_trend," << fmt6(rep.block_trend.slope) << ","
              << fmt6(rep.block_trend.p_value) << "\n";
    return 0;
}

int cmd_seasonality(const Options& o) {
    auto recs = load_records(o);
    auto tides = build_tidal_samples(recs, o.K);
    auto spec = build_variant(variant_from_string(o.variant), recs, o, tides);
    std::string csv = "p,z_metres";
    for (int j = 1; j <= 12; ++j) csv += ",m" + std::to_string(j);
    csv += "\n";
    for (double p : o.ps) {
        const double z = return_level(spec, p);
        const auto prof = month_occurrence_profile(spec, z);
        csv += fmt6(p) + "," + fmt6(z);
        for (double v : prof) csv += "," + fmt6(v);
        csv += "\n";
    }
    const std::string path = o.output.empty() ? "seasonality.csv" : o.output;
    write_text(path, csv);
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;

    // config file values load first so that explicit flags override them
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") o.config_path = argv[i + 1];
    if (!o.config_path.empty()) {
        try {
            apply_config(o, load_json(o.config_path));
        } catch (const std::exception& e) {
            std::cerr << "error: config: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"Extreme sea level return levels from skew surge and peak tide records"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic record CSV");
    sim->add_option("--out", o.output, "output CSV path");
    sim->add_option("--years", o.years, "calendar years to generate");
    sim->add_option("--truth", o.truth_path, "truth parameter JSON");
    add_common(sim, o);

    auto add_fit_opts = [&](CLI::App* cmd) {
        cmd->add_option("--input", o.input, "record CSV");
        cmd->add_option("--q-u", o.q_u, "threshold quantile");
        cmd->add_option("--tail", o.tail, "tail model: S0..S4");
        cmd->add_option("--rate", o.rate, "rate model: R0 or R1");
        cmd->add_flag("--banded", o.banded, "tide-banded empirical body");
        cmd->add_flag("--prior", o.prior, "Gaussian prior on the shape parameter");
        cmd->add_flag("--detrend", o.detrend, "remove the linear annual-mean surge trend");
        cmd->add_option("--site", o.site, "site preset: HEY, LOW, NEW, SHE");
        cmd->add_option("--run-length", o.run_length, "declustering run length r (cycles)");
        cmd->add_option("--v-quantile", o.v_quantile, "extremal-index threshold quantile");
        add_common(cmd, o);
    };

    auto* fit = app.add_subcommand("fit", "Fit the surge and extremal-index models");
    add_fit_opts(fit);
    fit->add_option("--out", o.output, "model JSON path");

    auto* rl = app.add_subcommand("return-levels", "Solve return levels per variant");
    add_fit_opts(rl);
    rl->add_option("--model", o.model_path, "pre-fitted pipeline JSON");
    rl->add_option("--variant", o.variant, "model variant");
    rl->add_flag("--all-variants", o.all_variants, "emit all seven variants");
    rl->add_option("--p", o.ps, "annual exceedance probabilities");
    rl->add_option("--month", o.month, "monthly curve for this month (1-12)");
    rl->add_option("--K", o.K, "yearly tidal samples");
    rl->add_option("--out", o.output, "output directory");

    auto* bs = app.add_subcommand("bootstrap", "Stationary-bootstrap return level intervals");
    add_fit_opts(bs);
    bs->add_option("--variant", o.variant, "model variant");
    bs->add_option("--p", o.ps, "annual exceedance probabilities");
    bs->add_option("--K", o.K, "yearly tidal samples");
    bs->add_option("--n-reps", o.n_reps, "bootstrap replicates");
    bs->add_option("--mean-block", o.mean_block, "mean block length (cycles)");
    bs->add_option("--workers", o.workers, "worker threads (0 = all cores)");
    bs->add_option("--out", o.output, "output CSV path");

    auto* diag = app.add_subcommand("diagnostics", "PIT uniformity and PP plots");
    add_fit_opts(diag);
    diag->add_option("--model", o.model_path, "pre-fitted pipeline JSON");
    diag->add_option("--variant", o.variant, "model variant");
    diag->add_option("--K", o.K, "yearly tidal samples");
    diag->add_option("--out", o.output, "output JSON path");

    auto* dep = app.add_subcommand("dependence", "Tide-surge dependence diagnostics");
    add_fit_opts(dep);
    dep->add_option("--expected-block", o.expected_block, "tide-rank bootstrap mean block");
    dep->add_option("--out", o.output, "output JSON path");

    auto* seas = app.add_subcommand("seasonality", "Month-of-occurrence table per level");
    add_fit_opts(seas);
    seas->add_option("--model", o.model_path, "pre-fitted pipeline JSON");
    seas->add_option("--variant", o.variant, "model variant");
    seas->add_option("--p", o.ps, "annual exceedance probabilities");
    seas->add_option("--K", o.K, "yearly tidal samples");
    seas->add_option("--out", o.output, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (fit->parsed()) return cmd_fit(o);
        if (rl->parsed()) return cmd_return_levels(o);
        if (bs->parsed()) return cmd_bootstrap(o);
        if (diag->parsed()) return cmd_diagnostics(o);
        if (dep->parsed()) return cmd_dependence(o);
        if (seas->parsed()) return cmd_seasonality(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
