#include "sealevel/json_io.hpp"

#include <stdexcept>

namespace sealevel {

using nlohmann::json;

namespace {

json band_to_json(const EmpiricalBody::Band& b) {
    return {{"sorted", b.sorted}, {"kde_bandwidth", b.kde_bandwidth}, {"kde_mass", b.kde_mass}};
}

EmpiricalBody::Band band_from_json(const json& j) {
    EmpiricalBody::Band b;
    b.sorted = j.at("sorted").get<std::vector<double>>();
    b.kde_bandwidth = j.at("kde_bandwidth").get<double>();
    b.kde_mass = j.at("kde_mass").get<double>();
    return b;
}

json tail_params_to_json(const TailParams& p) {
    return {{"alpha_sigma", p.alpha_sigma},
            {"beta_sigma", p.beta_sigma},
            {"phi_sigma", p.phi_sigma},
            {"beta_sigma2", p.beta_sigma2},
            {"phi_sigma2", p.phi_sigma2},
            {"gamma_sigma_x", p.gamma_sigma_x},
            {"xi", p.xi},
            {"sigma_month", p.sigma_month},
            {"xi_month", p.xi_month}};
}

TailParams tail_params_from_json(const json& j) {
    TailParams p;
    p.alpha_sigma = j.at("alpha_sigma").get<double>();
    p.beta_sigma = j.at("beta_sigma").get<double>();
    p.phi_sigma = j.at("phi_sigma").get<double>();
    p.beta_sigma2 = j.at("beta_sigma2").get<double>();
    p.phi_sigma2 = j.at("phi_sigma2").get<double>();
    p.gamma_sigma_x = j.at("gamma_sigma_x").get<double>();
    p.xi = j.at("xi").get<double>();
    p.sigma_month = j.at("sigma_month").get<std::array<double, 12>>();
    p.xi_month = j.at("xi_month").get<std::array<double, 12>>();
    return p;
}

json rate_params_to_json(const RateParams& p) {
    return {{"lambda", p.lambda},
            {"beta_lambda", p.beta_lambda},
            {"phi_lambda", p.phi_lambda},
            {"alpha_lambda_x", p.alpha_lambda_x},
            {"beta_lambda_x", p.beta_lambda_x},
            {"phi_lambda_x", p.phi_lambda_x}};
}

RateParams rate_params_from_json(const json& j) {
    RateParams p;
    p.lambda = j.at("lambda").get<double>();
    p.beta_lambda = j.at("beta_lambda").get<double>();
    p.phi_lambda = j.at("phi_lambda").get<double>();
    p.alpha_lambda_x = j.at("alpha_lambda_x").get<double>();
    p.beta_lambda_x = j.at("beta_lambda_x").get<double>();
    p.phi_lambda_x = j.at("phi_lambda_x").get<double>();
    return p;
}

json estimates_to_json(const std::vector<ParamEstimate>& es) {
    json out = json::array();
    for (const auto& e : es)
        out.push_back({{"name", e.name}, {"value", e.value}, {"lo95", e.lo95}, {"hi95", e.hi95}});
    return out;
}

}  // namespace

json to_json(const SurgeModel& m) {
    json thresholds = {{"u", std::vector<double>(m.thresholds.u, m.thresholds.u + 12)},
                       {"quantile_level", m.thresholds.quantile_level}};
    json months = json::array();
    for (const auto& mo : m.body.months) {
        json bands = json::array();
        for (const auto& b : mo.bands) bands.push_back(band_to_json(b));
        months.push_back({{"bands", bands},
                          {"tide_cut_lo", mo.tide_cut_lo},
                          {"tide_cut_hi", mo.tide_cut_hi}});
    }
    json out = {{"thresholds", thresholds},
                {"body", {{"banded", m.body.banded}, {"months", months}}},
                {"tail_variant", to_string(m.tail_spec.variant)},
                {"tail", tail_params_to_json(m.tail)},
                {"rate_variant", to_string(m.rate_variant)},
                {"rate", rate_params_to_json(m.rate)},
                {"tide_mean", m.tide_mean},
                {"tide_sd", m.tide_sd},
                {"nll", m.nll},
                {"aic", m.aic},
                {"bic", m.bic},
                {"data_hash", m.data_hash}};
    if (m.prior) out["shape_prior"] = {{"mean", m.prior->mean}, {"sd", m.prior->sd}};
    return out;
}

SurgeModel surge_model_from_json(const json& j) {
    SurgeModel m;
    const auto u = j.at("thresholds").at("u").get<std::vector<double>>();
    if (u.size() != 12) throw std::invalid_argument("model json: expected 12 thresholds");
    for (int i = 0; i < 12; ++i) m.thresholds.u[i] = u[i];
    m.thresholds.quantile_level = j.at("thresholds").at("quantile_level").get<double>();
    m.body.banded = j.at("body").at("banded").get<bool>();
    const auto& months = j.at("body").at("months");
    if (months.size() != 12) throw std::invalid_argument("model json: expected 12 months");
    for (int i = 0; i < 12; ++i) {
        const auto& mo = months[i];
        for (const auto& b : mo.at("bands")) m.body.months[i].bands.push_back(band_from_json(b));
        m.body.months[i].tide_cut_lo = mo.at("tide_cut_lo").get<double>();
        m.body.months[i].tide_cut_hi = mo.at("tide_cut_hi").get<double>();
    }
    m.tail_spec.variant = tail_variant_from_string(j.at("tail_variant").get<std::string>());
    m.tail = tail_params_from_json(j.at("tail"));
    m.rate_variant = rate_variant_from_string(j.at("rate_variant").get<std::string>());
    m.rate = rate_params_from_json(j.at("rate"));
    m.tide_mean = j.at("tide_mean").get<double>();
    m.tide_sd = j.at("tide_sd").get<double>();
    m.nll = j.value("nll", 0.0);
    m.aic = j.value("aic", 0.0);
    m.bic = j.value("bic", 0.0);
    m.data_hash = j.value("data_hash", std::uint64_t{0});
    if (j.contains("shape_prior"))
        m.prior = ShapePrior{j.at("shape_prior").at("mean").get<double>(),
                             j.at("shape_prior").at("sd").get<double>()};
    return m;
}

json to_json(const ExiModel& m) {
    return {{"run_length", m.run_length}, {"v", m.v},     {"theta_v", m.theta_v},
            {"theta", m.theta},           {"psi", m.psi}, {"grid_y", m.grid_y},
            {"grid_theta", m.grid_theta}, {"grid_clusters", m.grid_clusters}};
}

ExiModel exi_model_from_json(const json& j) {
    ExiModel m;
    m.run_length = j.at("run_length").get<std::size_t>();
    m.v = j.at("v").get<double>();
    m.theta_v = j.at("theta_v").get<double>();
    m.theta = j.at("theta").get<double>();
    m.psi = j.at("psi").get<double>();
    m.grid_y = j.at("grid_y").get<std::vector<double>>();
    m.grid_theta = j.at("grid_theta").get<std::vector<double>>();
    m.grid_clusters = j.at("grid_clusters").get<std::vector<std::size_t>>();
    return m;
}

json to_json(const TailFit& fit) {
    return {{"variant", to_string(fit.spec.variant)},
            {"params", tail_params_to_json(fit.params)},
            {"nll", fit.nll},
            {"aic", fit.aic},
            {"bic", fit.bic},
            {"n", fit.n},
            {"estimates", estimates_to_json(fit.estimates)}};
}

json to_json(const RateFit& fit) {
    return {{"variant", to_string(fit.variant)},
            {"params", rate_params_to_json(fit.params)},
            {"nll", fit.nll},
            {"aic", fit.aic},
            {"bic", fit.bic},
            {"n", fit.n},
            {"estimates", estimates_to_json(fit.estimates)}};
}

json to_json(const PipelineFit& fit) {
    json out = {{"model", to_json(fit.surge.model)},
                {"tail_fit", to_json(fit.surge.tail_fit)},
                {"rate_fit", to_json(fit.surge.rate_fit)}};
    if (fit.exi) out["exi"] = to_json(*fit.exi);
    return out;
}

PipelineFit pipeline_fit_from_json(const json& j) {
    PipelineFit fit;
    fit.surge.model = surge_model_from_json(j.at("model"));
    if (j.contains("exi")) fit.exi = exi_model_from_json(j.at("exi"));
    return fit;
}

json to_json(const DependenceReport& rep) {
    json monthly = json::array();
    for (const auto& ad : rep.ad_monthly)
        monthly.push_back({{"statistic", ad.statistic}, {"p_value", ad.p_value}});
    json chi = json::array();
    for (const auto& row : rep.chi)
        chi.push_back({{"tau", row.tau},
                       {"q", row.q},
                       {"chi", row.est.chi},
                       {"chibar", row.est.chibar},
                       {"no_joint_exceedances", row.est.no_joint_exceedances}});
    return {{"uniformity",
             {{"statistic", rep.uniformity.statistic},
              {"p_raw", rep.uniformity.p_raw},
              {"p_bootstrap", rep.uniformity.p_bootstrap},
              {"n_extreme", rep.uniformity.n_extreme}}},
            {"ad", {{"statistic", rep.ad_all.statistic}, {"p_value", rep.ad_all.p_value}}},
            {"ad_monthly", monthly},
            {"block_trend",
             {{"slope", rep.block_trend.slope},
              {"p_value", rep.block_trend.p_value},
              {"block_quantiles", rep.block_trend.block_quantiles}}},
            {"chi", chi}};
}

json to_json(const PitSeries& pit) {
    json yearly = json::array();
    for (const auto& yp : pit.yearly)
        yearly.push_back({{"year", yp.year}, {"p", yp.p}, {"n", yp.n}});
    return {{"ks_statistic", pit.ks_statistic},
            {"ks_p", pit.ks_p},
            {"n", pit.u.size()},
            {"yearly", yearly}};
}

json to_json(const BootstrapResult& res) {
    json intervals = json::array();
    for (const auto& iv : res.intervals)
        intervals.push_back(
            {{"p", iv.p}, {"z_hat", iv.z_hat}, {"lo95", iv.lo95}, {"hi95", iv.hi95}});
    return {{"intervals", intervals},
            {"xi_reps", res.xi_reps},
            {"failures", res.failures},
            {"n_reps", res.n_reps}};
}

json to_json(const PpPlotData& pp) {
    json pts = json::array();
    for (const auto& pt : pp.points)
        pts.push_back({{"empirical", pt.empirical},
                       {"model", pt.model},
                       {"lo95", pt.lo95},
                       {"hi95", pt.hi95}});
    return {{"points", pts}};
}

json to_json(const ReturnLevelCurve& curve) {
    json pts = json::array();
    for (const auto& pt : curve.points)
        pts.push_back({{"p", pt.p}, {"return_period_years", 1.0 / pt.p}, {"z_metres", pt.z}});
    json out = {{"variant", to_string(curve.variant)}, {"points", pts}};
    if (curve.month) out["month"] = *curve.month;
    if (curve.year) out["year"] = *curve.year;
    return out;
}

json to_json(const SimTruth& truth) {
    json comps = json::array();
    for (const auto& c : truth.tide_components)
        comps.push_back({{"amplitude", c.amplitude},
                         {"period_days", c.period_days},
                         {"phase_days", c.phase_days}});
    return {{"tide_base", truth.tide_base},
            {"tide_components", comps},
            {"body_sd", truth.body_sd},
            {"threshold", truth.threshold},
            {"q_u", truth.q_u},
            {"tail_variant", to_string(truth.tail_spec.variant)},
            {"tail", tail_params_to_json(truth.tail)},
            {"rate_variant", to_string(truth.rate_variant)},
            {"rate", rate_params_to_json(truth.rate)},
            {"cluster_alpha", truth.cluster_alpha}};
}

SimTruth sim_truth_from_json(const json& j) {
    SimTruth t = default_sim_truth();
    if (j.contains("tide_base")) t.tide_base = j.at("tide_base").get<double>();
    if (j.contains("tide_components")) {
        t.tide_components.clear();
        for (const auto& c : j.at("tide_components"))
            t.tide_components.push_back({c.at("amplitude").get<double>(),
                                         c.at("period_days").get<double>(),
                                         c.value("phase_days", 0.0)});
    }
    if (j.contains("body_sd")) t.body_sd = j.at("body_sd").get<double>();
    if (j.contains("threshold")) t.threshold = j.at("threshold").get<double>();
    if (j.contains("q_u")) t.q_u = j.at("q_u").get<double>();
    if (j.contains("tail_variant"))
        t.tail_spec.variant = tail_variant_from_string(j.at("tail_variant").get<std::string>());
    if (j.contains("tail")) t.tail = tail_params_from_json(j.at("tail"));
    if (j.contains("rate_variant"))
        t.rate_variant = rate_variant_from_string(j.at("rate_variant").get<std::string>());
    if (j.contains("rate")) t.rate = rate_params_from_json(j.at("rate"));
    if (j.contains("cluster_alpha")) t.cluster_alpha = j.at("cluster_alpha").get<double>();
    t.validate();
    return t;
}

}  // namespace sealevel
