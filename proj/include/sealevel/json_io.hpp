#pragma once

#include <json.hpp>

#include "sealevel/dependence.hpp"
#include "sealevel/exi.hpp"
#include "sealevel/maxima.hpp"
#include "sealevel/simulate.hpp"
#include "sealevel/surge_model.hpp"
#include "sealevel/uncertainty.hpp"

namespace sealevel {

// Round-trip model serialization: a written model reloads to one that
// evaluates identically (cdf/pdf/quantile and theta curves).
nlohmann::json to_json(const SurgeModel& m);
SurgeModel surge_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExiModel& m);
ExiModel exi_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PipelineFit& fit);
PipelineFit pipeline_fit_from_json(const nlohmann::json& j);

// Report serialization (one way).
nlohmann::json to_json(const TailFit& fit);
nlohmann::json to_json(const RateFit& fit);
nlohmann::json to_json(const DependenceReport& rep);
nlohmann::json to_json(const PitSeries& pit);
nlohmann::json to_json(const BootstrapResult& res);
nlohmann::json to_json(const PpPlotData& pp);
nlohmann::json to_json(const ReturnLevelCurve& curve);

// Simulation truth configuration.
nlohmann::json to_json(const SimTruth& truth);
SimTruth sim_truth_from_json(const nlohmann::json& j);

}  // namespace sealevel
