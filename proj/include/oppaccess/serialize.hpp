#pragma once

#include <json.hpp>

#include "oppaccess/fit.hpp"
#include "oppaccess/hyperexp.hpp"
#include "oppaccess/smmpp.hpp"
#include "oppaccess/strategy.hpp"

namespace oppaccess {

// JSON records. Infinite episode ends are written as null.
//
//   distribution: {"n": 2, "alphas": [...], "lambdas": [...]}
//   model:        {"rates": [...], "transitions": [[...], ...]}
//                 or a distribution record (i.i.d. states)
//   strategy:     {"name": ..., "mode": "stat|markov|full",
//                  "contexts": [[{"start": s, "end": e|null, "p": p}, ...], ...],
//                  "parameters": {...}}

nlohmann::json to_json(const HyperExpDist& d);
HyperExpDist distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SmmppModel& m);
/// Accepts {"rates", "transitions"}, {"rates", "weights"} or a distribution
/// record {"lambdas", "alphas"}.
SmmppModel model_from_json(const nlohmann::json& j);
/// Mixture records stay mixtures; transition-matrix records become models.
TrafficSource source_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Strategy& s);
Strategy strategy_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const TailDiagnostics& t);

}  // namespace oppaccess
