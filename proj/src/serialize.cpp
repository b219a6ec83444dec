#include "oppaccess/serialize.hpp"

#include <cmath>

#include "oppaccess/error.hpp"

namespace oppaccess {

using nlohmann::json;

namespace {

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' must be a list of numbers");
  }
}

}  // namespace

json to_json(const HyperExpDist& d) {
  return json{{"n", d.size()}, {"alphas", d.weights()}, {"lambdas", d.rates()}};
}

HyperExpDist distribution_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("distribution must be an object");
  const auto alphas = j.contains("alphas") ? numbers(j, "alphas") : numbers(j, "weights");
  const auto lambdas = j.contains("lambdas") ? numbers(j, "lambdas") : numbers(j, "rates");
  if (j.contains("n") && j.at("n").get<std::size_t>() != lambdas.size()) {
    throw ConfigError("distribution field 'n' disagrees with the number of rates");
  }
  return HyperExpDist(alphas, lambdas);
}

json to_json(const SmmppModel& m) {
  return json{{"rates", m.rates()}, {"transitions", m.transitions()}, {"stationary", m.stationary()}};
}

SmmppModel model_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model must be an object");
  if (j.contains("transitions")) {
    Matrix p;
    try {
      p = j.at("transitions").get<Matrix>();
    } catch (const json::exception&) {
      throw ConfigError("field 'transitions' must be a list of rows");
    }
    return SmmppModel(numbers(j, "rates"), p);
  }
  return SmmppModel::from_mixture(distribution_from_json(j));
}

TrafficSource source_from_json(const json& j) {
  if (j.is_object() && j.contains("transitions")) return model_from_json(j);
  return distribution_from_json(j);
}

json to_json(const Strategy& s) {
  json contexts = json::array();
  for (const auto& ctx : s.contexts) {
    json eps = json::array();
    for (const auto& e : ctx) {
      json end = std::isinf(e.end) ? json(nullptr) : json(e.end);
      eps.push_back(json{{"start", e.start}, {"end", end}, {"p", e.probability}});
    }
    contexts.push_back(std::move(eps));
  }
  json params = json::object();
  for (const auto& [k, v] : s.parameters) {
    params[k] = std::isfinite(v) ? json(v) : json(nullptr);
  }
  return json{{"name", s.name},
              {"mode", std::string(to_string(s.mode))},
              {"contexts", std::move(contexts)},
              {"parameters", std::move(params)}};
}

Strategy strategy_from_json(const json& j) {
  Strategy s;
  try {
    s.name = j.at("name").get<std::string>();
    s.mode = ptsi_mode_from_string(j.at("mode").get<std::string>());
    for (const auto& ctx : j.at("contexts")) {
      std::vector<Episode> eps;
      for (const auto& e : ctx) {
        Episode ep;
        ep.start = e.at("start").get<double>();
        ep.end = e.at("end").is_null() ? kForever : e.at("end").get<double>();
        ep.probability = e.value("p", 1.0);
        eps.push_back(ep);
      }
      s.contexts.push_back(std::move(eps));
    }
    if (j.contains("parameters")) {
      for (const auto& [k, v] : j.at("parameters").items()) {
        s.parameters.emplace_back(k, v.is_null() ? kForever : v.get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed strategy record: ") + e.what());
  }
  s.validate();
  return s;
}

json to_json(const FitResult& r) {
  json j = to_json(r.dist);
  j["log_likelihood"] = r.log_likelihood;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["dropped_components"] = r.dropped_components;
  j["merged_components"] = r.merged_components;
  j["warnings"] = r.warnings;
  return j;
}

json to_json(const TailDiagnostics& t) {
  return json{{"knee", t.knee},
              {"knee_index", t.knee_index},
              {"grid_size", t.grid_size},
              {"degenerate", t.degenerate()},
              {"pre_knee_slope", t.pre_knee_slope},
              {"post_knee_slope", t.post_knee_slope},
              {"pre_knee_r2", t.pre_knee_r2},
              {"post_knee_r2", t.post_knee_r2},
              {"residual", t.residual}};
}

}  // namespace oppaccess
