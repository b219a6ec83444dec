#include "oppaccess/strategy.hpp"

#include <cmath>

#include "oppaccess/error.hpp"

namespace oppaccess {

std::string_view to_string(PtsiMode mode) {
  switch (mode) {
    case PtsiMode::statistical:
      return "stat";
    case PtsiMode::markov:
      return "markov";
    case PtsiMode::full:
      return "full";
  }
  return "unknown";
}

PtsiMode ptsi_mode_from_string(std::string_view name) {
  if (name == "stat" || name == "statistical") return PtsiMode::statistical;
  if (name == "markov") return PtsiMode::markov;
  if (name == "full") return PtsiMode::full;
  throw DomainError("unknown PTSI mode '" + std::string(name) + "'");
}

bool operator==(const Episode& lhs, const Episode& rhs) {
  return lhs.start == rhs.start && lhs.end == rhs.end && lhs.probability == rhs.probability;
}

bool operator==(const Strategy& lhs, const Strategy& rhs) {
  return lhs.name == rhs.name && lhs.mode == rhs.mode && lhs.contexts == rhs.contexts;
}

void Strategy::validate() const {
  if (contexts.empty()) throw DomainError("strategy has no contexts");
  if (mode == PtsiMode::statistical && contexts.size() != 1) {
    throw DomainError("statistical strategy must have exactly one context");
  }
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    double previous_end = 0.0;
    for (std::size_t e = 0; e < contexts[c].size(); ++e) {
      const auto& ep = contexts[c][e];
      const std::string where = "context " + std::to_string(c + 1) + " episode " + std::to_string(e + 1);
      if (!(ep.start >= 0.0) || !std::isfinite(ep.start)) {
        throw DomainError(where + ": start must be finite and non-negative");
      }
      if (!(ep.end > ep.start)) throw DomainError(where + ": end must exceed start");
      if (!(ep.probability > 0.0 && ep.probability <= 1.0)) {
        throw DomainError(where + ": probability must lie in (0, 1]");
      }
      if (e > 0 && ep.start < previous_end) {
        throw DomainError(where + ": overlaps the previous episode");
      }
      previous_end = ep.end;
    }
  }
}

bool Strategy::has_parameter(std::string_view key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return true;
  }
  return false;
}

double Strategy::parameter(std::string_view key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  throw DomainError("strategy " + name + " has no parameter '" + std::string(key) + "'");
}

namespace {

ContextPrediction evaluate(const std::vector<Episode>& episodes, const HyperExpDist& d, double weight) {
  ContextPrediction out;
  out.weight = weight;
  for (const auto& ep : episodes) {
    out.capacity += ep.probability * d.survival_integral(ep.start, ep.end);
    out.collision += ep.probability * d.mass(ep.start, ep.end);
  }
  return out;
}

}  // namespace

StrategyPrediction predict(const Strategy& s, const TrafficSource& source) {
  s.validate();
  StrategyPrediction out;
  if (s.mode == PtsiMode::statistical) {
    const HyperExpDist d = std::holds_alternative<HyperExpDist>(source)
                               ? std::get<HyperExpDist>(source)
                               : marginal_dist(std::get<SmmppModel>(source));
    out.contexts.push_back(evaluate(s.contexts[0], d, 1.0));
  } else {
    const auto* model = std::get_if<SmmppModel>(&source);
    if (model == nullptr) {
      throw DomainError(std::string(to_string(s.mode)) +
                        "-mode strategy needs a Markov-modulated source, not a mixture");
    }
    if (model->size() != s.contexts.size()) {
      throw DomainError("strategy has " + std::to_string(s.contexts.size()) +
                        " contexts but the model has " + std::to_string(model->size()) + " states");
    }
    for (std::size_t i = 0; i < model->size(); ++i) {
      const HyperExpDist d = s.mode == PtsiMode::markov
                                 ? conditional_next_dist(*model, i)
                                 : HyperExpDist::exponential(model->rates()[i]);
      out.contexts.push_back(evaluate(s.contexts[i], d, model->stationary()[i]));
    }
  }
  for (const auto& c : out.contexts) {
    out.capacity += c.weight * c.capacity;
    out.collision += c.weight * c.collision;
  }
  return out;
}

}  // namespace oppaccess
