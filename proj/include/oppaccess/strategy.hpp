#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "oppaccess/hyperexp.hpp"
#include "oppaccess/smmpp.hpp"

namespace oppaccess {

inline constexpr double kForever = std::numeric_limits<double>::infinity();

/// How much the secondary user knows about the primary traffic state.
enum class PtsiMode {
  statistical,  // the idle-time mixture only; one context
  markov,       // the state of the previous idle time; N contexts
  full,         // the state generating the current idle time; N contexts
};

std::string_view to_string(PtsiMode mode);
PtsiMode ptsi_mode_from_string(std::string_view name);

/// While the channel has stayed idle since the start of the idle time, the
/// secondary user transmits over [start, end) and stops at the first
/// primary arrival. Whether it transmits at all in this episode is decided
/// once per cycle with `probability`.
struct Episode {
  double start = 0.0;
  double end = kForever;
  double probability = 1.0;
};

bool operator==(const Episode& lhs, const Episode& rhs);

/// Piecewise-constant transmit schedule for each conditioning context.
struct Strategy {
  std::string name;
  PtsiMode mode = PtsiMode::statistical;
  std::vector<std::vector<Episode>> contexts;
  /// Construction by-products worth reporting (solved thresholds,
  /// approximate capacity formulas, ...).
  std::vector<std::pair<std::string, double>> parameters;

  /// Throws DomainError unless episodes are start-sorted, disjoint and
  /// non-empty, with probabilities in (0, 1].
  void validate() const;
  double parameter(std::string_view key) const;
  bool has_parameter(std::string_view key) const;
};

bool operator==(const Strategy& lhs, const Strategy& rhs);

/// The law a strategy is evaluated against.
using TrafficSource = std::variant<HyperExpDist, SmmppModel>;

struct ContextPrediction {
  double weight = 0.0;  // probability of the context
  double capacity = 0.0;
  double collision = 0.0;
};

struct StrategyPrediction {
  double capacity = 0.0;   // mean access time per cycle, seconds
  double collision = 0.0;  // fraction of primary packets hit
  std::vector<ContextPrediction> contexts;
};

/// Closed-form capacity and collision probability of `s` under `source`.
///
/// A statistical strategy uses the idle-time marginal of the source. A
/// Markov-mode strategy conditions on the previous state and a full-mode
/// strategy on the current one; both need an SmmppModel with as many
/// states as the strategy has contexts (DomainError otherwise).
StrategyPrediction predict(const Strategy& s, const TrafficSource& source);

}  // namespace oppaccess
