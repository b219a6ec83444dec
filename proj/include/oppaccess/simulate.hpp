#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oppaccess/smmpp.hpp"
#include "oppaccess/strategy.hpp"

namespace oppaccess {

inline constexpr std::size_t kDefaultWindow = 100;

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t window = kDefaultWindow;
  /// Collision budget used for the outage figure; outage is left unset
  /// when absent.
  std::optional<double> eta;
  /// Law of the conditioning state of the first cycle in Markov mode
  /// (normally the stationary vector). Empty means the trace's empirical
  /// state frequencies.
  std::vector<double> initial_context_weights;
};

struct SimResult {
  std::size_t cycles = 0;
  double total_access = 0.0;   // seconds
  double capacity = 0.0;       // seconds per cycle
  double capacity_std_error = 0.0;
  std::size_t collided = 0;
  double collision = 0.0;
  double collision_std_error = 0.0;
  std::size_t window = kDefaultWindow;
  std::vector<double> window_collision;  // collided / window for each full window
  std::optional<double> outage;
  std::optional<std::size_t> initial_context;  // Markov mode only
  std::vector<std::uint8_t> collided_flags;    // per cycle
};

/// Plays `s` against every cycle of `trace`.
///
/// The context of a cycle is 0 for statistical strategies, the previous
/// cycle's state in Markov mode, and the cycle's own state in full mode;
/// the latter two need a labeled trace (DataError otherwise). Within
/// context c, an episode [a, b) with a < X (X the idle duration) yields
/// min(b, X) - a of access time if its Bernoulli(p) draw succeeds, and
/// collides with the primary packet when a < X <= b.
SimResult run(const IdleTrace& trace, const Strategy& s, const RunOptions& options = {});

/// Collision rate of each full window of `window` consecutive cycles.
std::vector<double> window_collision_rates(std::span<const std::uint8_t> collided, std::size_t window);

/// Fraction of windows whose collision rate is strictly above eta.
double outage(std::span<const double> window_rates, double eta);
double outage(const SimResult& result, double eta, std::size_t window = kDefaultWindow);

struct ComparisonEntry {
  std::string name;
  SimResult result;
};

struct ComparisonReport {
  double eta = 0.0;
  std::size_t window = kDefaultWindow;
  std::vector<ComparisonEntry> entries;
};

/// Runs each strategy on the same trace. Strategy k draws its Bernoulli
/// decisions from a stream seeded by derive_seed(seed, k).
ComparisonReport compare(std::span<const Strategy> strategies, const IdleTrace& trace, double eta,
                         std::uint64_t seed, std::size_t window = kDefaultWindow,
                         std::vector<double> initial_context_weights = {});

/// Independent, reproducible sub-stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace oppaccess
