#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "oppaccess/hyperexp.hpp"

namespace oppaccess {

using Matrix = std::vector<std::vector<double>>;

/// Stationary vector of a row-stochastic matrix, from the linear system
/// a (P - I) = 0, sum(a) = 1. Throws ModelError unless the solution is
/// unique and strictly positive.
std::vector<double> steady_state(const Matrix& transitions);

/// Semi-Markov-modulated Poisson source. The arrival rate switches among
/// `rates()` at cycle boundaries: each idle time is exponential with the
/// rate of the current state, then one transition of the chain is drawn.
class SmmppModel {
 public:
  /// Rates may be given in any order; states are re-indexed so that rates
  /// ascend, permuting the transition matrix accordingly.
  SmmppModel(std::vector<double> rates, Matrix transitions);

  /// A source with i.i.d. states: every row of the matrix equals `d.weights()`.
  static SmmppModel from_mixture(const HyperExpDist& d);

  std::size_t size() const { return rates_.size(); }
  const std::vector<double>& rates() const { return rates_; }
  const Matrix& transitions() const { return transitions_; }
  const std::vector<double>& stationary() const { return stationary_; }

 private:
  std::vector<double> rates_;
  Matrix transitions_;
  std::vector<double> stationary_;
};

/// Law of an idle time with the state drawn from the stationary vector.
HyperExpDist marginal_dist(const SmmppModel& model);

/// Law of the next idle time given that the previous one came from
/// `prev_state` (0-based).
HyperExpDist conditional_next_dist(const SmmppModel& model, std::size_t prev_state);

/// Idle-time durations with optional generating-state labels (0-based).
struct IdleTrace {
  std::vector<double> durations;
  std::vector<std::size_t> states;          // empty when unlabeled
  std::vector<std::size_t> segment_starts;  // cycle index where each segment begins

  std::size_t size() const { return durations.size(); }
  bool has_states() const { return !states.empty(); }
  /// Throws DataError on non-positive durations or a label column of the
  /// wrong length.
  void validate() const;
};

IdleTrace generate(const SmmppModel& model, std::size_t n_cycles, std::uint64_t seed);

struct ScheduleSegment {
  std::size_t cycles = 0;
  std::variant<SmmppModel, HyperExpDist> source;
};

using NonstationarySchedule = std::vector<ScheduleSegment>;

/// Concatenated traces of the schedule's segments, drawn from a single
/// random stream. Each segment starts from its own stationary state.
IdleTrace generate_nonstationary(const NonstationarySchedule& schedule, std::uint64_t seed);

}  // namespace oppaccess
