#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oppaccess/hyperexp.hpp"
#include "oppaccess/smmpp.hpp"
#include "oppaccess/strategy.hpp"

namespace oppaccess {

/// Default confidence level of the multiple-shot waits, exp(-rate * wait) = epsilon.
inline constexpr double kDefaultEpsilon = 1e-3;

/// Every thresholded time is searched on [0, kTauBracketFactor / min rate];
/// a root beyond it is treated as an unbounded transmission.
inline constexpr double kTauBracketFactor = 50.0;

// All constructors take a collision budget eta in (0, 1) and throw
// DomainError otherwise.

Strategy always_transmit(PtsiMode mode = PtsiMode::statistical, std::size_t contexts = 1);
Strategy never_transmit(PtsiMode mode = PtsiMode::statistical, std::size_t contexts = 1);

/// Transmit from the start of the idle time for at most tau, F(tau) = eta.
/// Parameter "tau"; "tau_unbounded" is 1 when the cap fell outside the
/// solver bracket (the episode then never ends).
Strategy stat_one_shot(const HyperExpDist& d, double eta);

/// Stay silent until tau with 1 - F(tau) = eta, then transmit until the
/// primary returns.
Strategy stat_optimal(const HyperExpDist& d, double eta);

/// One-shot cap per previous state with equal conditional collision eta.
/// Also reports "capacity_small_eta", the linearized capacity
/// sum_i a_i eta / sum_j p_ij r_j.
Strategy markov_os_balanced(const SmmppModel& m, double eta);

/// Spends the budget on previous states in decreasing order of expected
/// next idle time: full access for whole states, a capped one-shot for the
/// state that exhausts the budget, silence elsewhere. Reports
/// "capacity_linearized" (capped state credited with a * tau).
Strategy markov_os_suboptimal(const SmmppModel& m, double eta);

/// Tail policy per previous state with equal conditional collision eta.
Strategy markov_opt_balanced(const SmmppModel& m, double eta);

/// Common value-to-cost threshold across previous states: each state
/// transmits where its conditional (1 - F_i)/f_i exceeds a*, with a*
/// chosen so that the aggregate collision equals eta. Reports "a_star".
Strategy markov_optimal(const SmmppModel& m, double eta);

/// One-shot per current state with 1 - exp(-r_i tau_i) = eta.
Strategy full_balanced(const SmmppModel& m, double eta);

/// Full access for the slowest states, a capped one-shot for the state
/// that exhausts the budget, silence for faster states. Reports
/// "capacity_small_eta".
Strategy full_optimal(const SmmppModel& m, double eta);

/// Weight-free schedule: [0, t_N], then for i = N-1..1 the episode
/// [e_{i+1}, e_{i+1} + t_i] with e_k = ln(1/epsilon)/r_k and
/// t_i = ln(1/(1-eta))/r_i. Rates must be strictly ascending and
/// 0 < epsilon < 1 - eta. Throws ConstructionError when two episodes
/// overlap.
Strategy multiple_shot(std::span<const double> rates, double eta, double epsilon = kDefaultEpsilon);

/// Small-eta capacity of the multiple-shot schedule under mixture `d`
/// (rates taken from `d`).
double multiple_shot_capacity_small_eta(const HyperExpDist& d, double eta,
                                        double epsilon = kDefaultEpsilon);

/// Names accepted by build_strategy, in presentation order.
const std::vector<std::string>& strategy_names();

/// Builds a strategy by name. The mixture used by statistical strategies
/// is the source's marginal; Markov and full strategies need a
/// Markov-modulated source.
Strategy build_strategy(std::string_view name, const TrafficSource& source, double eta,
                        double epsilon = kDefaultEpsilon);

}  // namespace oppaccess
