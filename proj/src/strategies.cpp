#include "oppaccess/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oppaccess/error.hpp"
#include "oppaccess/root_solver.hpp"

namespace oppaccess {

namespace {

// Thresholded times are solved to full double precision (the residual
// tolerance still applies) so that designed collisions are exact to ~1e-15.
constexpr RootOptions kTauSolve{0.0, 1e-15, 2000};

// A budget share this close to one is treated as the whole state.
constexpr double kWholeStateSlack = 1e-12;

void check_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw DomainError("collision budget eta must lie in (0, 1), got " + std::to_string(eta));
  }
}

double tau_bracket(const HyperExpDist& d) { return kTauBracketFactor / d.min_rate(); }

// Smallest tau with F(tau) = level; +inf when beyond the bracket.
double solve_cdf_level(const HyperExpDist& d, double level) {
  const double hi = tau_bracket(d);
  if (d.cdf(hi) < level) return kForever;
  return solve_root([&](double t) { return d.cdf(t); }, level, 0.0, hi, kTauSolve);
}

// tau with 1 - F(tau) = level; +inf when beyond the bracket.
double solve_ccdf_level(const HyperExpDist& d, double level) {
  const double hi = tau_bracket(d);
  if (d.ccdf(hi) > level) return kForever;
  return solve_root([&](double t) { return d.ccdf(t); }, level, 0.0, hi, kTauSolve);
}

// Exponential one-shot cap: 1 - exp(-rate tau) = level.
double exponential_cap(double rate, double level) { return -std::log1p(-level) / rate; }

std::vector<Episode> head(double tau) {
  if (!(tau > 0.0)) return {};
  return {Episode{0.0, tau, 1.0}};
}

std::vector<Episode> tail(double tau) {
  if (std::isinf(tau)) return {};
  return {Episode{tau, kForever, 1.0}};
}

std::vector<HyperExpDist> conditionals(const SmmppModel& m) {
  std::vector<HyperExpDist> out;
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back(conditional_next_dist(m, i));
  return out;
}

Strategy make(std::string name, PtsiMode mode) {
  Strategy s;
  s.name = std::move(name);
  s.mode = mode;
  return s;
}

// Collision spent by transmitting wherever value_to_cost > threshold.
struct ThresholdContext {
  const HyperExpDist* dist;
  double weight;
  bool flat;
  double ratio_at_zero;
  double ratio_limit;

  // Start of the transmit region for `threshold`: 0 for the whole idle
  // time, +inf for none.
  double start(double threshold) const {
    if (threshold < ratio_at_zero) return 0.0;
    if (flat || threshold >= ratio_limit) return kForever;
    const double hi = tau_bracket(*dist);
    if (dist->value_to_cost(hi) <= threshold) return kForever;
    return solve_root([this](double t) { return dist->value_to_cost(t); }, threshold, 0.0, hi,
                      RootOptions{0.0, 0.0, 2000});
  }

  double collision(double threshold) const {
    const double s = start(threshold);
    if (s == 0.0) return 1.0;
    if (std::isinf(s)) return 0.0;
    return dist->ccdf(s);
  }
};

}  // namespace

Strategy always_transmit(PtsiMode mode, std::size_t contexts) {
  Strategy s = make("always_transmit", mode);
  s.contexts.assign(contexts, {Episode{0.0, kForever, 1.0}});
  s.validate();
  return s;
}

Strategy never_transmit(PtsiMode mode, std::size_t contexts) {
  Strategy s = make("never_transmit", mode);
  s.contexts.assign(contexts, {});
  s.validate();
  return s;
}

Strategy stat_one_shot(const HyperExpDist& d, double eta) {
  check_eta(eta);
  Strategy s = make("stat_one_shot", PtsiMode::statistical);
  const double tau = solve_cdf_level(d, eta);
  s.contexts.push_back(head(tau));
  s.parameters = {{"tau", tau},
                  {"tau_small_eta", eta / d.mean_rate()},
                  {"tau_unbounded", std::isinf(tau) ? 1.0 : 0.0}};
  return s;
}

Strategy stat_optimal(const HyperExpDist& d, double eta) {
  check_eta(eta);
  Strategy s = make("stat_optimal", PtsiMode::statistical);
  const double tau = solve_ccdf_level(d, eta);
  s.contexts.push_back(tail(tau));
  s.parameters = {{"tau", tau}};
  return s;
}

Strategy markov_os_balanced(const SmmppModel& m, double eta) {
  check_eta(eta);
  Strategy s = make("markov_os_balanced", PtsiMode::markov);
  double approx = 0.0;
  const auto conds = conditionals(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double tau = solve_cdf_level(conds[i], eta);
    s.contexts.push_back(head(tau));
    s.parameters.emplace_back("tau_" + std::to_string(i + 1), tau);
    approx += m.stationary()[i] * eta / conds[i].mean_rate();
  }
  s.parameters.emplace_back("capacity_small_eta", approx);
  return s;
}

Strategy markov_os_suboptimal(const SmmppModel& m, double eta) {
  check_eta(eta);
  Strategy s = make("markov_os_suboptimal", PtsiMode::markov);
  const auto conds = conditionals(m);
  const auto& alpha = m.stationary();
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), 0);
  // Largest expected next idle time (sum_j p_ij / r_j) first.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return conds[a].mean() > conds[b].mean();
  });

  s.contexts.assign(m.size(), {});
  double spent = 0.0;
  double linearized = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (spent + alpha[i] < eta) {
      s.contexts[i] = {Episode{0.0, kForever, 1.0}};
      spent += alpha[i];
      linearized += alpha[i] * conds[i].mean();
      continue;
    }
    const double share = (eta - spent) / alpha[i];
    if (share >= 1.0 - kWholeStateSlack) {
      s.contexts[i] = {Episode{0.0, kForever, 1.0}};
      linearized += alpha[i] * conds[i].mean();
    } else {
      const double tau = solve_cdf_level(conds[i], share);
      if (!(tau > 0.0)) {
        throw ConstructionError("collision budget too small to resolve a transmit duration");
      }
      s.contexts[i] = head(tau);
      linearized += alpha[i] * tau;
      s.parameters.emplace_back("capped_state", static_cast<double>(i + 1));
      s.parameters.emplace_back("tau", tau);
    }
    s.parameters.emplace_back("full_states", static_cast<double>(k));
    break;
  }
  s.parameters.emplace_back("capacity_linearized", linearized);
  return s;
}

Strategy markov_opt_balanced(const SmmppModel& m, double eta) {
  check_eta(eta);
  Strategy s = make("markov_opt_balanced", PtsiMode::markov);
  const auto conds = conditionals(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double tau = solve_ccdf_level(conds[i], eta);
    s.contexts.push_back(tail(tau));
    s.parameters.emplace_back("tau_" + std::to_string(i + 1), tau);
  }
  return s;
}

Strategy markov_optimal(const SmmppModel& m, double eta) {
  check_eta(eta);
  Strategy s = make("markov_optimal", PtsiMode::markov);
  const auto conds = conditionals(m);
  std::vector<ThresholdContext> ctx;
  double lo = kForever;
  double hi = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& d = conds[i];
    ThresholdContext c{&d, m.stationary()[i], d.is_single_rate(), d.value_to_cost(0.0),
                       1.0 / d.min_rate()};
    lo = std::min(lo, c.ratio_at_zero);
    hi = std::max(hi, c.ratio_limit);
    ctx.push_back(c);
  }
  auto spent = [&](double threshold) {
    double total = 0.0;
    for (const auto& c : ctx) total += c.weight * c.collision(threshold);
    return total;
  };

  // a* = inf{a : spent(a) <= eta}. spent() is nonincreasing, equals one
  // below every ratio at zero and zero at the largest ratio limit.
  lo = std::nextafter(lo, 0.0);
  while (true) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (spent(mid) > eta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double a_star = hi;

  // lo and hi are now adjacent doubles. Contexts whose collision jumps
  // between them have a ratio that is flat at a* (exactly, or to machine
  // precision); they share the leftover budget in proportion to the jump,
  // each as a tail episode. This is the randomized p* regime.
  const double spent_hi = spent(hi);
  const double gap = spent(lo) - spent_hi;
  const double theta = gap > 0.0 ? std::clamp((eta - spent_hi) / gap, 0.0, 1.0) : 0.0;
  for (const auto& c : ctx) {
    const double c_hi = c.collision(hi);
    const double jump = c.collision(lo) - c_hi;
    if (jump <= 0.0) {
      const double st = c.start(hi);
      s.contexts.push_back(st == 0.0 ? std::vector<Episode>{Episode{0.0, kForever, 1.0}} : tail(st));
      continue;
    }
    const double target = c_hi + theta * jump;
    if (target >= 1.0 - kWholeStateSlack) {
      s.contexts.push_back({Episode{0.0, kForever, 1.0}});
    } else if (target > 0.0) {
      s.contexts.push_back(tail(solve_ccdf_level(*c.dist, target)));
    } else {
      s.contexts.push_back({});
    }
  }
  s.parameters = {{"a_star", a_star}};
  return s;
}

Strategy full_balanced(const SmmppModel& m, double eta) {
  check_eta(eta);
  Strategy s = make("full_balanced", PtsiMode::full);
  double approx = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double tau = exponential_cap(m.rates()[i], eta);
    s.contexts.push_back(head(tau));
    s.parameters.emplace_back("tau_" + std::to_string(i + 1), tau);
    approx += m.stationary()[i] / m.rates()[i] * eta;
  }
  s.parameters.emplace_back("capacity_small_eta", approx);
  return s;
}

Strategy full_optimal(const SmmppModel& m, double eta) {
  check_eta(eta);
  Strategy s = make("full_optimal", PtsiMode::full);
  const auto& alpha = m.stationary();
  const auto& rates = m.rates();
  s.contexts.assign(m.size(), {});
  double spent = 0.0;
  double approx = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (spent + alpha[i] < eta) {
      s.contexts[i] = {Episode{0.0, kForever, 1.0}};
      spent += alpha[i];
      approx += alpha[i] / rates[i];
      continue;
    }
    // The capped state gets exactly the budget that is left.
    const double share = (eta - spent) / alpha[i];
    if (share >= 1.0 - kWholeStateSlack) {
      s.contexts[i] = {Episode{0.0, kForever, 1.0}};
    } else {
      const double tau = exponential_cap(rates[i], share);
      s.contexts[i] = head(tau);
      s.parameters.emplace_back("tau", tau);
    }
    approx += (eta - spent) / rates[i];
    s.parameters.emplace_back("full_states", static_cast<double>(i));
    break;
  }
  s.parameters.emplace_back("capacity_small_eta", approx);
  return s;
}

Strategy multiple_shot(std::span<const double> rates, double eta, double epsilon) {
  check_eta(eta);
  if (rates.empty()) throw DomainError("multiple-shot strategy needs at least one rate");
  if (!(epsilon > 0.0 && epsilon < 1.0 - eta)) {
    throw DomainError("epsilon must lie in (0, 1 - eta), got " + std::to_string(epsilon));
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) {
      throw DomainError("rates must be finite and positive");
    }
    if (i > 0 && !(rates[i] > rates[i - 1])) {
      throw DomainError("multiple-shot rates must be strictly ascending");
    }
  }

  Strategy s = make("multiple_shot", PtsiMode::statistical);
  const double confidence = std::log(1.0 / epsilon);
  const double budget = -std::log1p(-eta);
  const std::size_t n = rates.size();
  std::vector<Episode> episodes;
  episodes.push_back(Episode{0.0, budget / rates[n - 1], 1.0});
  for (std::size_t i = n - 1; i-- > 0;) {
    const double start = confidence / rates[i + 1];
    const double end = start + budget / rates[i];
    const auto& previous = episodes.back();
    if (start < previous.end) {
      std::ostringstream msg;
      msg << "episode for rate " << rates[i] << " starts at " << start
          << " before the episode for rate " << rates[i + 1] << " ends at " << previous.end
          << "; rates are too close for eta=" << eta << ", epsilon=" << epsilon;
      throw ConstructionError(msg.str());
    }
    episodes.push_back(Episode{start, end, 1.0});
  }
  s.contexts.push_back(std::move(episodes));
  s.parameters = {{"epsilon", epsilon}};
  return s;
}

double multiple_shot_capacity_small_eta(const HyperExpDist& d, double eta, double epsilon) {
  check_eta(eta);
  const auto& r = d.rates();
  const auto& a = d.weights();
  const std::size_t n = r.size();
  const double confidence = std::log(1.0 / epsilon);
  double total = eta / r[n - 1];
  for (std::size_t j = 0; j + 1 < n; ++j) {
    for (std::size_t i = j; i + 1 < n; ++i) {
      total += a[j] * std::exp(-r[j] * confidence / r[i + 1]) * eta / r[i];
    }
  }
  return total;
}

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{
      "stat_one_shot",      "stat_optimal",  "markov_os_balanced", "markov_os_suboptimal",
      "markov_opt_balanced", "markov_optimal", "full_balanced",      "full_optimal",
      "multiple_shot"};
  return names;
}

Strategy build_strategy(std::string_view name, const TrafficSource& source, double eta, double epsilon) {
  const SmmppModel model = std::holds_alternative<SmmppModel>(source)
                               ? std::get<SmmppModel>(source)
                               : SmmppModel::from_mixture(std::get<HyperExpDist>(source));
  const HyperExpDist mixture = marginal_dist(model);
  if (name == "stat_one_shot") return stat_one_shot(mixture, eta);
  if (name == "stat_optimal") return stat_optimal(mixture, eta);
  if (name == "markov_os_balanced") return markov_os_balanced(model, eta);
  if (name == "markov_os_suboptimal") return markov_os_suboptimal(model, eta);
  if (name == "markov_opt_balanced") return markov_opt_balanced(model, eta);
  if (name == "markov_optimal") return markov_optimal(model, eta);
  if (name == "full_balanced") return full_balanced(model, eta);
  if (name == "full_optimal") return full_optimal(model, eta);
  if (name == "multiple_shot") return multiple_shot(mixture.rates(), eta, epsilon);
  if (name == "always_transmit") return always_transmit();
  if (name == "never_transmit") return never_transmit();
  throw DomainError("unknown strategy '" + std::string(name) + "'");
}

}  // namespace oppaccess
