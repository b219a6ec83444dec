#include "oppaccess/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oppaccess/error.hpp"

namespace oppaccess {

namespace {

std::size_t draw_context(Rng& rng, const std::vector<double>& weights) {
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return pick(rng);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SimResult run(const IdleTrace& trace, const Strategy& s, const RunOptions& options) {
  s.validate();
  trace.validate();
  if (trace.size() == 0) throw DataError("trace is empty");
  if (options.window == 0) throw DomainError("window size must be at least one");
  const std::size_t n_contexts = s.contexts.size();
  if (s.mode != PtsiMode::statistical) {
    if (!trace.has_states()) {
      throw DataError(std::string(to_string(s.mode)) +
                      " PTSI needs a trace with state labels; state inference is not supported");
    }
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (trace.states[i] >= n_contexts) {
        throw DataError("state " + std::to_string(trace.states[i] + 1) + " at cycle " +
                        std::to_string(i + 1) + " exceeds the strategy's " +
                        std::to_string(n_contexts) + " contexts");
      }
    }
  }

  Rng rng(options.seed);
  SimResult out;
  out.cycles = trace.size();
  out.window = options.window;
  out.collided_flags.assign(trace.size(), 0);

  std::size_t previous_state = 0;
  if (s.mode == PtsiMode::markov) {
    std::vector<double> weights = options.initial_context_weights;
    if (weights.empty()) {
      weights.assign(n_contexts, 0.0);
      for (auto st : trace.states) weights[st] += 1.0;
    }
    if (weights.size() != n_contexts) {
      throw DomainError("initial context weights do not match the strategy's contexts");
    }
    previous_state = draw_context(rng, weights);
    out.initial_context = previous_state;
  }

  double access_sq = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double x = trace.durations[k];
    std::size_t context = 0;
    if (s.mode == PtsiMode::markov) {
      context = previous_state;
      previous_state = trace.states[k];
    } else if (s.mode == PtsiMode::full) {
      context = trace.states[k];
    }

    double access = 0.0;
    bool hit = false;
    for (const auto& ep : s.contexts[context]) {
      if (ep.start >= x) break;
      if (ep.probability < 1.0 &&
          !std::bernoulli_distribution(ep.probability)(rng)) {
        continue;
      }
      access += std::min(ep.end, x) - ep.start;
      if (x <= ep.end) {
        hit = true;
        break;
      }
    }
    out.total_access += access;
    access_sq += access * access;
    if (hit) {
      ++out.collided;
      out.collided_flags[k] = 1;
    }
  }

  const double n = static_cast<double>(out.cycles);
  out.capacity = out.total_access / n;
  out.collision = static_cast<double>(out.collided) / n;
  if (out.cycles > 1) {
    const double var = std::max(access_sq / n - out.capacity * out.capacity, 0.0) * n / (n - 1.0);
    out.capacity_std_error = std::sqrt(var / n);
  }
  out.collision_std_error = std::sqrt(out.collision * (1.0 - out.collision) / n);
  out.window_collision = window_collision_rates(out.collided_flags, options.window);
  if (options.eta && !out.window_collision.empty()) {
    out.outage = outage(out.window_collision, *options.eta);
  }
  return out;
}

std::vector<double> window_collision_rates(std::span<const std::uint8_t> collided, std::size_t window) {
  if (window == 0) throw DomainError("window size must be at least one");
  std::vector<double> rates;
  const std::size_t full = collided.size() / window;
  rates.reserve(full);
  for (std::size_t w = 0; w < full; ++w) {
    const auto first = collided.begin() + static_cast<std::ptrdiff_t>(w * window);
    const auto hits = std::accumulate(first, first + static_cast<std::ptrdiff_t>(window), std::size_t{0});
    rates.push_back(static_cast<double>(hits) / static_cast<double>(window));
  }
  return rates;
}

double outage(std::span<const double> window_rates, double eta) {
  if (window_rates.empty()) throw DataError("no complete window to evaluate outage on");
  const auto over = std::count_if(window_rates.begin(), window_rates.end(),
                                  [eta](double r) { return r > eta; });
  return static_cast<double>(over) / static_cast<double>(window_rates.size());
}

double outage(const SimResult& result, double eta, std::size_t window) {
  if (result.cycles == 0) throw DataError("empty simulation result");
  return outage(window_collision_rates(result.collided_flags, window), eta);
}

ComparisonReport compare(std::span<const Strategy> strategies, const IdleTrace& trace, double eta,
                         std::uint64_t seed, std::size_t window,
                         std::vector<double> initial_context_weights) {
  ComparisonReport report;
  report.eta = eta;
  report.window = window;
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    RunOptions options;
    options.seed = derive_seed(seed, k);
    options.window = window;
    options.eta = eta;
    if (strategies[k].mode == PtsiMode::markov) options.initial_context_weights = initial_context_weights;
    report.entries.push_back({strategies[k].name, run(trace, strategies[k], options)});
  }
  return report;
}

}  // namespace oppaccess
