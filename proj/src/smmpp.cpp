#include "oppaccess/smmpp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "oppaccess/error.hpp"

namespace oppaccess {

namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr double kStationaryTolerance = 1e-10;

std::size_t draw_index(Rng& rng, const std::vector<double>& cumulative) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto idx = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                      cumulative.begin());
  return std::min(idx, cumulative.size() - 1);
}

std::vector<double> cumulative_of(const std::vector<double>& weights) {
  std::vector<double> c(weights.size());
  std::partial_sum(weights.begin(), weights.end(), c.begin());
  c.back() = 1.0;
  return c;
}

double draw_duration(Rng& rng, double rate) {
  std::exponential_distribution<double> draw(rate);
  double x = draw(rng);
  while (x <= 0.0) x = draw(rng);
  return x;
}

void append_cycles(IdleTrace& trace, const SmmppModel& model, std::size_t n, Rng& rng) {
  std::vector<std::vector<double>> rows;
  rows.reserve(model.size());
  for (const auto& row : model.transitions()) rows.push_back(cumulative_of(row));

  std::size_t state = draw_index(rng, cumulative_of(model.stationary()));
  for (std::size_t k = 0; k < n; ++k) {
    trace.durations.push_back(draw_duration(rng, model.rates()[state]));
    trace.states.push_back(state);
    state = draw_index(rng, rows[state]);
  }
}

void append_cycles(IdleTrace& trace, const HyperExpDist& d, std::size_t n, Rng& rng) {
  const auto cumulative = cumulative_of(d.weights());
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t state = draw_index(rng, cumulative);
    trace.durations.push_back(draw_duration(rng, d.rates()[state]));
    trace.states.push_back(state);
  }
}

}  // namespace

std::vector<double> steady_state(const Matrix& transitions) {
  const std::size_t n = transitions.size();
  if (n == 0) throw ModelError("transition matrix is empty");
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (transitions[i].size() != n) throw ModelError("transition matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      // Row j of (P^T - I) is the j-th balance equation.
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          transitions[i][j] - (i == j ? 1.0 : 0.0);
    }
  }
  // The balance equations have rank n-1 for a chain with a unique
  // stationary vector; check before replacing one of them.
  Eigen::FullPivLU<Eigen::MatrixXd> balance(a);
  balance.setThreshold(1e-12);
  if (static_cast<std::size_t>(balance.rank()) != n - 1 && n > 1) {
    throw ModelError("stationary distribution is not unique (reducible chain)");
  }
  a.row(static_cast<Eigen::Index>(n - 1)).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  b(static_cast<Eigen::Index>(n - 1)) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw ModelError("stationary distribution is not unique (reducible chain)");
  }
  const Eigen::VectorXd x = lu.solve(b);

  std::vector<double> alpha(x.data(), x.data() + n);
  for (double v : alpha) {
    if (!(v > HyperExpDist::kMinWeight)) {
      throw ModelError("chain has transient states; stationary weights must be positive");
    }
  }
  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  for (auto& v : alpha) v /= total;

  for (std::size_t j = 0; j < n; ++j) {
    double flow = 0.0;
    for (std::size_t i = 0; i < n; ++i) flow += alpha[i] * transitions[i][j];
    if (std::abs(flow - alpha[j]) > kStationaryTolerance) {
      throw ModelError("stationary solve did not converge");
    }
  }
  return alpha;
}

SmmppModel::SmmppModel(std::vector<double> rates, Matrix transitions) {
  const std::size_t n = rates.size();
  if (n == 0) throw ModelError("model needs at least one state");
  if (transitions.size() != n) throw ModelError("transition matrix size does not match rates");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(rates[i]) || rates[i] <= 0.0) {
      throw ModelError("arrival rates must be finite and positive");
    }
    if (transitions[i].size() != n) throw ModelError("transition matrix is not square");
    double sum = 0.0;
    for (double p : transitions[i]) {
      if (!std::isfinite(p) || p < 0.0) {
        throw ModelError("transition probabilities must be finite and non-negative");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ModelError("row " + std::to_string(i + 1) + " of the transition matrix sums to " +
                       std::to_string(sum));
    }
    for (double& p : transitions[i]) p /= sum;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates[a] < rates[b]; });
  rates_.resize(n);
  transitions_.assign(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    rates_[i] = rates[order[i]];
    for (std::size_t j = 0; j < n; ++j) transitions_[i][j] = transitions[order[i]][order[j]];
  }
  stationary_ = steady_state(transitions_);
}

SmmppModel SmmppModel::from_mixture(const HyperExpDist& d) {
  return SmmppModel(d.rates(), Matrix(d.size(), d.weights()));
}

HyperExpDist marginal_dist(const SmmppModel& model) {
  return HyperExpDist(model.stationary(), model.rates());
}

HyperExpDist conditional_next_dist(const SmmppModel& model, std::size_t prev_state) {
  if (prev_state >= model.size()) {
    throw DomainError("state index " + std::to_string(prev_state) + " out of range");
  }
  return HyperExpDist(model.transitions()[prev_state], model.rates());
}

void IdleTrace::validate() const {
  if (!states.empty() && states.size() != durations.size()) {
    throw DataError("state labels do not cover every cycle");
  }
  for (std::size_t i = 0; i < durations.size(); ++i) {
    if (!(durations[i] > 0.0) || !std::isfinite(durations[i])) {
      throw DataError("idle duration at cycle " + std::to_string(i + 1) + " is not positive");
    }
  }
}

IdleTrace generate(const SmmppModel& model, std::size_t n_cycles, std::uint64_t seed) {
  return generate_nonstationary({ScheduleSegment{n_cycles, model}}, seed);
}

IdleTrace generate_nonstationary(const NonstationarySchedule& schedule, std::uint64_t seed) {
  if (schedule.empty()) throw DomainError("schedule has no segments");
  std::size_t total = 0;
  for (const auto& seg : schedule) {
    if (seg.cycles == 0) throw DomainError("schedule segment has zero cycles");
    total += seg.cycles;
  }
  IdleTrace trace;
  trace.durations.reserve(total);
  trace.states.reserve(total);
  Rng rng(seed);
  for (const auto& seg : schedule) {
    trace.segment_starts.push_back(trace.size());
    std::visit([&](const auto& source) { append_cycles(trace, source, seg.cycles, rng); },
               seg.source);
  }
  return trace;
}

}  // namespace oppaccess
