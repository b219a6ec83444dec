#include "oppaccess/hyperexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oppaccess/error.hpp"

namespace oppaccess {

namespace {

constexpr double kWeightSumTolerance = 1e-6;

void check_time(double t) {
  if (!(t >= 0.0)) {
    throw DomainError("time must be non-negative, got " + std::to_string(t));
  }
}

}  // namespace

HyperExpDist::HyperExpDist(std::vector<double> weights, std::vector<double> rates) {
  if (weights.size() != rates.size()) {
    throw DomainError("weights and rates differ in length");
  }
  if (weights.empty()) {
    throw DomainError("mixture needs at least one component");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw DomainError("mixture weights must be finite and non-negative");
    }
    if (!std::isfinite(rates[i]) || rates[i] <= 0.0) {
      throw DomainError("mixture rates must be finite and positive");
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw DomainError("mixture weights must sum to one, got " + std::to_string(total));
  }

  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates[a] < rates[b]; });

  double kept = 0.0;
  for (auto i : order) {
    if (weights[i] / total < kMinWeight) continue;
    weights_.push_back(weights[i]);
    rates_.push_back(rates[i]);
    kept += weights[i];
  }
  if (weights_.empty()) {
    throw DomainError("every mixture weight is negligible");
  }
  for (auto& w : weights_) w /= kept;

  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  cumulative_.back() = 1.0;

  for (std::size_t i = 1; i < rates_.size(); ++i) {
    if (rates_[i] == rates_[i - 1]) duplicate_rates_ = true;
  }
}

HyperExpDist HyperExpDist::exponential(double rate) { return HyperExpDist({1.0}, {rate}); }

bool HyperExpDist::is_single_rate() const { return rates_.front() == rates_.back(); }

double HyperExpDist::pdf(double t) const {
  check_time(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    sum += weights_[i] * rates_[i] * std::exp(-rates_[i] * t);
  }
  return sum;
}

double HyperExpDist::ccdf(double t) const {
  check_time(t);
  if (std::isinf(t)) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    sum += weights_[i] * std::exp(-rates_[i] * t);
  }
  return sum;
}

double HyperExpDist::cdf(double t) const {
  check_time(t);
  if (std::isinf(t)) return 1.0;
  // 1 - sum w_i e^{-r_i t} == sum w_i (1 - e^{-r_i t}); the latter keeps
  // precision for small t.
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    sum += weights_[i] * -std::expm1(-rates_[i] * t);
  }
  return sum;
}

double HyperExpDist::value_to_cost(double t) const {
  check_time(t);
  const double slowest = rates_.front();
  if (std::isinf(t)) return 1.0 / slowest;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    const double e = weights_[i] * std::exp(-(rates_[i] - slowest) * t);
    num += e;
    den += e * rates_[i];
  }
  return num / den;
}

double HyperExpDist::mean() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) sum += weights_[i] / rates_[i];
  return sum;
}

double HyperExpDist::mean_rate() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) sum += weights_[i] * rates_[i];
  return sum;
}

double HyperExpDist::survival_integral(double a, double b) const {
  check_time(a);
  if (!(b >= a)) throw DomainError("integration interval is reversed");
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    const double r = rates_[i];
    // e^{-ra} - e^{-rb} = e^{-ra} (1 - e^{-r(b-a)})
    const double span = std::isinf(b) ? 1.0 : -std::expm1(-r * (b - a));
    sum += weights_[i] / r * std::exp(-r * a) * span;
  }
  return sum;
}

double HyperExpDist::mass(double a, double b) const {
  check_time(a);
  if (!(b >= a)) throw DomainError("integration interval is reversed");
  double sum = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    const double r = rates_[i];
    const double span = std::isinf(b) ? 1.0 : -std::expm1(-r * (b - a));
    sum += weights_[i] * std::exp(-r * a) * span;
  }
  return sum;
}

double HyperExpDist::sample(Rng& rng) const {
  std::size_t component = 0;
  if (rates_.size() > 1) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    component = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    component = std::min(component, rates_.size() - 1);
  }
  std::exponential_distribution<double> draw(rates_[component]);
  double x = draw(rng);
  while (x <= 0.0) x = draw(rng);
  return x;
}

std::vector<double> HyperExpDist::sample(Rng& rng, std::size_t count) const {
  std::vector<double> out(count);
  for (auto& x : out) x = sample(rng);
  return out;
}

bool operator==(const HyperExpDist& lhs, const HyperExpDist& rhs) {
  return lhs.weights() == rhs.weights() && lhs.rates() == rhs.rates();
}

}  // namespace oppaccess
