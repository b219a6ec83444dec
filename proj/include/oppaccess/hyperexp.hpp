#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oppaccess {

using Rng = std::mt19937_64;

/// Finite mixture of exponential laws, f(t) = sum_i w_i r_i exp(-r_i t).
///
/// Components are kept sorted by ascending rate. Weights below
/// kMinWeight are dropped at construction and the rest renormalized,
/// so every stored weight is strictly positive and they sum to one.
class HyperExpDist {
 public:
  static constexpr double kMinWeight = 1e-12;

  HyperExpDist(std::vector<double> weights, std::vector<double> rates);

  /// Single exponential with the given rate.
  static HyperExpDist exponential(double rate);

  std::size_t size() const { return rates_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& rates() const { return rates_; }

  /// True when two components share a rate; value_to_cost is then not
  /// strictly increasing.
  bool has_duplicate_rates() const { return duplicate_rates_; }
  /// True when every component has the same rate (the law is a plain
  /// exponential and value_to_cost is constant).
  bool is_single_rate() const;

  double pdf(double t) const;
  double cdf(double t) const;
  double ccdf(double t) const;

  /// (1 - F(t)) / f(t): expected access time gained per unit of collision
  /// probability spent at time t. Evaluated relative to the slowest
  /// component so it stays finite for large t.
  double value_to_cost(double t) const;

  double mean() const;
  /// sum_i w_i r_i, the density at the origin.
  double mean_rate() const;
  double min_rate() const { return rates_.front(); }
  double max_rate() const { return rates_.back(); }

  /// Integral of the survival function over [a, b]; b may be +inf.
  double survival_integral(double a, double b) const;
  /// Probability mass of [a, b]; b may be +inf.
  double mass(double a, double b) const;

  double sample(Rng& rng) const;
  std::vector<double> sample(Rng& rng, std::size_t count) const;

 private:
  std::vector<double> weights_;
  std::vector<double> rates_;
  std::vector<double> cumulative_;
  bool duplicate_rates_ = false;
};

bool operator==(const HyperExpDist& lhs, const HyperExpDist& rhs);

}  // namespace oppaccess
