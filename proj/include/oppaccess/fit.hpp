#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oppaccess/hyperexp.hpp"

namespace oppaccess {

struct FitOptions {
  double tolerance = 1e-8;       // relative log-likelihood change
  std::size_t max_iterations = 2000;
  double merge_tolerance = 0.05;  // relative gap under which two rates are merged
};

struct FitResult {
  HyperExpDist dist;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Log-likelihood at the start of every EM iteration, followed by the
  /// value after the final M-step.
  std::vector<double> log_likelihood_history;
  bool dropped_components = false;
  bool merged_components = false;
  std::vector<std::string> warnings;
};

/// Equal weights and rates spread log-uniformly between 1/max(x) and 1/min(x).
HyperExpDist default_em_init(std::span<const double> samples, std::size_t n_components);

/// Equal weights, rates 1/q at the sample quantiles (k - 1/2)/N, slowest first.
HyperExpDist quantile_em_init(std::span<const double> samples, std::size_t n_components);

double log_likelihood(const HyperExpDist& d, std::span<const double> samples);

/// Maximum-likelihood hyper-exponential fit by expectation-maximization.
/// Without `init`, EM runs from both default_em_init and quantile_em_init
/// and the higher final likelihood wins.
///
/// Requires n_components >= 1 and at least 10 samples per component, all
/// strictly positive (DataError otherwise). Components whose total
/// responsibility vanishes are dropped; rates that end within
/// `merge_tolerance` of each other are merged into one component holding
/// the summed weight. Both events are flagged in the result.
FitResult em_fit(std::span<const double> samples, std::size_t n_components,
                 const std::optional<HyperExpDist>& init = std::nullopt,
                 const FitOptions& options = {});

/// Two-regime description of an empirical CCDF: power law (straight on
/// log-log axes) below the knee, exponential (straight on linear-log
/// axes) above it.
struct TailDiagnostics {
  double knee = 0.0;
  std::size_t knee_index = 0;  // position in the candidate grid; 0 is the left boundary
  std::size_t grid_size = 0;
  double pre_knee_slope = 0.0;   // d log S / d log t
  double post_knee_slope = 0.0;  // d log S / d t, about minus the tail rate
  double pre_knee_r2 = 1.0;
  double post_knee_r2 = 1.0;
  double residual = 0.0;  // combined sum of squared residuals at the chosen knee

  bool degenerate() const { return knee_index == 0; }
};

inline constexpr std::size_t kKneeGridSize = 50;

TailDiagnostics tail_diagnostics(std::span<const double> samples);

struct ParameterSummary {
  std::string name;
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  double iqr() const { return q3 - q1; }
};

struct GroupFit {
  std::size_t index = 0;
  std::size_t first_sample = 0;
  std::optional<FitResult> result;
  std::string error;  // set when the group could not be fitted
};

struct WindowedFit {
  std::vector<GroupFit> groups;
  /// alpha_1..alpha_N then lambda_1..lambda_N, over groups that kept all
  /// N components.
  std::vector<ParameterSummary> summary;
};

/// Fits consecutive, non-overlapping groups of `group_size` samples;
/// a trailing partial group is ignored.
WindowedFit windowed_fit(std::span<const double> samples, std::size_t group_size,
                         std::size_t n_components, const FitOptions& options = {});

/// Min, quartiles (linear interpolation) and max of `values`.
ParameterSummary summarize(std::string name, std::vector<double> values);

}  // namespace oppaccess
