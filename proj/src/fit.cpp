#include "oppaccess/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "oppaccess/error.hpp"

namespace oppaccess {

namespace {

constexpr double kCollapsedWeight = 1e-9;

void check_samples(std::span<const double> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] > 0.0) || !std::isfinite(samples[i])) {
      throw DataError("sample " + std::to_string(i + 1) + " is not a positive finite duration");
    }
  }
}

// Fills terms[k] = w_k r_k exp(-r_k x) scaled by a common factor and
// returns log f(x). Falls back to log-sum-exp when the direct sum underflows.
double mixture_terms(const std::vector<double>& w, const std::vector<double>& r, double x,
                     std::vector<double>& terms) {
  const std::size_t n = w.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    terms[k] = w[k] * r[k] * std::exp(-r[k] * x);
    sum += terms[k];
  }
  if (sum > std::numeric_limits<double>::min()) return std::log(sum);

  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    terms[k] = w[k] > 0.0 ? std::log(w[k] * r[k]) - r[k] * x : -std::numeric_limits<double>::infinity();
    peak = std::max(peak, terms[k]);
  }
  sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    terms[k] = std::exp(terms[k] - peak);
    sum += terms[k];
  }
  return peak + std::log(sum);
}

struct Components {
  std::vector<double> weights;
  std::vector<double> rates;

  std::size_t size() const { return rates.size(); }

  void erase(std::size_t k) {
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(k));
    rates.erase(rates.begin() + static_cast<std::ptrdiff_t>(k));
  }

  void renormalize() {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (auto& w : weights) w /= total;
  }
};

// Merges neighbouring (rate-sorted) components closer than `tolerance`.
bool merge_close_rates(Components& c, double tolerance) {
  bool merged = false;
  std::size_t k = 0;
  while (k + 1 < c.size()) {
    const double lo = c.rates[k];
    const double hi = c.rates[k + 1];
    if ((hi - lo) / lo <= tolerance) {
      const double w = c.weights[k] + c.weights[k + 1];
      // Rate of the pooled M-step: total responsibility over total
      // responsibility-weighted duration.
      c.rates[k] = w / (c.weights[k] / lo + c.weights[k + 1] / hi);
      c.weights[k] = w;
      c.erase(k + 1);
      merged = true;
    } else {
      ++k;
    }
  }
  return merged;
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Running sums for ordinary least squares on a contiguous range.
struct LineSums {
  std::vector<double> n, x, y, xx, xy, yy;

  LineSums(std::span<const double> xs, std::span<const double> ys)
      : n(xs.size() + 1), x(xs.size() + 1), y(xs.size() + 1), xx(xs.size() + 1),
        xy(xs.size() + 1), yy(xs.size() + 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      n[i + 1] = n[i] + 1.0;
      x[i + 1] = x[i] + xs[i];
      y[i + 1] = y[i] + ys[i];
      xx[i + 1] = xx[i] + xs[i] * xs[i];
      xy[i + 1] = xy[i] + xs[i] * ys[i];
      yy[i + 1] = yy[i] + ys[i] * ys[i];
    }
  }

  struct Line {
    double slope = 0.0;
    double sse = 0.0;
    double r2 = 1.0;
  };

  // Fit over [b, e).
  Line fit(std::size_t b, std::size_t e) const {
    Line out;
    const double m = n[e] - n[b];
    if (m < 2.0) return out;
    const double sx = x[e] - x[b];
    const double sy = y[e] - y[b];
    const double sxx = (xx[e] - xx[b]) - sx * sx / m;
    const double sxy = (xy[e] - xy[b]) - sx * sy / m;
    const double syy = (yy[e] - yy[b]) - sy * sy / m;
    if (sxx <= 0.0) {
      out.sse = std::max(syy, 0.0);
      return out;
    }
    out.slope = sxy / sxx;
    out.sse = std::max(syy - sxy * sxy / sxx, 0.0);
    out.r2 = syy > 0.0 ? 1.0 - out.sse / syy : 1.0;
    return out;
  }
};

}  // namespace

HyperExpDist default_em_init(std::span<const double> samples, std::size_t n_components) {
  if (samples.empty()) throw DataError("no samples");
  if (n_components == 0) throw DomainError("component count must be at least one");
  check_samples(samples);
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double slow = 1.0 / *hi_it;
  const double fast = 1.0 / *lo_it;
  std::vector<double> rates(n_components);
  std::vector<double> weights(n_components, 1.0 / static_cast<double>(n_components));
  if (n_components == 1) {
    rates[0] = std::sqrt(slow * fast);
  } else {
    const double step = std::log(fast / slow) / static_cast<double>(n_components - 1);
    for (std::size_t k = 0; k < n_components; ++k) {
      rates[k] = slow * std::exp(step * static_cast<double>(k));
    }
    // Keep the rates distinct when every sample has the same value.
    for (std::size_t k = 1; k < n_components; ++k) {
      rates[k] = std::max(rates[k], rates[k - 1] * 1.5);
    }
  }
  return HyperExpDist(std::move(weights), std::move(rates));
}

double log_likelihood(const HyperExpDist& d, std::span<const double> samples) {
  std::vector<double> terms(d.size());
  double ll = 0.0;
  for (double x : samples) ll += mixture_terms(d.weights(), d.rates(), x, terms);
  return ll;
}

HyperExpDist quantile_em_init(std::span<const double> samples, std::size_t n_components) {
  if (samples.empty()) throw DataError("no samples");
  if (n_components == 0) throw DomainError("component count must be at least one");
  check_samples(samples);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(n_components);
  std::vector<double> rates(n_components);
  for (std::size_t k = 0; k < n_components; ++k) {
    rates[k] = 1.0 / quantile_sorted(sorted, 1.0 - (static_cast<double>(k) + 0.5) / n);
  }
  for (std::size_t k = 1; k < n_components; ++k) rates[k] = std::max(rates[k], rates[k - 1] * 1.5);
  return HyperExpDist(std::vector<double>(n_components, 1.0 / n), std::move(rates));
}

namespace {

FitResult fit_from(std::span<const double> samples, const HyperExpDist& start, const FitOptions& options) {
  Components c{start.weights(), start.rates()};
  FitResult out{start, 0.0, 0, false, {}, false, false, {}};
  const double n = static_cast<double>(samples.size());

  std::vector<double> terms;
  std::vector<double> resp_sum;
  std::vector<double> resp_x;
  double previous = 0.0;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    const std::size_t k_count = c.size();
    terms.assign(k_count, 0.0);
    resp_sum.assign(k_count, 0.0);
    resp_x.assign(k_count, 0.0);
    double ll = 0.0;
    for (double x : samples) {
      ll += mixture_terms(c.weights, c.rates, x, terms);
      double total = 0.0;
      for (double t : terms) total += t;
      for (std::size_t k = 0; k < k_count; ++k) {
        const double r = terms[k] / total;
        resp_sum[k] += r;
        resp_x[k] += r * x;
      }
    }
    out.log_likelihood_history.push_back(ll);
    out.iterations = iter + 1;

    if (iter > 0 && std::abs(ll - previous) <= options.tolerance * std::abs(previous)) {
      out.converged = true;
      break;
    }
    previous = ll;

    // M-step.
    for (std::size_t k = k_count; k-- > 0;) {
      if (resp_sum[k] / n < kCollapsedWeight || !(resp_x[k] > 0.0)) {
        if (c.size() == 1) throw DataError("EM collapsed every component");
        c.erase(k);
        resp_sum.erase(resp_sum.begin() + static_cast<std::ptrdiff_t>(k));
        resp_x.erase(resp_x.begin() + static_cast<std::ptrdiff_t>(k));
        out.dropped_components = true;
      }
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
      c.weights[k] = resp_sum[k] / n;
      c.rates[k] = resp_sum[k] / resp_x[k];
    }
    c.renormalize();
  }
  if (out.dropped_components) {
    out.warnings.push_back("components with vanishing responsibility were dropped");
  }

  // Canonical order; components the mixture itself discards are reported too.
  HyperExpDist fitted(c.weights, c.rates);
  if (fitted.size() < c.size()) out.dropped_components = true;
  Components sorted{fitted.weights(), fitted.rates()};
  if (merge_close_rates(sorted, options.merge_tolerance)) {
    out.merged_components = true;
    out.warnings.push_back("rates within " + std::to_string(options.merge_tolerance * 100.0) +
                           "% of each other were merged");
    sorted.renormalize();
    fitted = HyperExpDist(sorted.weights, sorted.rates);
  }
  out.dist = fitted;
  out.log_likelihood = log_likelihood(out.dist, samples);
  if (!out.merged_components) out.log_likelihood_history.push_back(out.log_likelihood);
  if (!out.converged) out.warnings.push_back("EM stopped at the iteration limit");
  return out;
}

}  // namespace

FitResult em_fit(std::span<const double> samples, std::size_t n_components,
                 const std::optional<HyperExpDist>& init, const FitOptions& options) {
  if (n_components == 0) throw DomainError("component count must be at least one");
  if (samples.size() < 10 * n_components) {
    throw DataError("need at least " + std::to_string(10 * n_components) + " samples for " +
                    std::to_string(n_components) + " components, got " +
                    std::to_string(samples.size()));
  }
  check_samples(samples);
  if (init) {
    if (init->size() != n_components) {
      throw DomainError("initial mixture has " + std::to_string(init->size()) +
                        " components, expected " + std::to_string(n_components));
    }
    return fit_from(samples, *init, options);
  }
  FitResult a = fit_from(samples, default_em_init(samples, n_components), options);
  if (n_components == 1) return a;
  FitResult b = fit_from(samples, quantile_em_init(samples, n_components), options);
  return b.log_likelihood > a.log_likelihood ? b : a;
}

TailDiagnostics tail_diagnostics(std::span<const double> samples) {
  if (samples.size() < 1000) {
    throw DataError("tail diagnostics need at least 1000 samples, got " +
                    std::to_string(samples.size()));
  }
  check_samples(samples);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Drop the top 0.1% so single extreme samples cannot steer the fits.
  const auto trimmed = static_cast<std::size_t>(std::ceil(0.001 * static_cast<double>(n)));
  const std::size_t m = n - trimmed;

  std::vector<double> t(m), log_t(m), log_s(m);
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = sorted[i];
    log_t[i] = std::log(sorted[i]);
    // Fraction of samples strictly beyond the i-th order statistic.
    log_s[i] = std::log(static_cast<double>(n - 1 - i) / static_cast<double>(n));
  }
  const LineSums power_law(log_t, log_s);
  const LineSums exponential(t, log_s);

  const double lo = quantile_sorted(t, 0.01);
  const double hi = quantile_sorted(t, 0.99);
  TailDiagnostics best;
  best.grid_size = kKneeGridSize;
  best.residual = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < kKneeGridSize; ++g) {
    const double knee =
        lo * std::pow(hi / lo, static_cast<double>(g) / static_cast<double>(kKneeGridSize - 1));
    const auto split =
        static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), knee) - t.begin());
    const auto pre = power_law.fit(0, split);
    const auto post = exponential.fit(split, m);
    const double sse = pre.sse + post.sse;
    if (sse < best.residual) {
      best.residual = sse;
      best.knee = knee;
      best.knee_index = g;
      best.pre_knee_slope = pre.slope;
      best.post_knee_slope = post.slope;
      best.pre_knee_r2 = pre.r2;
      best.post_knee_r2 = post.r2;
    }
  }
  return best;
}

ParameterSummary summarize(std::string name, std::vector<double> values) {
  ParameterSummary s;
  s.name = std::move(name);
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  s.max = values.back();
  return s;
}

WindowedFit windowed_fit(std::span<const double> samples, std::size_t group_size,
                         std::size_t n_components, const FitOptions& options) {
  if (n_components == 0) throw DomainError("component count must be at least one");
  if (group_size < 10 * n_components) {
    throw DomainError("group size must be at least " + std::to_string(10 * n_components));
  }
  const std::size_t count = samples.size() / group_size;
  WindowedFit out;
  out.groups.resize(count);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t g = next++; g < count; g = next++) {
      auto& slot = out.groups[g];
      slot.index = g;
      slot.first_sample = g * group_size;
      try {
        slot.result = em_fit(samples.subspan(slot.first_sample, group_size), n_components,
                             std::nullopt, options);
      } catch (const Error& e) {
        slot.error = e.what();
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(count, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  std::vector<std::vector<double>> columns(2 * n_components);
  for (const auto& g : out.groups) {
    if (!g.result || g.result->dist.size() != n_components) continue;
    for (std::size_t k = 0; k < n_components; ++k) {
      columns[k].push_back(g.result->dist.weights()[k]);
      columns[n_components + k].push_back(g.result->dist.rates()[k]);
    }
  }
  for (std::size_t k = 0; k < n_components; ++k) {
    out.summary.push_back(summarize("alpha_" + std::to_string(k + 1), std::move(columns[k])));
  }
  for (std::size_t k = 0; k < n_components; ++k) {
    out.summary.push_back(
        summarize("lambda_" + std::to_string(k + 1), std::move(columns[n_components + k])));
  }
  return out;
}

}  // namespace oppaccess
