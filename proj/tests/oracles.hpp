#pragma once

// Independent reference computations. Nothing here calls into the library's
// numerics; only plain vectors of weights and rates go in.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

struct Mixture {
  std::vector<double> w;
  std::vector<double> r;
};

// Term-by-term sums in 50-digit arithmetic.
inline double pdf(const Mixture& m, double t) {
  Big s = 0;
  for (std::size_t i = 0; i < m.w.size(); ++i) s += Big(m.w[i]) * Big(m.r[i]) * exp(-Big(m.r[i]) * Big(t));
  return s.convert_to<double>();
}

inline double ccdf(const Mixture& m, double t) {
  Big s = 0;
  for (std::size_t i = 0; i < m.w.size(); ++i) s += Big(m.w[i]) * exp(-Big(m.r[i]) * Big(t));
  return s.convert_to<double>();
}

inline double cdf(const Mixture& m, double t) { return (1 - Big(ccdf(m, t))).convert_to<double>(); }

// Adaptive Simpson.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
        return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) + rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

// Plain bisection on an increasing function.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
  for (int k = 0; k < 300; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf_fn) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf_fn(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// 99% critical value, asymptotic.
inline double ks_critical_99(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

// Greedy slotted allocation. Context k has probability weight[k] and idle
// law m[k]; slot j covers ((j-1)D, jD]. Transmitting in slot j is credited
// Q = D * S((j-1)D) of access and costs p = S((j-1)D) - S(jD) of collision.
// Slots are taken by decreasing Q/p, the last one fractionally, until the
// budget is spent. Plain double arithmetic; the slot count is large.
inline double slotted_greedy(const std::vector<Mixture>& m, const std::vector<double>& weight, double eta,
                             double delta, double horizon) {
  struct Slot {
    double ratio, cost, gain;
  };
  auto surv = [](const Mixture& x, double t) {
    double s = 0;
    for (std::size_t i = 0; i < x.w.size(); ++i) s += x.w[i] * std::exp(-x.r[i] * t);
    return s;
  };
  std::vector<Slot> slots;
  const auto n = static_cast<std::size_t>(std::ceil(horizon / delta));
  for (std::size_t k = 0; k < m.size(); ++k) {
    double s_a = surv(m[k], 0);
    for (std::size_t j = 0; j < n; ++j) {
      const double s_b = surv(m[k], (j + 1) * delta);
      const double p = weight[k] * (s_a - s_b);
      if (p > 0) slots.push_back({delta * s_a / (s_a - s_b), p, weight[k] * delta * s_a});
      s_a = s_b;
    }
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) { return x.ratio > y.ratio; });
  double budget = eta, capacity = 0;
  for (const auto& s : slots) {
    if (budget <= 0) break;
    const double frac = std::min(1.0, budget / s.cost);
    capacity += frac * s.gain;
    budget -= frac * s.cost;
  }
  return capacity;
}

}  // namespace oracle
