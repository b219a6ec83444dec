#pragma once

#include <functional>

namespace oppaccess {

struct RootOptions {
  double argument_tolerance = 1e-12;
  double residual_tolerance = 1e-12;
  int max_iterations = 2000;
};

/// Bisection for f(x) = target on [lo, hi], f monotone (either direction).
///
/// Stops when the bracket is narrower than `argument_tolerance`, when
/// |f(x) - target| <= `residual_tolerance`, or when the bracket can no
/// longer be split in double precision. A zero argument tolerance
/// therefore bisects to full precision. Throws SolverError when the
/// target is not attained on the bracket.
double solve_root(const std::function<double(double)>& f, double target, double lo, double hi,
                  const RootOptions& options = {});

}  // namespace oppaccess
