#include "oppaccess/root_solver.hpp"

#include <cmath>
#include <sstream>

#include "oppaccess/error.hpp"

namespace oppaccess {

double solve_root(const std::function<double(double)>& f, double target, double lo, double hi,
                  const RootOptions& options) {
  if (!(lo <= hi)) throw SolverError("root bracket is reversed");
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (std::abs(f_lo - target) <= options.residual_tolerance) return lo;
  if (std::abs(f_hi - target) <= options.residual_tolerance) return hi;
  const bool increasing = f_hi > f_lo;
  if (!(std::min(f_lo, f_hi) <= target && target <= std::max(f_lo, f_hi))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "target " << target << " outside f([" << lo << ", " << hi << "]) = [" << f_lo << ", "
        << f_hi << "]";
    throw SolverError(msg.str());
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (hi - lo <= options.argument_tolerance) break;
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    const double value = f(mid);
    if (std::abs(value - target) <= options.residual_tolerance) return mid;
    if ((value < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2.0;
}

}  // namespace oppaccess
