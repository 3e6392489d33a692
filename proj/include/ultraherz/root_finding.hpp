#pragma once

#include <cmath>
#include <stdexcept>

namespace ultraherz {

struct BisectionResult {
  double lo;
  double hi;
  int iterations;
  bool converged;
};

/**
 * Finds the crossing of a nonincreasing function g with `level` on (0, inf):
 * the returned bracket satisfies g(lo) > level >= g(hi).
 *
 * The bracket is grown from x = 1 by doubling/halving, then bisected until
 * (hi - lo) <= rel_tol * hi or max_iter total steps were spent.
 */
template <typename Fn>
BisectionResult bisect_decreasing(Fn&& g, double level, double rel_tol, int max_iter = 200) {
  double lo = 1.0;
  double hi = 1.0;
  int iter = 0;
  if (g(1.0) > level) {
    do {
      lo = hi;
      hi *= 2.0;
      if (++iter > max_iter || !std::isfinite(hi)) return {lo, hi, iter, false};
    } while (g(hi) > level);
  } else {
    do {
      hi = lo;
      lo *= 0.5;
      if (++iter > max_iter || lo == 0.0) return {lo, hi, iter, false};
    } while (g(lo) <= level);
  }
  while (hi - lo > rel_tol * hi) {
    if (++iter > max_iter) return {lo, hi, iter, false};
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi, iter, true};
}

}  // namespace ultraherz
