#include <cmath>
#include <vector>

#include "gscnoma/numerics.hpp"

namespace gscnoma {

// Shewchuk's exact partials followed by a correctly rounded collapse (the
// algorithm behind Python's math.fsum). Partials are non-overlapping and
// increasing in magnitude; their exact sum equals the exact sum of the input.
double alternating_sum(std::span<const double> terms) {
  std::vector<double> partials;
  partials.reserve(terms.size() + 1);
  for (double x : terms) {
    std::size_t kept = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[kept++] = lo;
      x = hi;
    }
    partials.resize(kept);
    partials.push_back(x);
  }
  if (partials.empty()) return 0.0;

  std::size_t n = partials.size();
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Half-way case: round-half-even on the collapsed pair would go the wrong
  // way if the next partial has the same sign as lo.
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

}  // namespace gscnoma
