#pragma once

#include <cmath>

namespace gscnoma::simd::detail {

// Neumaier summation: s + c carries the running sum to about one ulp.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace gscnoma::simd::detail
