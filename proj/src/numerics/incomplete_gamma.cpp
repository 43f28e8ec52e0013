#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gscnoma/error.hpp"
#include "gscnoma/numerics.hpp"

namespace gscnoma {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Bernoulli numbers B_2 .. B_16 for the Euler-Maclaurin tail of zeta.
constexpr std::array<double, 8> kBernoulli = {1.0 / 6.0,     -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
                                              5.0 / 66.0,    -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};

constexpr int kZetaTerms = 64;

const std::array<double, kZetaTerms>& zeta_table() {
  static const std::array<double, kZetaTerms> table = [] {
    std::array<double, kZetaTerms> t{};
    for (int k = 2; k < kZetaTerms; ++k) t[k] = riemann_zeta(k);
    return t;
  }();
  return table;
}

// ln Gamma(1 + a) / a for |a| <= 0.5 from the zeta series
// ln Gamma(1 + a) = -gamma a + sum_{k>=2} (-1)^k zeta(k) a^k / k.
double lgamma1p_over_a(double a) {
  const auto& zeta = zeta_table();
  double sum = 0.0;
  double power = 1.0;  // a^(k-1)
  for (int k = 2; k < kZetaTerms; ++k) {
    power *= a;
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) * zeta[k] * power / k;
    sum += term;
    if (std::abs(term) < kEps * 1e-3 * std::abs(sum)) break;
  }
  return -std::numbers::egamma + sum;
}

double expm1_ratio(double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; }

// (Gamma(1 + a) - 1) / a, finite through a = 0 (where it equals -gamma).
double gamma1pm1_over_a(double a) {
  const double l_over_a = lgamma1p_over_a(a);
  return l_over_a * expm1_ratio(a * l_over_a);
}

// Gamma(a, x) for |a| <= 0.5 and 0 < x < 1:
// Gamma(a) - x^a/a splits into two finite differences, the rest of the lower
// series converges fast because x < 1.
double upper_gamma_small_order(double a, double x) {
  const double log_x = std::log(x);
  const double power_diff = (a == 0.0) ? log_x : std::expm1(a * log_x) / a;
  double series = 0.0;
  double factor = 1.0;  // (-x)^k / k!
  for (int k = 1; k < 200; ++k) {
    factor *= -x / k;
    const double term = factor / (a + k);
    series += term;
    if (std::abs(term) < kEps * std::abs(series)) break;
  }
  return gamma1pm1_over_a(a) - power_diff - std::exp(a * log_x) * series;
}

// ln of the Legendre continued fraction part: Gamma(a, x) = e^-x x^a h.
double log_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return -x + a * std::log(x) + std::log(h);
  }
  throw NumericalError("upper_incomplete_gamma: continued fraction did not converge for a=" +
                       std::to_string(a) + ", x=" + std::to_string(x));
}

// Regularized lower P(a, x) by its power series; used for a > 0.5, x < a + 1.
double lower_regularized_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw NumericalError("upper_incomplete_gamma: series did not converge for a=" + std::to_string(a) +
                       ", x=" + std::to_string(x));
}

void check_arguments(double a, double x) {
  if (!std::isfinite(a)) throw DomainError("upper_incomplete_gamma: order must be finite");
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("upper_incomplete_gamma: x must be positive and finite, got " + std::to_string(x));
  }
}

// Gamma(a, x) for a <= 0.5, 0 < x < 1 by shifting the order into
// (-0.5, 0.5] and recurring downward. Each downward step divides by an order
// of magnitude >= 0.5 and the two terms have opposite effective sign, so the
// recursion is stable for x < 1.
double upper_gamma_small_x(double a, double x) {
  const int shift = static_cast<int>(std::floor(0.5 - a));
  double order = a + shift;
  double value = upper_gamma_small_order(order, x);
  const double log_x = std::log(x);
  for (int i = 0; i < shift; ++i) {
    order -= 1.0;
    value = (value - std::exp(order * log_x - x)) / order;
  }
  return value;
}

}  // namespace

double riemann_zeta(double s) {
  if (!(s >= 2.0)) throw DomainError("riemann_zeta: implemented for s >= 2 only");
  constexpr int kCut = 10;
  double sum = 0.0;
  for (int n = kCut - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double cut = kCut;
  sum += std::pow(cut, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(cut, -s);
  // Euler-Maclaurin corrections B_2j/(2j)! s(s+1)...(s+2j-2) N^(-s-2j+1).
  double rising = s;
  double factorial = 2.0;
  for (std::size_t j = 1; j <= kBernoulli.size(); ++j) {
    sum += kBernoulli[j - 1] / factorial * rising * std::pow(cut, -s - 2.0 * j + 1.0);
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum;
}

double tgamma1pm1(double a) {
  if (std::abs(a) <= 0.5) return std::expm1(a * lgamma1p_over_a(a));
  return std::tgamma(1.0 + a) - 1.0;
}

double log_upper_incomplete_gamma(double a, double x) {
  check_arguments(a, x);
  if (a > 0.5) {
    if (x < a + 1.0) {
      return std::lgamma(a) + std::log1p(-lower_regularized_series(a, x));
    }
    return log_continued_fraction(a, x);
  }
  if (x >= 1.0) return log_continued_fraction(a, x);
  const double value = upper_gamma_small_x(a, x);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw NumericalError("upper_incomplete_gamma: overflow for a=" + std::to_string(a) +
                         ", x=" + std::to_string(x));
  }
  return std::log(value);
}

double upper_incomplete_gamma(double a, double x) {
  check_arguments(a, x);
  if (a <= 0.5 && x < 1.0) {
    const double value = upper_gamma_small_x(a, x);
    if (!std::isfinite(value)) {
      throw NumericalError("upper_incomplete_gamma: overflow for a=" + std::to_string(a) +
                           ", x=" + std::to_string(x));
    }
    return value;
  }
  const double log_value = log_upper_incomplete_gamma(a, x);
  const double value = std::exp(log_value);
  if (!std::isfinite(value)) {
    throw NumericalError("upper_incomplete_gamma: overflow for a=" + std::to_string(a) +
                         ", x=" + std::to_string(x));
  }
  return value;
}

double gamma_p_integer(int order, double x) {
  if (order < 1) throw DomainError("gamma_p_integer: order must be >= 1");
  if (x < 0.0) throw DomainError("gamma_p_integer: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < order) {
    // e^-x x^n / n! * sum_j x^j / ((n+1)...(n+j))
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < kMaxIterations; ++j) {
      term *= x / (order + j);
      sum += term;
      if (term < sum * kEps) break;
    }
    return sum * std::exp(-x + order * std::log(x) - std::lgamma(order + 1.0));
  }
  return 1.0 - gamma_q_integer(order, x);
}

double gamma_q_integer(int order, double x) {
  if (order < 1) throw DomainError("gamma_q_integer: order must be >= 1");
  if (x < 0.0) throw DomainError("gamma_q_integer: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < order) return 1.0 - gamma_p_integer(order, x);
  // e^-x sum_{k<n} x^k/k!, summed from the largest term down.
  double term = std::exp(-x + (order - 1) * std::log(x) - std::lgamma(static_cast<double>(order)));
  double sum = 0.0;
  for (int k = order - 1; k >= 0; --k) {
    sum += term;
    term *= k / x;
  }
  return sum;
}

}  // namespace gscnoma
