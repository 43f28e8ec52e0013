#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace gscnoma {

struct QuadratureSettings {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t subdivisions_used = 0;
};

/// Upper incomplete gamma function Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for
/// any finite real a and x > 0. Throws DomainError for x <= 0 and
/// NumericalError when the result overflows.
double upper_incomplete_gamma(double a, double x);

/// ln Gamma(a, x). Gamma(a, x) is strictly positive for x > 0, so this is
/// always defined; it stays finite where the value itself would overflow or
/// underflow.
double log_upper_incomplete_gamma(double a, double x);

/// Regularized incomplete gamma functions for a positive integer order.
double gamma_p_integer(int order, double x);
double gamma_q_integer(int order, double x);

/// Gamma(1 + a) - 1, accurate for small |a|.
double tgamma1pm1(double a);

/// Riemann zeta function for s >= 2.
double riemann_zeta(double s);

/// Sum of the terms rounded once: the error-free partial-sum expansion
/// (Shewchuk) keeps every bit of the intermediate result, so heavy
/// cancellation between alternating terms costs no precision.
double alternating_sum(std::span<const double> terms);

/// Integral of f over [0, inf) by globally adaptive Gauss-Kronrod (7/15):
/// [0, s] directly and (s, inf) through x = s / u. `length_scale` (s) is
/// where the integrand's mass is expected; it shapes the partition only.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSettings& settings = {},
                                         double length_scale = 1.0);

/// Integral of f over the finite interval [a, b] with the same adaptive rule.
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSettings& settings = {});

}  // namespace gscnoma
