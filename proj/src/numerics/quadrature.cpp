#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "gscnoma/error.hpp"
#include "gscnoma/numerics.hpp"

namespace gscnoma {
namespace {

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and
// weights; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  std::size_t piece;  // which integrand of the partition

  bool operator<(const Segment& other) const { return error < other.error; }
};

class Integrator {
 public:
  Integrator(const std::function<double(double)>& f, const std::function<double(double)>& abscissa)
      : f_(f), abscissa_(abscissa) {}

  Segment evaluate(double lo, double hi) const {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double f_center = call(center);
    double kronrod = f_center * kKronrodWeights[7];
    double gauss = f_center * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
      const double dx = half * kNodes[j];
      const double f1 = call(center - dx);
      const double f2 = call(center + dx);
      kronrod += kKronrodWeights[j] * (f1 + f2);
      abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    kronrod *= half;
    gauss *= half;
    abs_sum *= std::abs(half);
    const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    return {lo, hi, kronrod, std::max(std::abs(kronrod - gauss), roundoff), 0};
  }

 private:
  double call(double x) const {
    const double y = f_(x);
    if (std::isnan(y)) {
      std::ostringstream os;
      os << "quadrature: integrand returned NaN at x=" << abscissa_(x);
      throw NumericalError(os.str());
    }
    return y;
  }

  const std::function<double(double)>& f_;
  const std::function<double(double)>& abscissa_;
};

// One integrand on a set of breakpoints.
struct Piece {
  std::function<double(double)> f;
  std::vector<double> breaks;
  std::function<double(double)> abscissa = [](double x) { return x; };  // for diagnostics
};

QuadratureResult adaptive(const std::vector<Piece>& pieces, const QuadratureSettings& settings) {
  settings.validate();
  std::vector<Integrator> integrators;
  for (const auto& p : pieces) integrators.emplace_back(p.f, p.abscissa);
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    for (std::size_t i = 0; i + 1 < pieces[k].breaks.size(); ++i) {
      Segment s = integrators[k].evaluate(pieces[k].breaks[i], pieces[k].breaks[i + 1]);
      s.piece = k;
      total += s.value;
      total_error += s.error;
      heap.push(s);
    }
  }
  std::size_t subdivisions = heap.size();

  auto converged = [&] { return total_error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total)); };

  while (!converged()) {
    if (subdivisions >= settings.max_subdivisions) {
      std::ostringstream os;
      os << "quadrature: no convergence after " << subdivisions << " subdivisions (value " << total
         << ", error estimate " << total_error << ")";
      throw NumericalError(os.str());
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      std::ostringstream os;
      os << "quadrature: interval around x=" << mid << " cannot be subdivided further";
      throw NumericalError(os.str());
    }
    Segment left = integrators[worst.piece].evaluate(worst.lo, mid);
    Segment right = integrators[worst.piece].evaluate(mid, worst.hi);
    left.piece = right.piece = worst.piece;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Re-sum from the segments: the running totals drift by rounding.
  double value = 0.0;
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, subdivisions};
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("QuadratureSettings: rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw ConfigError("QuadratureSettings: abs_tol must be >= 0");
  if (max_subdivisions < 1) throw ConfigError("QuadratureSettings: max_subdivisions must be >= 1");
}

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSettings& settings) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_interval: bounds must be finite");
  return adaptive({{f, {a, b}}}, settings);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, const QuadratureSettings& settings,
                                         double length_scale) {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale)) {
    throw DomainError("integrate_semi_infinite: length scale must be positive");
  }
  const double s = length_scale;
  // [0, s] directly; (s, inf) as x = s / u, u in (0, 1], so the far tail sits
  // near u = 0 where doubles are dense and algebraic tails stay resolvable.
  Piece head{[&f, s](double t) { return f(s * t) * s; }, {0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0},
             [s](double t) { return s * t; }};
  Piece tail{[&f, s](double u) {
               if (u == 0.0) return 0.0;
               const double x = s / u;
               if (!std::isfinite(x)) return 0.0;
               const double y = f(x);
               return y == 0.0 ? 0.0 : y * (s / u) / u;
             },
             {0.0, 1e-2, 0.1, 0.5, 1.0},
             [s](double u) { return s / u; }};
  return adaptive({std::move(head), std::move(tail)}, settings);
}

}  // namespace gscnoma
