#include "gscnoma/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gscnoma/error.hpp"
#include "gscnoma/numerics.hpp"

namespace gscnoma {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kSeriesTerms = 200;
constexpr double kSeriesRateLimit = 40.0;

double sign_of_power(int exponent) { return (exponent % 2 == 0) ? 1.0 : -1.0; }

// e^t - sum_{m=0}^{order-1} t^m/m! for t <= 0. Near the origin the tail
// series sum_{m>=order} t^m/m! avoids subtracting nearly equal numbers.
double taylor_remainder(double t, int order) {
  if (order == 0) return std::exp(t);
  if (order == 1) return std::expm1(t);
  if (std::abs(t) <= order) {
    double term = 1.0;
    for (int m = 1; m <= order; ++m) term *= t / m;
    double sum = term;
    for (int m = order + 1; m < order + 400; ++m) {
      term *= t / m;
      sum += term;
      if (std::abs(term) <= kEps * std::abs(sum)) break;
    }
    return sum;
  }
  double poly = 0.0;
  double term = 1.0;
  for (int m = 0; m < order; ++m) {
    poly += term;
    term *= t / (m + 1);
  }
  return std::exp(t) - poly;
}

void check_argument(double x, const char* where) {
  if (!(x >= 0.0)) throw DomainError(std::string(where) + ": x must be >= 0");
}

bool is_sc(const UserPairSpec& pair) { return pair.strong.combined == 1 && pair.weak.combined == 1; }
bool is_mrc(const UserPairSpec& pair) {
  return pair.strong.combined == pair.strong.antennas && pair.weak.combined == pair.weak.antennas;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  unsigned long long value = 1;
  for (int i = 1; i <= k; ++i) value = value * static_cast<unsigned long long>(n - k + i) / i;
  return static_cast<double>(value);
}

void GscSpec::validate() const {
  if (antennas < 1 || antennas > kMaxAntennas) {
    throw ConfigError("GscSpec: antennas must be in [1, " + std::to_string(kMaxAntennas) + "], got " +
                      std::to_string(antennas));
  }
  if (combined < 1 || combined > antennas) {
    throw ConfigError("GscSpec: combined must be in [1, antennas], got " + std::to_string(combined));
  }
  if (!(mean_square_gain > 0.0) || !std::isfinite(mean_square_gain)) {
    throw ConfigError("GscSpec: mean_square_gain must be positive and finite");
  }
}

void UserPairSpec::validate() const {
  strong.validate();
  weak.validate();
  if (weak.mean_square_gain > strong.mean_square_gain) {
    throw ConfigError("UserPairSpec: the weak user's mean-square gain must not exceed the strong user's");
  }
}

CombiningMode combining_mode(const UserPairSpec& pair) {
  if (is_sc(pair)) return CombiningMode::sc;
  if (is_mrc(pair)) return CombiningMode::mrc;
  return CombiningMode::general;
}

std::string to_string(CombiningMode mode) {
  switch (mode) {
    case CombiningMode::sc:
      return "sc";
    case CombiningMode::mrc:
      return "mrc";
    case CombiningMode::general:
      return "general";
  }
  return "unknown";
}

GscDistribution::GscDistribution(const GscSpec& spec) : spec_(spec) {
  spec_.validate();
  const int big_n = spec_.antennas;
  const int n = spec_.combined;
  binom_total_ = binomial(big_n, n);
  log_lead_norm_ = n * std::log(spec_.mean_square_gain) + std::lgamma(static_cast<double>(n));
  for (int l = 1; l <= big_n - n; ++l) {
    const double coefficient =
        sign_of_power(n + l - 1) * binomial(big_n - n, l) * std::pow(static_cast<double>(n) / l, n - 1);
    branches_.push_back({coefficient, static_cast<double>(l) / n});
  }

  std::vector<double> rates(n, 1.0);
  for (int i = n + 1; i <= big_n; ++i) rates.push_back(static_cast<double>(i) / n);
  max_rate_ = *std::max_element(rates.begin(), rates.end());
  for (double r : rates) log_rate_product_ += std::log(r);
  series_coefficients_.assign(kSeriesTerms, 0.0);
  series_coefficients_[0] = 1.0;
  for (double r : rates) {
    for (std::size_t m = 1; m < series_coefficients_.size(); ++m) {
      series_coefficients_[m] += r * series_coefficients_[m - 1];
    }
  }
}

GscDistribution::SeriesValue GscDistribution::origin_series(double y, int extra) const {
  const int order = spec_.antennas - 1 + extra;
  if (max_rate_ * y > kSeriesRateLimit) return {0.0, INFINITY, false};
  double power = 1.0;  // y^m (order)! / (order + m)!
  double sum = 0.0;
  double magnitude = 0.0;
  bool converged = false;
  for (std::size_t m = 0; m < series_coefficients_.size(); ++m) {
    if (m > 0) power *= y / static_cast<double>(order + static_cast<int>(m));
    const double term = series_coefficients_[m] * power;
    sum += (m % 2 == 0) ? term : -term;
    magnitude += term;
    if (static_cast<double>(m) > max_rate_ * y && term <= kEps * 1e-2 * std::abs(sum)) {
      converged = true;
      break;
    }
  }
  if (!converged || !(sum > 0.0)) return {0.0, INFINITY, false};
  const double log_prefactor =
      log_rate_product_ + (y > 0.0 ? order * std::log(y) : (order == 0 ? 0.0 : -INFINITY)) -
      std::lgamma(static_cast<double>(order + 1));
  const double prefactor = std::exp(log_prefactor);
  return {prefactor * sum, prefactor * magnitude * 8.0 * kEps, true};
}

std::size_t GscDistribution::fill_pdf_terms(double x, std::span<double> out) const {
  const double w = spec_.mean_square_gain;
  const int n = spec_.combined;
  const double y = x / w;
  double lead = 0.0;
  if (x > 0.0) {
    lead = std::exp((n - 1) * std::log(x) - y - log_lead_norm_);
  } else if (n == 1) {
    lead = 1.0 / w;
  }
  out[0] = lead;
  const double envelope = std::exp(-y) / w;
  std::size_t count = 1;
  for (const auto& b : branches_) {
    out[count++] = envelope == 0.0 ? 0.0 : b.coefficient * envelope * taylor_remainder(-b.ratio * y, n - 1);
  }
  return count;
}

std::vector<double> GscDistribution::pdf_terms(double x) const {
  check_argument(x, "gsc_pdf");
  std::vector<double> terms(branches_.size() + 1);
  fill_pdf_terms(x, terms);
  return terms;
}

double GscDistribution::pdf(double x) const {
  check_argument(x, "gsc_pdf");
  std::array<double, kMaxAntennas + 1> terms{};
  const std::size_t count = fill_pdf_terms(x, terms);
  const double value = binom_total_ * alternating_sum(std::span<const double>(terms.data(), count));
  if (branches_.empty()) return value;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < count; ++i) magnitude += std::abs(terms[i]);
  const double error = binom_total_ * magnitude * 4.0 * kEps;
  if (error <= 1e-14 * std::abs(value)) return value;
  const double w = spec_.mean_square_gain;
  const auto series = origin_series(x / w, 0);
  if (series.converged && series.error / w < error) return series.value / w;
  return std::max(0.0, value);
}

double GscDistribution::cdf(double x) const {
  check_argument(x, "gsc_cdf");
  if (x == 0.0) return 0.0;
  const int n = spec_.combined;
  const double y = x / spec_.mean_square_gain;
  std::array<double, kMaxAntennas + 1> terms{};
  terms[0] = gamma_p_integer(n, y);
  std::size_t count = 1;
  for (const auto& b : branches_) {
    double bracket = -std::expm1(-(1.0 + b.ratio) * y) / (1.0 + b.ratio);
    double power = 1.0;
    for (int m = 0; m <= n - 2; ++m) {
      bracket -= power * gamma_p_integer(m + 1, y);
      power *= -b.ratio;
    }
    terms[count++] = b.coefficient * bracket;
  }
  const double value = binom_total_ * alternating_sum(std::span<const double>(terms.data(), count));
  if (!branches_.empty() && value < 0.5) {
    double magnitude = 0.0;
    for (std::size_t i = 0; i < count; ++i) magnitude += std::abs(terms[i]);
    const double error = binom_total_ * magnitude * 4.0 * kEps;
    if (error > 1e-14 * std::abs(value)) {
      const auto series = origin_series(y, 1);
      if (series.converged && series.error < error) return std::min(series.value, 1.0);
    }
  }
  return std::clamp(value, 0.0, 1.0);
}

double GscDistribution::survival(double x) const {
  check_argument(x, "gsc_survival");
  if (x == 0.0) return 1.0;
  const int n = spec_.combined;
  const double y = x / spec_.mean_square_gain;
  std::array<double, kMaxAntennas + 1> terms{};
  terms[0] = gamma_q_integer(n, y);
  std::size_t count = 1;
  for (const auto& b : branches_) {
    double bracket = std::exp(-(1.0 + b.ratio) * y) / (1.0 + b.ratio);
    double power = 1.0;
    for (int m = 0; m <= n - 2; ++m) {
      bracket -= power * gamma_q_integer(m + 1, y);
      power *= -b.ratio;
    }
    terms[count++] = b.coefficient * bracket;
  }
  const double value = binom_total_ * alternating_sum(std::span<const double>(terms.data(), count));
  return std::clamp(value, 0.0, 1.0);
}

double GscDistribution::raw_moment(int k) const {
  if (k < 0) throw DomainError("raw_moment: order must be >= 0");
  const int n = spec_.combined;
  std::vector<double> terms;
  // (n)(n+1)...(n+k-1)
  double rising = 1.0;
  for (int i = 0; i < k; ++i) rising *= n + i;
  terms.push_back(rising);
  const double k_factorial = std::tgamma(k + 1.0);
  for (const auto& b : branches_) {
    terms.push_back(b.coefficient * k_factorial / std::pow(1.0 + b.ratio, k + 1));
    double power = 1.0;
    for (int m = 0; m <= n - 2; ++m) {
      // (m+k)!/m!
      double falling = 1.0;
      for (int i = 1; i <= k; ++i) falling *= m + i;
      terms.push_back(-b.coefficient * falling * power);
      power *= -b.ratio;
    }
  }
  return binom_total_ * std::pow(spec_.mean_square_gain, k) * alternating_sum(terms);
}

double gsc_pdf(const GscSpec& spec, double x) { return GscDistribution(spec).pdf(x); }
double gsc_cdf(const GscSpec& spec, double x) { return GscDistribution(spec).cdf(x); }
double gsc_survival(const GscSpec& spec, double x) { return GscDistribution(spec).survival(x); }
Moments gsc_moments(const GscSpec& spec) { return GscDistribution(spec).moments(); }

MinDistribution::MinDistribution(const UserPairSpec& pair)
    : pair_(pair), mode_(combining_mode(pair)), strong_(pair.strong), weak_(pair.weak) {
  pair_.validate();
}

double MinDistribution::pdf(double x) const {
  switch (mode_) {
    case CombiningMode::sc:
      return pdf_sc(x);
    case CombiningMode::mrc:
      return pdf_mrc(x);
    case CombiningMode::general:
      break;
  }
  return pdf_general(x);
}

double MinDistribution::pdf_sc(double x) const {
  check_argument(x, "min_pdf_sc");
  if (!is_sc(pair_)) throw PreconditionError("min_pdf_sc: both users must combine exactly one branch");
  const int ns = pair_.strong.antennas;
  const int nw = pair_.weak.antennas;
  std::array<double, kMaxAntennas * kMaxAntennas> terms{};
  std::size_t count = 0;
  for (int k = 1; k <= ns; ++k) {
    for (int j = 1; j <= nw; ++j) {
      const double chi = k / pair_.strong.mean_square_gain + j / pair_.weak.mean_square_gain;
      terms[count++] = sign_of_power(k + j) * binomial(ns, k) * binomial(nw, j) * chi * std::exp(-chi * x);
    }
  }
  return alternating_sum(std::span<const double>(terms.data(), count));
}

double MinDistribution::pdf_mrc(double x) const {
  check_argument(x, "min_pdf_mrc");
  if (!is_mrc(pair_)) throw PreconditionError("min_pdf_mrc: both users must combine every branch");
  const double ws = pair_.strong.mean_square_gain;
  const double ww = pair_.weak.mean_square_gain;
  const double chi = 1.0 / ws + 1.0 / ww;
  // x^(Na-1)/(Gamma(Na) Wa^Na) e^(-chi x) sum_{j<Nb} x^j/(j! Wb^j)
  auto half = [x, chi](int na, double wa, int nb, double wb) {
    if (x == 0.0) return na == 1 ? 1.0 / wa : 0.0;
    double sum = 0.0;
    double term = 1.0;
    for (int j = 0; j < nb; ++j) {
      sum += term;
      term *= x / (wb * (j + 1));
    }
    return std::exp((na - 1) * std::log(x) - chi * x - std::lgamma(static_cast<double>(na)) - na * std::log(wa)) *
           sum;
  };
  return half(pair_.strong.antennas, ws, pair_.weak.antennas, ww) +
         half(pair_.weak.antennas, ww, pair_.strong.antennas, ws);
}

double MinDistribution::pdf_general(double x) const {
  check_argument(x, "min_pdf_general");
  return weak_.pdf(x) * strong_.survival(x) + strong_.pdf(x) * weak_.survival(x);
}

double min_pdf_sc(const UserPairSpec& pair, double x) { return MinDistribution(pair).pdf_sc(x); }
double min_pdf_mrc(const UserPairSpec& pair, double x) { return MinDistribution(pair).pdf_mrc(x); }
double min_pdf_general(const UserPairSpec& pair, double x) { return MinDistribution(pair).pdf_general(x); }

Moments min_moments(const UserPairSpec& pair, CombiningMode mode) {
  pair.validate();
  const double ws = pair.strong.mean_square_gain;
  const double ww = pair.weak.mean_square_gain;
  const int ns = pair.strong.antennas;
  const int nw = pair.weak.antennas;
  if (mode == CombiningMode::sc) {
    if (!is_sc(pair)) throw PreconditionError("min_moments: SC moments need n_s = n_w = 1");
    std::vector<double> first;
    std::vector<double> second;
    for (int k = 1; k <= ns; ++k) {
      for (int j = 1; j <= nw; ++j) {
        const double chi = k / ws + j / ww;
        const double c = sign_of_power(k + j) * binomial(ns, k) * binomial(nw, j);
        first.push_back(c / chi);
        second.push_back(2.0 * c / (chi * chi));
      }
    }
    return {alternating_sum(first), alternating_sum(second)};
  }
  if (mode == CombiningMode::mrc) {
    if (!is_mrc(pair)) throw PreconditionError("min_moments: MRC moments need n_s = N_s and n_w = N_w");
    const double log_chi = std::log(1.0 / ws + 1.0 / ww);
    // (1/(Gamma(Na) Wa^Na)) sum_{j<Nb} (Na+j+p-1)! chi^-(Na+j+p) / (j! Wb^j)
    auto series = [log_chi](int na, double wa, int nb, double wb, int p) {
      double sum = 0.0;
      for (int j = 0; j < nb; ++j) {
        sum += std::exp(std::lgamma(na + j + p + 0.0) - (na + j + p) * log_chi - std::lgamma(j + 1.0) -
                        j * std::log(wb) - std::lgamma(static_cast<double>(na)) - na * std::log(wa));
      }
      return sum;
    };
    return {series(ns, ws, nw, ww, 1) + series(nw, ww, ns, ws, 1),
            series(ns, ws, nw, ww, 2) + series(nw, ww, ns, ws, 2)};
  }
  throw PreconditionError("min_moments: closed forms exist for SC and MRC only");
}

Moments min_moments_numeric(const UserPairSpec& pair) {
  const MinDistribution dist(pair);
  const QuadratureSettings settings{1e-11, 1e-15, 4000};
  const double scale = std::min(gsc_moments(pair.strong).mean, gsc_moments(pair.weak).mean);
  const auto m1 = integrate_semi_infinite([&](double x) { return x * dist.pdf_general(x); }, settings, scale);
  const auto m2 = integrate_semi_infinite([&](double x) { return x * x * dist.pdf_general(x); }, settings, scale);
  return {m1.value, m2.value};
}

}  // namespace gscnoma
