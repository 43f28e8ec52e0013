#include "gscnoma/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gscnoma/error.hpp"

namespace gscnoma {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLog2e = std::numbers::log2e;

struct Evaluation {
  double value = 0.0;
  double error = 0.0;
};

// gamma(x) = signal x / (interference x + 1)
struct RateShape {
  double signal;
  double interference;

  double operator()(double x) const { return signal * x / (interference * x + 1.0); }
};

// -(1/nu) log2 E[(1 + gamma(g))^-exponent].
//
// When the exponent times the typical log-rate is small the expectation sits
// just below 1; integrating expm1(-exponent log1p(gamma)) keeps the deficit
// at full relative precision, which is what theta -> 0 needs. Otherwise the
// integrand is multiplied by (1 + gamma(mean))^exponent so the quadrature
// works on an O(1) quantity even when the expectation is tiny.
Evaluation expected_ec(const std::function<double(double)>& pdf, RateShape rate, double exponent, double nu,
                       double mean_gain, const QuadratureSettings& settings) {
  const double probe = exponent * std::log1p(rate(mean_gain));
  if (probe < 1.0) {
    const auto j = integrate_semi_infinite(
        [&](double x) {
          const double p = pdf(x);
          return p == 0.0 ? 0.0 : p * std::expm1(-exponent * std::log1p(rate(x)));
        },
        settings, mean_gain);
    const double inner = std::max(j.value, -1.0 + 1e-300);
    const double value = -std::log1p(inner) / (nu * kLn2);
    return {std::max(value, 0.0), j.error_estimate / ((1.0 + inner) * nu * kLn2)};
  }
  const auto scaled = integrate_semi_infinite(
      [&](double x) {
        const double p = pdf(x);
        return p == 0.0 ? 0.0 : p * std::exp(probe - exponent * std::log1p(rate(x)));
      },
      settings, mean_gain);
  if (!(scaled.value > 0.0)) {
    std::ostringstream os;
    os << "effective capacity: expectation evaluated to " << scaled.value;
    throw NumericalError(os.str());
  }
  const double value = -(std::log(scaled.value) - probe) / (nu * kLn2);
  return {std::max(value, 0.0), scaled.error_estimate / (scaled.value * nu * kLn2)};
}

Evaluation expected_log2_rate(const std::function<double(double)>& pdf, RateShape rate, double mean_gain,
                              const QuadratureSettings& settings) {
  const auto r = integrate_semi_infinite(
      [&](double x) {
        const double p = pdf(x);
        return p == 0.0 ? 0.0 : p * std::log1p(rate(x)) * kLog2e;
      },
      settings, mean_gain);
  return {std::max(r.value, 0.0), r.error_estimate};
}

void validate_inputs(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr) {
  pair.validate();
  split.validate();
  qos.validate();
  snr.validate();
}

bool routes_to_ergodic(const QosProfile& qos) { return qos.theta < kErgodicThetaThreshold; }

double min_scale(const UserPairSpec& pair) {
  return std::min(gsc_moments(pair.strong).mean, gsc_moments(pair.weak).mean);
}

Evaluation strong_ec(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                     const QuadratureSettings& settings) {
  const GscDistribution dist(pair.strong);
  const RateShape rate{split.a_s * snr.rho, 0.0};
  const auto pdf = [&dist](double x) { return dist.pdf(x); };
  const double mean = dist.raw_moment(1);
  if (routes_to_ergodic(qos)) return expected_log2_rate(pdf, rate, mean, settings);
  return expected_ec(pdf, rate, qos.nu(), qos.nu(), mean, settings);
}

enum class WeakDensity { sc, mrc, general, automatic };

Evaluation weak_ec(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                   const QuadratureSettings& settings, WeakDensity density) {
  const MinDistribution dist(pair);
  std::function<double(double)> pdf;
  switch (density) {
    case WeakDensity::sc:
      if (dist.mode() != CombiningMode::sc) throw PreconditionError("ec_weak_sc: requires n_s = n_w = 1");
      pdf = [&dist](double x) { return dist.pdf_sc(x); };
      break;
    case WeakDensity::mrc:
      if (pair.strong.combined != pair.strong.antennas || pair.weak.combined != pair.weak.antennas) {
        throw PreconditionError("ec_weak_mrc: requires n_s = N_s and n_w = N_w");
      }
      pdf = [&dist](double x) { return dist.pdf_mrc(x); };
      break;
    case WeakDensity::general:
      pdf = [&dist](double x) { return dist.pdf_general(x); };
      break;
    case WeakDensity::automatic:
      pdf = [&dist](double x) { return dist.pdf(x); };
      break;
  }
  const RateShape rate{split.a_w() * snr.rho, split.a_s * snr.rho};
  const double scale = min_scale(pair);
  if (routes_to_ergodic(qos)) return expected_log2_rate(pdf, rate, scale, settings);
  return expected_ec(pdf, rate, qos.nu(), qos.nu(), scale, settings);
}

Evaluation oma_ec(const GscSpec& spec, const QosProfile& qos, const SnrPoint& snr,
                  const QuadratureSettings& settings) {
  const GscDistribution dist(spec);
  const RateShape rate{snr.rho, 0.0};
  const auto pdf = [&dist](double x) { return dist.pdf(x); };
  const double mean = dist.raw_moment(1);
  if (routes_to_ergodic(qos)) {
    const auto full = expected_log2_rate(pdf, rate, mean, settings);
    return {0.5 * full.value, 0.5 * full.error};
  }
  return expected_ec(pdf, rate, 0.5 * qos.nu(), qos.nu(), mean, settings);
}

EcReport make_report(Evaluation strong, Evaluation weak, EcMethod method) {
  return {strong.value, weak.value, strong.value + weak.value, method, strong.error + weak.error};
}

}  // namespace

double QosProfile::nu() const { return theta * block_length * bandwidth / kLn2; }

void QosProfile::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ConfigError("QosProfile: theta must be >= 0");
  if (!(block_length > 0.0) || !std::isfinite(block_length)) throw ConfigError("QosProfile: T must be > 0");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ConfigError("QosProfile: B must be > 0");
}

void PowerSplit::validate() const {
  if (!(a_s > 0.0 && a_s < 0.5)) {
    throw ConfigError("PowerSplit: a_s must lie in (0, 0.5) so that a_s < a_w, got " + std::to_string(a_s));
  }
}

SnrPoint SnrPoint::from_db(double db) { return {std::pow(10.0, db / 10.0)}; }

double SnrPoint::db() const { return 10.0 * std::log10(rho); }

void SnrPoint::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("SnrPoint: rho must be positive and finite");
}

std::string to_string(EcMethod method) {
  switch (method) {
    case EcMethod::exact:
      return "exact";
    case EcMethod::sc_closed:
      return "sc_closed";
    case EcMethod::mrc_closed:
      return "mrc_closed";
    case EcMethod::general_quadrature:
      return "general_quadrature";
    case EcMethod::high_snr:
      return "high_snr";
    case EcMethod::low_snr:
      return "low_snr";
    case EcMethod::oma:
      return "oma";
    case EcMethod::ergodic_bound:
      return "ergodic_bound";
  }
  return "unknown";
}

QuadratureSettings default_capacity_quadrature() { return {1e-9, 1e-12, 2000}; }

double ec_strong(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                 const QuadratureSettings& settings) {
  validate_inputs(pair, split, qos, snr);
  return strong_ec(pair, split, qos, snr, settings).value;
}

StrongDecomposition ec_strong_decomposed(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                                         const SnrPoint& snr, const QuadratureSettings& settings) {
  validate_inputs(pair, split, qos, snr);
  if (routes_to_ergodic(qos)) throw PreconditionError("ec_strong_decomposed: needs theta > 0");
  const int big_n = pair.strong.antennas;
  const int n = pair.strong.combined;
  const double w = pair.strong.mean_square_gain;
  const double c = split.a_s * snr.rho;
  const double nu = qos.nu();

  // Every term carries the factor e^shift so the quadratures see O(1)
  // integrands even when the expectation underflows the absolute tolerance.
  const double shift = nu * std::log1p(c * gsc_moments(pair.strong).mean);

  // e^shift int_0^inf (1 + c x)^-nu x^m e^(-x/W) dx
  auto power_integral = [&](int m) {
    const double peak = std::min(w * (m + 1), (m + 1.0) / (c * nu));
    return integrate_semi_infinite(
               [&](double x) {
                 if (x == 0.0) return m == 0 ? std::exp(shift) : 0.0;
                 return std::exp(shift - nu * std::log1p(c * x) + m * std::log(x) - x / w);
               },
               settings, peak)
        .value;
  };

  std::vector<double> terms;
  terms.push_back(power_integral(n - 1) / std::exp(n * std::log(w) + std::lgamma(static_cast<double>(n))));
  for (int l = 1; l <= big_n - n; ++l) {
    const double sign = ((n + l - 1) % 2 == 0) ? 1.0 : -1.0;
    const double coefficient = sign * binomial(big_n - n, l) * std::pow(static_cast<double>(n) / l, n - 1) / w;
    const double phi = (1.0 + static_cast<double>(l) / n) / w;
    const double z = phi / c;
    const double i2 = std::exp(shift + (nu - 1.0) * std::log(phi) - nu * std::log(c) + z +
                               log_upper_incomplete_gamma(1.0 - nu, z));
    terms.push_back(coefficient * i2);
    double factor = 1.0;  // (-l/(nW))^m / m!
    for (int m = 0; m <= n - 2; ++m) {
      terms.push_back(-coefficient * factor * power_integral(m));
      factor *= -static_cast<double>(l) / (n * w) / (m + 1);
    }
  }
  const double scaled = binomial(big_n, n) * alternating_sum(terms);
  if (!(scaled > 0.0)) throw NumericalError("ec_strong_decomposed: non-positive expectation");
  double magnitude = 0.0;
  for (double t : terms) magnitude += std::abs(t);
  return {std::max(-(std::log(scaled) - shift) / (nu * kLn2), 0.0), binomial(big_n, n) * magnitude / scaled};
}

double ec_weak_sc(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                  const QuadratureSettings& settings) {
  validate_inputs(pair, split, qos, snr);
  return weak_ec(pair, split, qos, snr, settings, WeakDensity::sc).value;
}

double ec_weak_mrc(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                   const QuadratureSettings& settings) {
  validate_inputs(pair, split, qos, snr);
  return weak_ec(pair, split, qos, snr, settings, WeakDensity::mrc).value;
}

double ec_weak_general(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                       const SnrPoint& snr, const QuadratureSettings& settings) {
  validate_inputs(pair, split, qos, snr);
  return weak_ec(pair, split, qos, snr, settings, WeakDensity::general).value;
}

EcReport ec_exact(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                  const QuadratureSettings& settings) {
  validate_inputs(pair, split, qos, snr);
  const CombiningMode mode = combining_mode(pair);
  const EcMethod method = mode == CombiningMode::sc    ? EcMethod::sc_closed
                          : mode == CombiningMode::mrc ? EcMethod::mrc_closed
                                                       : EcMethod::general_quadrature;
  return make_report(strong_ec(pair, split, qos, snr, settings),
                     weak_ec(pair, split, qos, snr, settings, WeakDensity::automatic), method);
}

double ec_oma(const GscSpec& spec, const QosProfile& qos, const SnrPoint& snr, const QuadratureSettings& settings) {
  spec.validate();
  qos.validate();
  snr.validate();
  return oma_ec(spec, qos, snr, settings).value;
}

EcReport ec_oma_pair(const UserPairSpec& pair, const QosProfile& qos, const SnrPoint& snr,
                     const QuadratureSettings& settings) {
  pair.validate();
  qos.validate();
  snr.validate();
  return make_report(oma_ec(pair.strong, qos, snr, settings), oma_ec(pair.weak, qos, snr, settings), EcMethod::oma);
}

EcReport ec_high_snr(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr) {
  validate_inputs(pair, split, qos, snr);
  const double nu = qos.nu();
  if (nu >= 1.0) {
    std::ostringstream os;
    os << "high-SNR approximation holds only for nu < 1 (nu = " << nu << ")";
    throw ValidityError(os.str());
  }
  const int big_n = pair.strong.antennas;
  const int n = pair.strong.combined;
  const double w = pair.strong.mean_square_gain;
  const GscDistribution dist(pair.strong);

  double e_strong = 0.0;
  if (routes_to_ergodic(qos)) {
    // nu -> 0 limit of -(1/nu) log2 E[g^-nu] is E[log2 g].
    const auto r = integrate_semi_infinite(
        [&](double x) { return x == 0.0 ? 0.0 : dist.pdf(x) * std::log2(x); }, default_capacity_quadrature(),
        dist.raw_moment(1));
    e_strong = std::log2(split.a_s * snr.rho) + r.value;
  } else {
    // E[g^-nu] term by term.
    std::vector<double> terms;
    terms.push_back(std::tgamma(n - nu) / (std::pow(w, nu) * std::tgamma(static_cast<double>(n))));
    for (int l = 1; l <= big_n - n; ++l) {
      const double sign = ((n + l - 1) % 2 == 0) ? 1.0 : -1.0;
      const double coefficient = sign * binomial(big_n - n, l) * std::pow(static_cast<double>(n) / l, n - 1) / w;
      const double phi = (1.0 + static_cast<double>(l) / n) / w;
      terms.push_back(coefficient * std::tgamma(1.0 - nu) * std::pow(phi, nu - 1.0));
      double factor = 1.0;  // (-l/(nW))^m / m!
      for (int m = 0; m <= n - 2; ++m) {
        terms.push_back(-coefficient * factor * std::tgamma(m - nu + 1.0) * std::pow(w, m - nu + 1.0));
        factor *= -static_cast<double>(l) / (n * w) / (m + 1);
      }
    }
    const double negative_moment = binomial(big_n, n) * alternating_sum(terms);
    if (!(negative_moment > 0.0)) throw NumericalError("ec_high_snr: non-positive negative moment");
    e_strong = std::log2(split.a_s * snr.rho) - std::log2(negative_moment) / nu;
  }
  const double e_weak = std::log2(1.0 + split.a_w() / split.a_s);
  return {e_strong, e_weak, e_strong + e_weak, EcMethod::high_snr, 0.0};
}

EcReport ec_low_snr(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                    CombiningMode mode) {
  pair.validate();
  split.validate();
  qos.validate();
  if (!(snr.rho >= 0.0) || !std::isfinite(snr.rho)) throw ConfigError("ec_low_snr: rho must be >= 0");
  const CombiningMode actual = combining_mode(pair);
  const bool both_full =
      pair.strong.combined == pair.strong.antennas && pair.weak.combined == pair.weak.antennas;
  if ((mode == CombiningMode::sc && actual != CombiningMode::sc) || (mode == CombiningMode::mrc && !both_full)) {
    throw PreconditionError("ec_low_snr: mode " + to_string(mode) + " does not match the pair's combining");
  }
  const Moments strong = gsc_moments(pair.strong);
  const Moments weak = mode == CombiningMode::general ? min_moments_numeric(pair) : min_moments(pair, mode);
  const double nu = qos.nu();
  const double a_s = split.a_s;
  const double a_w = split.a_w();
  const double rho = snr.rho;

  const double d_strong = kLog2e * a_s * strong.mean;
  const double dd_strong = kLog2e * a_s * a_s * (nu * strong.mean * strong.mean - (nu + 1.0) * strong.second_moment);
  // The SINR expansion gamma_w = a_w rho g - a_w a_s rho^2 g^2 + O(rho^3)
  // contributes the 2 a_s term with a negative sign.
  const double d_weak = kLog2e * a_w * weak.mean;
  const double dd_weak =
      kLog2e * a_w * (nu * a_w * weak.mean * weak.mean - ((nu + 1.0) * a_w + 2.0 * a_s) * weak.second_moment);

  const double e_strong = rho * d_strong + 0.5 * rho * rho * dd_strong;
  const double e_weak = rho * d_weak + 0.5 * rho * rho * dd_weak;
  return {e_strong, e_weak, e_strong + e_weak, EcMethod::low_snr, 0.0};
}

EcReport ergodic_rate(const UserPairSpec& pair, const PowerSplit& split, const SnrPoint& snr,
                      const QuadratureSettings& settings) {
  pair.validate();
  split.validate();
  snr.validate();
  const GscDistribution strong(pair.strong);
  const MinDistribution minimum(pair);
  const auto s = expected_log2_rate([&](double x) { return strong.pdf(x); }, {split.a_s * snr.rho, 0.0},
                                    strong.raw_moment(1), settings);
  const auto w = expected_log2_rate([&](double x) { return minimum.pdf(x); },
                                    {split.a_w() * snr.rho, split.a_s * snr.rho}, min_scale(pair), settings);
  return make_report(s, w, EcMethod::ergodic_bound);
}

EcReport ergodic_rate_oma(const UserPairSpec& pair, const SnrPoint& snr, const QuadratureSettings& settings) {
  pair.validate();
  snr.validate();
  const QosProfile no_delay{0.0, 1.0, 1.0};
  return make_report(oma_ec(pair.strong, no_delay, snr, settings), oma_ec(pair.weak, no_delay, snr, settings),
                     EcMethod::ergodic_bound);
}

}  // namespace gscnoma
