#pragma once

#include <string>

#include "gscnoma/distributions.hpp"
#include "gscnoma/numerics.hpp"

namespace gscnoma {

/// Delay-QoS profile. `theta` is the delay exponent (1/bit), `block_length`
/// the fading-block length T in seconds and `bandwidth` B in Hz.
struct QosProfile {
  double theta = 1.0;
  double block_length = 1e-5;
  double bandwidth = 1e5;

  /// nu = theta T B / ln 2, the exponent in every EC integral.
  double nu() const;
  void validate() const;
};

/// Below this delay exponent the EC evaluators return the ergodic rate: the
/// expectation form is 0/0 at nu = 0.
inline constexpr double kErgodicThetaThreshold = 1e-9;

/// NOMA power split; a_w = 1 - a_s.
struct PowerSplit {
  double a_s = 0.24;

  double a_w() const { return 1.0 - a_s; }
  void validate() const;
};

/// Linear transmit SNR rho = E / sigma^2.
struct SnrPoint {
  double rho = 1.0;

  static SnrPoint from_db(double db);
  double db() const;
  void validate() const;
};

enum class EcMethod { exact, sc_closed, mrc_closed, general_quadrature, high_snr, low_snr, oma, ergodic_bound };
std::string to_string(EcMethod method);

/// Per-symbol and sum capacities in bits/s/Hz.
struct EcReport {
  double e_strong = 0.0;
  double e_weak = 0.0;
  double e_sum = 0.0;
  EcMethod method = EcMethod::exact;
  double numeric_error = 0.0;
};

/// Tolerances used by every quadrature-backed evaluator unless overridden.
QuadratureSettings default_capacity_quadrature();

double ec_strong(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                 const QuadratureSettings& settings = default_capacity_quadrature());

/// The strong-user EC assembled from the I1 / I2(l) / I3(m) decomposition of
/// the GSC density: I2(l) in closed form through Gamma(1 - nu, .), I1 and
/// I3(m) by quadrature. Independent cross-check of ec_strong. Each l-branch
/// subtracts a Taylor polynomial from its exponential integral, so the
/// decomposition cancels badly when a_s rho is large; `condition` is
/// sum |terms| / |sum|, the factor by which rounding and quadrature error
/// are amplified.
struct StrongDecomposition {
  double value = 0.0;
  double condition = 1.0;
};
StrongDecomposition ec_strong_decomposed(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                                         const SnrPoint& snr,
                                         const QuadratureSettings& settings = default_capacity_quadrature());

double ec_weak_sc(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                  const QuadratureSettings& settings = default_capacity_quadrature());
double ec_weak_mrc(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                   const QuadratureSettings& settings = default_capacity_quadrature());
double ec_weak_general(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                       const SnrPoint& snr, const QuadratureSettings& settings = default_capacity_quadrature());

/// NOMA EC of both symbols; the weak user goes through the SC or MRC
/// density when the pair allows it (method sc_closed / mrc_closed), the
/// general min density otherwise (general_quadrature).
EcReport ec_exact(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                  const QuadratureSettings& settings = default_capacity_quadrature());

/// OMA (time-division, half rate) EC of one user at full power.
double ec_oma(const GscSpec& spec, const QosProfile& qos, const SnrPoint& snr,
              const QuadratureSettings& settings = default_capacity_quadrature());

/// OMA EC of both users of the pair.
EcReport ec_oma_pair(const UserPairSpec& pair, const QosProfile& qos, const SnrPoint& snr,
                     const QuadratureSettings& settings = default_capacity_quadrature());

/// High-SNR approximation. Throws ValidityError when nu >= 1, where the
/// negative moment E[g^-nu] used by the strong-user term diverges.
EcReport ec_high_snr(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr);

/// Two-term low-SNR expansion rho E' + rho^2 E'' / 2. `mode` sc and mrc use
/// closed-form g_min moments and must match the pair; general uses
/// quadrature moments of the general min density.
EcReport ec_low_snr(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos, const SnrPoint& snr,
                    CombiningMode mode);

/// Average achievable rates E[log2(1 + gamma)], the theta-independent upper
/// bound on every EC at the same operating point.
EcReport ergodic_rate(const UserPairSpec& pair, const PowerSplit& split, const SnrPoint& snr,
                      const QuadratureSettings& settings = default_capacity_quadrature());

/// Half-rate OMA ergodic rates 0.5 E[log2(1 + rho g)] per user.
EcReport ergodic_rate_oma(const UserPairSpec& pair, const SnrPoint& snr,
                          const QuadratureSettings& settings = default_capacity_quadrature());

}  // namespace gscnoma
