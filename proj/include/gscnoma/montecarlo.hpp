#pragma once

#include <cstdint>
#include <vector>

#include "gscnoma/capacity.hpp"
#include "gscnoma/distributions.hpp"
#include "gscnoma/simd.hpp"

namespace gscnoma {

/// Monte Carlo plan. Trial t of a plan always consumes the same Philox
/// counters, so results depend on (samples, seed) only: `batch` and the
/// worker count change scheduling, never the draws, and batch partials are
/// merged in a fixed order.
struct SimPlan {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240607;
  std::uint64_t batch = 65536;
  std::size_t workers = 0;  // 0 = default_worker_count()

  void validate() const;
};

/// Mean of a per-sample functional (EC estimates carry the delta-method
/// error of the log transform).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples_used = 0;
};

struct EstimatePair {
  Estimate strong;
  Estimate weak;
};

/// Per-trial combined powers of one pair: g_s, g_w (independent channels)
/// and g_min = min(g_s, g_w) of the same trial.
struct ChannelDraws {
  UserPairSpec pair;
  std::vector<double> strong;
  std::vector<double> weak;
  std::vector<double> minimum;
};

/// Sum of the n largest of N exponential branch powers with mean W, one
/// value per trial. `user` selects the counter stream (0 strong, 1 weak).
std::vector<double> sample_gsc_power(const GscSpec& spec, const SimPlan& plan, std::uint32_t user = 0);

ChannelDraws draw_channels(const UserPairSpec& pair, const SimPlan& plan);

/// -(1/nu) log2 mean[(1 + gamma(g))^(-scale nu)] over the gains, with
/// scale = 1 for NOMA links and 1/2 for OMA. Below kErgodicThetaThreshold
/// it is scale times the mean of log2(1 + gamma). `typical_gain` only picks
/// the rescaling of the per-sample terms.
Estimate estimate_ec_from_gains(const std::vector<double>& gains, simd::RateModel rate, double exponent_scale,
                                const QosProfile& qos, double typical_gain, const SimPlan& plan);

Estimate estimate_ec_strong(const ChannelDraws& draws, const PowerSplit& split, const QosProfile& qos,
                            const SnrPoint& snr, const SimPlan& plan);
Estimate estimate_ec_weak(const ChannelDraws& draws, const PowerSplit& split, const QosProfile& qos,
                          const SnrPoint& snr, const SimPlan& plan);
EstimatePair estimate_ergodic(const ChannelDraws& draws, const PowerSplit& split, const SnrPoint& snr,
                              const SimPlan& plan);
/// OMA EC of both users (strong gains for the strong user, weak gains for the weak one).
EstimatePair estimate_ec_oma_pair(const ChannelDraws& draws, const QosProfile& qos, const SnrPoint& snr,
                                  const SimPlan& plan);
/// Half-rate OMA ergodic rates of both users.
EstimatePair estimate_ergodic_oma(const ChannelDraws& draws, const SnrPoint& snr, const SimPlan& plan);

// Convenience forms that draw the channels themselves.
Estimate estimate_ec_strong(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                            const SnrPoint& snr, const SimPlan& plan);
Estimate estimate_ec_weak(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                          const SnrPoint& snr, const SimPlan& plan);
EstimatePair estimate_ergodic(const UserPairSpec& pair, const PowerSplit& split, const SnrPoint& snr,
                              const SimPlan& plan);
Estimate estimate_ec_oma(const GscSpec& spec, const QosProfile& qos, const SnrPoint& snr, const SimPlan& plan);

}  // namespace gscnoma
