#include "gscnoma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "gscnoma/error.hpp"
#include "gscnoma/parallel.hpp"
#include "gscnoma/rng.hpp"

namespace gscnoma {
namespace {

struct RunningStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  static RunningStats from(const simd::MomentSums& s) {
    if (s.count == 0) return {};
    const double n = static_cast<double>(s.count);
    const double mean = s.sum / n;
    return {n, mean, std::max(0.0, s.sum_sq - s.sum * mean)};
  }

  void merge(const RunningStats& other) {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    const double delta = other.mean - mean;
    mean += delta * other.count / total;
    m2 += other.m2 + delta * delta * count * other.count / total;
    count = total;
  }

  double std_error() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

std::size_t batch_count(std::size_t total, std::uint64_t batch) {
  return (total + static_cast<std::size_t>(batch) - 1) / static_cast<std::size_t>(batch);
}

// Per-batch moment sums, merged in batch order.
RunningStats accumulate(const std::vector<double>& gains, const SimPlan& plan,
                        const std::function<simd::MomentSums(std::span<const double>)>& kernel) {
  if (gains.empty()) throw PreconditionError("Monte Carlo estimate: no samples");
  const std::size_t batches = batch_count(gains.size(), plan.batch);
  std::vector<simd::MomentSums> partial(batches);
  parallel_for(
      batches,
      [&](std::size_t b) {
        const std::size_t begin = b * plan.batch;
        const std::size_t end = std::min(gains.size(), begin + static_cast<std::size_t>(plan.batch));
        partial[b] = kernel(std::span<const double>(gains.data() + begin, end - begin));
      },
      plan.workers);
  RunningStats total;
  for (const auto& p : partial) total.merge(RunningStats::from(p));
  return total;
}

Estimate mean_log2_rate(const std::vector<double>& gains, simd::RateModel rate, double scale, const SimPlan& plan) {
  const RunningStats stats =
      accumulate(gains, plan, [rate](std::span<const double> g) { return simd::accumulate_log2_rate(g, rate); });
  return {scale * stats.mean, scale * stats.std_error(), static_cast<std::uint64_t>(stats.count)};
}

double min_typical_gain(const UserPairSpec& pair) {
  return std::min(gsc_moments(pair.strong).mean, gsc_moments(pair.weak).mean);
}

}  // namespace

void SimPlan::validate() const {
  if (samples == 0) throw ConfigError("SimPlan: samples must be >= 1");
  if (batch == 0) throw ConfigError("SimPlan: batch must be >= 1");
}

std::vector<double> sample_gsc_power(const GscSpec& spec, const SimPlan& plan, std::uint32_t user) {
  spec.validate();
  plan.validate();
  const Philox4x64 rng({plan.seed, 0});
  const std::size_t total = static_cast<std::size_t>(plan.samples);
  const std::size_t big_n = static_cast<std::size_t>(spec.antennas);
  const std::size_t n = static_cast<std::size_t>(spec.combined);
  const std::uint64_t blocks = (big_n + 3) / 4;
  std::vector<double> out(total);
  parallel_for(
      batch_count(total, plan.batch),
      [&](std::size_t b) {
        const std::size_t begin = b * plan.batch;
        const std::size_t end = std::min(total, begin + static_cast<std::size_t>(plan.batch));
        std::vector<std::uint64_t> bits((end - begin) * big_n);
        for (std::size_t t = begin; t < end; ++t) {
          std::uint64_t* dst = bits.data() + (t - begin) * big_n;
          for (std::uint64_t block = 0; block < blocks; ++block) {
            const auto words = rng({t, block, user, 0});
            const std::size_t offset = static_cast<std::size_t>(block) * 4;
            std::copy_n(words.begin(), std::min<std::size_t>(4, big_n - offset), dst + offset);
          }
        }
        std::vector<double> powers(bits.size());
        simd::exponential_variates(bits, spec.mean_square_gain, powers);
        for (std::size_t t = begin; t < end; ++t) {
          double* branch = powers.data() + (t - begin) * big_n;
          if (n < big_n) std::nth_element(branch, branch + (n - 1), branch + big_n, std::greater<>());
          double sum = 0.0;
          for (std::size_t i = 0; i < n; ++i) sum += branch[i];
          out[t] = sum;
        }
      },
      plan.workers);
  return out;
}

ChannelDraws draw_channels(const UserPairSpec& pair, const SimPlan& plan) {
  pair.validate();
  ChannelDraws draws{pair, sample_gsc_power(pair.strong, plan, 0), sample_gsc_power(pair.weak, plan, 1), {}};
  draws.minimum.resize(draws.strong.size());
  simd::elementwise_min(draws.strong, draws.weak, draws.minimum);
  return draws;
}

Estimate estimate_ec_from_gains(const std::vector<double>& gains, simd::RateModel rate, double exponent_scale,
                                const QosProfile& qos, double typical_gain, const SimPlan& plan) {
  plan.validate();
  qos.validate();
  if (qos.theta < kErgodicThetaThreshold) return mean_log2_rate(gains, rate, exponent_scale, plan);
  const double nu = qos.nu();
  const double exponent = exponent_scale * nu;
  const double typical_rate = rate.signal * typical_gain / (rate.interference * typical_gain + 1.0);
  const double probe = exponent * std::log1p(typical_rate);
  const double shift = probe < 1.0 ? 0.0 : probe;
  const RunningStats stats = accumulate(gains, plan, [&](std::span<const double> g) {
    return simd::accumulate_ec_terms(g, rate, exponent, shift);
  });
  const double scale = nu * std::numbers::ln2;
  const double log_inner = std::log1p(stats.mean) - shift;
  return {-log_inner / scale, stats.std_error() / ((1.0 + stats.mean) * scale),
          static_cast<std::uint64_t>(stats.count)};
}

Estimate estimate_ec_strong(const ChannelDraws& draws, const PowerSplit& split, const QosProfile& qos,
                            const SnrPoint& snr, const SimPlan& plan) {
  split.validate();
  snr.validate();
  return estimate_ec_from_gains(draws.strong, {split.a_s * snr.rho, 0.0}, 1.0, qos,
                                gsc_moments(draws.pair.strong).mean, plan);
}

Estimate estimate_ec_weak(const ChannelDraws& draws, const PowerSplit& split, const QosProfile& qos,
                          const SnrPoint& snr, const SimPlan& plan) {
  split.validate();
  snr.validate();
  return estimate_ec_from_gains(draws.minimum, {split.a_w() * snr.rho, split.a_s * snr.rho}, 1.0, qos,
                                min_typical_gain(draws.pair), plan);
}

EstimatePair estimate_ergodic(const ChannelDraws& draws, const PowerSplit& split, const SnrPoint& snr,
                              const SimPlan& plan) {
  split.validate();
  snr.validate();
  plan.validate();
  return {mean_log2_rate(draws.strong, {split.a_s * snr.rho, 0.0}, 1.0, plan),
          mean_log2_rate(draws.minimum, {split.a_w() * snr.rho, split.a_s * snr.rho}, 1.0, plan)};
}

EstimatePair estimate_ec_oma_pair(const ChannelDraws& draws, const QosProfile& qos, const SnrPoint& snr,
                                  const SimPlan& plan) {
  snr.validate();
  return {estimate_ec_from_gains(draws.strong, {snr.rho, 0.0}, 0.5, qos, gsc_moments(draws.pair.strong).mean, plan),
          estimate_ec_from_gains(draws.weak, {snr.rho, 0.0}, 0.5, qos, gsc_moments(draws.pair.weak).mean, plan)};
}

EstimatePair estimate_ergodic_oma(const ChannelDraws& draws, const SnrPoint& snr, const SimPlan& plan) {
  snr.validate();
  plan.validate();
  return {mean_log2_rate(draws.strong, {snr.rho, 0.0}, 0.5, plan),
          mean_log2_rate(draws.weak, {snr.rho, 0.0}, 0.5, plan)};
}

Estimate estimate_ec_strong(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                            const SnrPoint& snr, const SimPlan& plan) {
  return estimate_ec_strong(draw_channels(pair, plan), split, qos, snr, plan);
}

Estimate estimate_ec_weak(const UserPairSpec& pair, const PowerSplit& split, const QosProfile& qos,
                          const SnrPoint& snr, const SimPlan& plan) {
  return estimate_ec_weak(draw_channels(pair, plan), split, qos, snr, plan);
}

EstimatePair estimate_ergodic(const UserPairSpec& pair, const PowerSplit& split, const SnrPoint& snr,
                              const SimPlan& plan) {
  return estimate_ergodic(draw_channels(pair, plan), split, snr, plan);
}

Estimate estimate_ec_oma(const GscSpec& spec, const QosProfile& qos, const SnrPoint& snr, const SimPlan& plan) {
  snr.validate();
  return estimate_ec_from_gains(sample_gsc_power(spec, plan, 0), {snr.rho, 0.0}, 0.5, qos, gsc_moments(spec).mean,
                                plan);
}

}  // namespace gscnoma
