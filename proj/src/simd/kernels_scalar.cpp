#include <cmath>
#include <numbers>

#include "gscnoma/rng.hpp"
#include "gscnoma/simd.hpp"
#include "simd/compensated.hpp"

namespace gscnoma::simd::detail {
namespace {

MomentSums ec_terms(std::span<const double> gains, RateModel rate, double exponent, double shift) {
  CompensatedSum sum, sum_sq;
  for (double g : gains) {
    const double gamma = rate.signal * g / (rate.interference * g + 1.0);
    const double y = std::expm1(shift - exponent * std::log1p(gamma));
    sum.add(y);
    sum_sq.add(y * y);
  }
  return {sum.value(), sum_sq.value(), gains.size()};
}

MomentSums log2_rate(std::span<const double> gains, RateModel rate) {
  CompensatedSum sum, sum_sq;
  for (double g : gains) {
    const double gamma = rate.signal * g / (rate.interference * g + 1.0);
    const double r = std::log1p(gamma) * std::numbers::log2e;
    sum.add(r);
    sum_sq.add(r * r);
  }
  return {sum.value(), sum_sq.value(), gains.size()};
}

void exponential(std::span<const std::uint64_t> bits, double mean, std::span<double> out) {
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = -mean * std::log(uniform_open_closed(bits[i]));
}

void minimum(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = b[i] < a[i] ? b[i] : a[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{ec_terms, log2_rate, exponential, minimum};
  return table;
}

}  // namespace gscnoma::simd::detail
