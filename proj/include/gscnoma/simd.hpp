#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace gscnoma::simd {

enum class Isa { scalar, avx2 };
std::string to_string(Isa isa);

/// Environment variable forcing an instruction set ("scalar" or "avx2").
inline constexpr const char* kIsaEnv = "GSCNOMA_SIMD";

bool isa_supported(Isa isa);
/// The instruction set the kernels currently dispatch to: GSCNOMA_SIMD if
/// set, else the best supported one.
Isa active_isa();
/// Forces an instruction set; throws ConfigError when it is unsupported.
void set_isa(Isa isa);

/// gamma(g) = signal g / (interference g + 1)
struct RateModel {
  double signal = 1.0;
  double interference = 0.0;
};

struct MomentSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
};

/// Sums of y = expm1(shift - exponent log1p(gamma(g))) and y^2.
MomentSums accumulate_ec_terms(std::span<const double> gains, RateModel rate, double exponent, double shift);

/// Sums of log2(1 + gamma(g)) and its square.
MomentSums accumulate_log2_rate(std::span<const double> gains, RateModel rate);

/// out[i] = -mean ln u_i with u_i = uniform_open_closed(bits[i]).
void exponential_variates(std::span<const std::uint64_t> bits, double mean, std::span<double> out);

/// out[i] = min(a[i], b[i]).
void elementwise_min(std::span<const double> a, std::span<const double> b, std::span<double> out);

namespace detail {

struct KernelTable {
  MomentSums (*ec_terms)(std::span<const double>, RateModel, double, double);
  MomentSums (*log2_rate)(std::span<const double>, RateModel);
  void (*exponential)(std::span<const std::uint64_t>, double, std::span<double>);
  void (*minimum)(std::span<const double>, std::span<const double>, std::span<double>);
};

const KernelTable& scalar_kernels();
/// Null when the library was built without AVX2 support.
const KernelTable* avx2_kernels();

}  // namespace detail
}  // namespace gscnoma::simd
