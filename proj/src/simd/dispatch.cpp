#include <atomic>
#include <cstdlib>
#include <string>

#include "gscnoma/error.hpp"
#include "gscnoma/simd.hpp"

namespace gscnoma::simd {
namespace detail {
#ifndef GSCNOMA_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
}  // namespace detail

namespace {

bool cpu_has_avx2() {
#if defined(GSCNOMA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv(kIsaEnv); env != nullptr && *env != '\0') {
    const std::string value = env;
    if (value == "scalar") return Isa::scalar;
    if (value == "avx2") {
      if (!cpu_has_avx2()) throw ConfigError(std::string(kIsaEnv) + "=avx2 but AVX2/FMA is unavailable");
      return Isa::avx2;
    }
    throw ConfigError(std::string(kIsaEnv) + ": expected 'scalar' or 'avx2', got '" + value + "'");
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<int>& isa_slot() {
  static std::atomic<int> slot{static_cast<int>(initial_isa())};
  return slot;
}

const detail::KernelTable& table() {
  return active_isa() == Isa::avx2 ? *detail::avx2_kernels() : detail::scalar_kernels();
}

}  // namespace

std::string to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

Isa active_isa() { return static_cast<Isa>(isa_slot().load(std::memory_order_relaxed)); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw ConfigError("instruction set " + to_string(isa) + " is not supported here");
  isa_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

MomentSums accumulate_ec_terms(std::span<const double> gains, RateModel rate, double exponent, double shift) {
  return table().ec_terms(gains, rate, exponent, shift);
}

MomentSums accumulate_log2_rate(std::span<const double> gains, RateModel rate) {
  return table().log2_rate(gains, rate);
}

void exponential_variates(std::span<const std::uint64_t> bits, double mean, std::span<double> out) {
  if (out.size() < bits.size()) throw DomainError("exponential_variates: output shorter than input");
  table().exponential(bits, mean, out);
}

void elementwise_min(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (b.size() != a.size() || out.size() < a.size()) throw DomainError("elementwise_min: size mismatch");
  table().minimum(a, b, out);
}

}  // namespace gscnoma::simd
