#pragma once

#include <array>
#include <cstdint>

namespace gscnoma {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123): a keyed
/// bijection of a 256-bit counter. Any block is computable independently,
/// so parallel workers reproduce the serial stream exactly.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox4x64(Key key) : key_(key) {}

  Counter operator()(Counter counter) const;

 private:
  Key key_;
};

/// Uniform variate in (0, 1] from the top 52 bits of a word: 2 - [1, 2).
/// Zero is excluded so -log(u) stays finite.
double uniform_open_closed(std::uint64_t bits);

}  // namespace gscnoma
