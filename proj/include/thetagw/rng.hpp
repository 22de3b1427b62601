#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace thetagw {

/// Per-replicate random stream. The state is a pure function of
/// (master_seed, stream_index), so replicates can run on any thread in any
/// order and still draw identical numbers.
class Rng {
 public:
  Rng(std::uint64_t master_seed, std::uint64_t stream_index, bool antithetic = false)
      : antithetic_(antithetic) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32U),
                      static_cast<std::uint32_t>(stream_index),
                      static_cast<std::uint32_t>(stream_index >> 32U)};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  /// An antithetic stream returns the mirror image of the same draws.
  double uniform() {
    std::uint64_t k = engine_() >> 11U;
    if (antithetic_) k = (std::uint64_t{1} << 53U) - 1U - k;
    return static_cast<double>(k) * 0x1.0p-53;
  }

  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool antithetic_;
};

}  // namespace thetagw
