#pragma once

#include <cstdint>
#include <random>

namespace warmstandby {

/// Stream domains keep path, coupling and probe randomness disjoint even when
/// they share a master seed and index.
enum class StreamDomain : std::uint32_t {
  path = 1,
  coupling = 2,
  probe = 3,
  sampler = 4,
};

/// Reproducible generator keyed by (master seed, stream index, domain).
///
/// Each key is expanded through SplitMix64 into the seed sequence of a
/// 64-bit Mersenne twister, so stream k of a run does not depend on how many
/// other streams were created or in which order. Variates are produced with
/// explicit transforms rather than <random> distributions, whose output is
/// implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t master_seed, std::uint64_t stream = 0,
               StreamDomain domain = StreamDomain::sampler);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace warmstandby
