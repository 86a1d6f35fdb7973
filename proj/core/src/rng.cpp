#include "warmstandby/rng.hpp"

#include <array>
#include <cmath>

#include "warmstandby/error.hpp"

namespace warmstandby {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t master_seed, std::uint64_t stream,
                            StreamDomain domain) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ static_cast<std::uint64_t>(domain));
  const std::uint64_t g = splitmix64(h ^ 0x5851f42d4c957f2dULL);
  std::array<std::uint32_t, 8> words{
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32),
      static_cast<std::uint32_t>(domain),
      static_cast<std::uint32_t>(h),
      static_cast<std::uint32_t>(h >> 32),
      static_cast<std::uint32_t>(g),
  };
  return std::seed_seq(words.begin(), words.end());
}

}  // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream, StreamDomain domain) {
  auto seq = make_seed_seq(master_seed, stream, domain);
  engine_.seed(seq);
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw DomainError("exponential: rate must be positive");
  return -std::log(uniform()) / rate;
}

}  // namespace warmstandby
