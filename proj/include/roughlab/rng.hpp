#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace roughlab {

std::uint64_t splitmix64(std::uint64_t x);

// Mixes (seed, path, stream) into one 64-bit engine seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t path, std::uint64_t stream);

// Independent standard normal stream addressed by (seed, path, stream).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path, std::uint64_t stream);
  double operator()() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

// Stream ids reserved per consumer.
namespace streams {
inline constexpr std::uint64_t fbm = 0;
inline constexpr std::uint64_t limit_noise = 1u << 20;
}  // namespace streams

}  // namespace roughlab
