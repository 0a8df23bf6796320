#include "roughlab/rng.hpp"

namespace roughlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t path, std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ path);
  return splitmix64(h ^ (stream * 0xd1b54a32d192ed03ULL));
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t path, std::uint64_t stream)
    : engine_(derive_seed(seed, path, stream)) {}

}  // namespace roughlab
