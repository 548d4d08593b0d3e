#include "lcvx/rng.hpp"

namespace lcvx {

std::uint64_t CounterRng::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t key)
    : base_(mix(mix(seed) ^ (key * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::next() { return mix(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double CounterRng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

}  // namespace lcvx
