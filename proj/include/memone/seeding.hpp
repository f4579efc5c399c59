// Seed splitting: every random stream derives from one 64-bit master seed.
//
//   command seed -> trial seed = derive_seed(master, trial)
//   trial seed   -> repetition seed = derive_seed(trial_seed, repetition)
//
// The mix is SplitMix64, so neighbouring indices give unrelated streams.

#ifndef MEMONE_SEEDING_HPP
#define MEMONE_SEEDING_HPP

#include <cstdint>
#include <random>

namespace memone {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace memone

#endif  // MEMONE_SEEDING_HPP
