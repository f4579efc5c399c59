// Monte Carlo match simulator: the independent oracle for closed-form results
// and the only way to score longer-memory strategies.

#ifndef MEMONE_SIMULATION_HPP
#define MEMONE_SIMULATION_HPP

#include "memone/gambler.hpp"
#include "memone/game.hpp"

#include <cstdint>
#include <variant>

namespace memone {

using Strategy = std::variant<MemoryOneStrategy, GamblerStrategy>;

struct MatchOptions {
  int turns = 500;
  int repetitions = 200;
  std::uint64_t seed = 0;
  /// Probability that an executed action is flipped, per player per turn.
  double noise = 0.0;
};

struct MatchResult {
  double mean_a = 0.0;  ///< per-turn score of the first player, averaged over repetitions
  double mean_b = 0.0;
  double stderr_a = 0.0;  ///< standard error of mean_a across repetitions
  double stderr_b = 0.0;
  int turns = 0;
  int repetitions = 0;
  std::uint64_t seed = 0;
};

/// Plays `a` against `b`. Memory-one players open with cooperation; Gambler
/// uses its opening probability. Repetition r draws from an RNG seeded with
/// derive_seed(seed, r), so the result is bit-reproducible for a fixed seed.
MatchResult simulate_match(const Strategy& a, const Strategy& b, const MatchOptions& options,
                           const PayoffValues& payoffs = {});

}  // namespace memone

#endif  // MEMONE_SIMULATION_HPP
