// Simulated tournament utility and optimization of the Gambler strategy, and
// the Gambler versus memory-one best-response comparison.

#ifndef MEMONE_LONGER_MEMORY_HPP
#define MEMONE_LONGER_MEMORY_HPP

#include "memone/best_response.hpp"
#include "memone/gambler.hpp"
#include "memone/simulation.hpp"

#include <cstdint>
#include <vector>

namespace memone {

/// Mean over opponents of the simulated per-turn score of `f`. Opponent i is
/// played with match seed derive_seed(seed, i). Requires turns >= 3.
double gambler_utility(const GamblerStrategy& f, const std::vector<MemoryOneStrategy>& opponents, int turns,
                       int reps, std::uint64_t seed, const PayoffValues& payoffs = {});

struct GamblerOptimum {
  GamblerStrategy strategy;
  double utility = 0.0;
  int evaluations = 0;
};

/// Maximizes gambler_utility over [0,1]^17 with global_optimize. Every
/// evaluation uses the same seed (common random numbers), so the objective is
/// a deterministic function. `warm_starts` are evaluated before the design.
/// Requires budget >= 170.
GamblerOptimum optimize_gambler(const std::vector<MemoryOneStrategy>& opponents, int budget, int turns, int reps,
                                std::uint64_t seed, const std::vector<GamblerStrategy>& warm_starts = {},
                                const PayoffValues& payoffs = {});

struct ComparisonRecord {
  int trial = 0;
  std::vector<MemoryOneStrategy> opponents;
  GamblerStrategy gambler;
  double gambler_utility = 0.0;
  /// The same Gambler re-scored with an independent seed.
  double gambler_holdout_utility = 0.0;
  MemoryOneStrategy memory_one;
  double memory_one_utility = 0.0;
  /// gambler_utility / memory_one_utility, NaN when the latter is not positive.
  double ratio = 0.0;
};

struct ComparisonOptions {
  int trials = 10;
  std::uint64_t seed = 0;
  int budget = 1000;
  int turns = 200;
  int reps = 40;
  int n_opponents = 2;
  /// Seed the Gambler search with the embedding of the memory-one best response.
  bool warm_start = true;
  BestResponseOptions best_response;
  PayoffValues payoffs;

  /// turns=500, reps=200 as in long runs.
  static ComparisonOptions full();
};

/// Trial t draws opponents from derive_seed(seed, t); the Gambler search uses
/// derive_seed(trial seed, 1) and the holdout score derive_seed(trial seed, 2).
std::vector<ComparisonRecord> compare_experiment(const ComparisonOptions& options);

}  // namespace memone

#endif  // MEMONE_LONGER_MEMORY_HPP
