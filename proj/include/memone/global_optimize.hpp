// Derivative-free global search on the unit box [0,1]^d.
//
// Two phases: a scrambled Halton design covering half the budget, then
// compass (coordinate pattern) search from the best few design points with
// the remaining evaluations. Deterministic for a fixed seed.

#ifndef MEMONE_GLOBAL_OPTIMIZE_HPP
#define MEMONE_GLOBAL_OPTIMIZE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace memone {

using BoxObjective = std::function<double(const Eigen::VectorXd&)>;

struct OptimizeResult {
  Eigen::VectorXd point;
  double value = 0.0;
  int evaluations = 0;
};

struct GlobalOptimizeOptions {
  int budget = 2000;
  std::uint64_t seed = 0;
  /// Number of design points that seed a local search.
  int local_starts = 3;
  /// Extra points evaluated before the design, e.g. known good strategies.
  std::vector<Eigen::VectorXd> initial_points;
};

/// Maximizes `objective` over [0,1]^d. Requires budget >= 10 d. The returned
/// value is objective(point).
OptimizeResult global_optimize(const BoxObjective& objective, int d, const GlobalOptimizeOptions& options);

inline OptimizeResult global_optimize(const BoxObjective& objective, int d, int budget, std::uint64_t seed) {
  GlobalOptimizeOptions options;
  options.budget = budget;
  options.seed = seed;
  return global_optimize(objective, d, options);
}

/// Points of the Halton sequence in [0,1)^d, each coordinate shifted by a
/// seeded random offset modulo 1 (Cranley-Patterson rotation).
std::vector<Eigen::VectorXd> scrambled_halton(int count, int d, std::uint64_t seed, int skip = 0);

}  // namespace memone

#endif  // MEMONE_GLOBAL_OPTIMIZE_HPP
