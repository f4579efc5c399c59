// Moran process with a best-response mutant type, best-response dynamics with
// self-interactions, and the stability test for defection.

#ifndef MEMONE_EVOLUTION_HPP
#define MEMONE_EVOLUTION_HPP

#include "memone/best_response.hpp"
#include "memone/stats.hpp"

#include <cstdint>
#include <vector>

namespace memone {

/// (1/N) sum_i u_{q_i}(p) + K u_p(p), where u_p(p) is p's payoff against itself.
Evaluation self_play_objective(const MemoryOneStrategy& p, const TournamentContext& opponents, int K);

struct DynamicsOptions {
  double tol = 1e-6;
  int max_iter = 50;
  BestResponseOptions best_response;
};

struct DynamicsResult {
  MemoryOneStrategy strategy;
  bool converged = false;
  int iterations = 0;
  /// Value of the last step's objective: the tournament against the
  /// opponents plus the previous iterate with weight K.
  double objective = 0.0;
};

/// Starts at (1,1,1,1); each step is a best response to the opponents plus
/// the previous iterate at weight K. Stops once successive iterates differ by
/// less than tol in the infinity norm.
DynamicsResult best_response_dynamics(const TournamentContext& opponents, int K, const DynamicsOptions& options = {});

struct PayoffMatrixK {
  double A11 = 0.0;  ///< p against p
  double A12 = 0.0;  ///< p against q
  double A21 = 0.0;  ///< q against p
  double A22 = 0.0;  ///< q against q
  bool degenerate = false;
};

PayoffMatrixK payoff_matrix_K(const MemoryOneStrategy& p, const MemoryOneStrategy& q, const PayoffValues& payoffs = {});

/// f1 = (K-1) A11 + (n-K) A12 for the p type, f2 = K A21 + (n-K-1) A22.
struct Fitness {
  double f1 = 0.0;
  double f2 = 0.0;
};

Fitness fitness(const PayoffMatrixK& A, int n, int K);

/// Backward over forward transition probability at count K, which is f2/f1.
/// Infinite when only the backward move is possible, 1 when neither is.
double gamma_ratio(const Fitness& f);

/// Probability that K mutants fix, given gamma_1 ... gamma_{n-1}. Products
/// are summed in log space; zero and infinite ratios are resolved as limits.
double fixation_from_gammas(const std::vector<double>& gammas, int K);

/// Fixed mutant strategy p against resident q in a population of n.
double fixation_probability(const MemoryOneStrategy& p, const MemoryOneStrategy& q, int n, int K,
                            const PayoffValues& payoffs = {});

struct MoranConfig {
  int n = 4;
  MemoryOneStrategy opponent;
  PayoffValues payoffs;
  bool dynamic = true;
  std::vector<int> K_values{1, 2, 3};
};

struct FixationResult {
  std::vector<int> K_values;
  std::vector<double> x;        ///< dynamic fixation probability per K
  std::vector<double> x_tilde;  ///< static baseline per K
  std::vector<double> ratio;    ///< x / x_tilde
  /// Best-response dynamics result at counts 1 ... n-1.
  std::vector<MemoryOneStrategy> strategies;
  std::vector<bool> converged;
  /// gamma_1 ... gamma_{n-1} with the strategy re-optimized at every count.
  std::vector<double> gammas;
};

/// Dynamic: the mutant at count i plays the best-response dynamics fixed point
/// for K = i. Static: the strategy found at the starting K is kept at every
/// count. When cfg.dynamic is false only the static values are filled (x equals
/// x_tilde).
FixationResult fixation_probabilities(const MoranConfig& cfg, const DynamicsOptions& options = {});

struct DynamicRatioRecord {
  int trial = 0;
  MemoryOneStrategy opponent;
  FixationResult result;
};

struct DynamicRatioReport {
  std::vector<DynamicRatioRecord> records;
  double mean_ratio = 0.0;
  double min_ratio = 0.0;
  SummaryStatistics summary;
};

/// Trial t draws its opponent from derive_seed(seed, t).
DynamicRatioReport dynamic_ratio_experiment(int trials, int n, std::uint64_t seed,
                                            const std::vector<int>& K_values = {1, 2, 3},
                                            const DynamicsOptions& options = {}, const PayoffValues& payoffs = {});

/// Components below this count as non-positive in the stability condition.
inline constexpr double kStabilityTolerance = 1e-12;

struct DefectionStability {
  bool stable = false;
  /// sum_i (c_i abar_i - cbar_i a_i), weighted like the tournament.
  Eigen::Vector4d condition = Eigen::Vector4d::Zero();
  /// Gradient of the tournament utility at p = 0.
  Eigen::Vector4d derivative_at_zero = Eigen::Vector4d::Zero();
  /// sum_i abar_i vanishes, so the test does not apply.
  bool inapplicable = false;
};

DefectionStability defection_stable(const TournamentContext& ctx);

}  // namespace memone

#endif  // MEMONE_EVOLUTION_HPP
