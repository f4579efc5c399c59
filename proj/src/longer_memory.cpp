#include "memone/longer_memory.hpp"

#include "memone/seeding.hpp"
#include "memone/zd_metrics.hpp"

#include <cmath>
#include <limits>

namespace memone {

double gambler_utility(const GamblerStrategy& f, const std::vector<MemoryOneStrategy>& opponents, int turns,
                       int reps, std::uint64_t seed, const PayoffValues& payoffs) {
  if (turns < 3) throw ConstraintError("gambler_utility needs turns >= 3");
  if (reps < 1) throw ConstraintError("gambler_utility needs reps >= 1");
  if (opponents.empty()) throw ConstraintError("gambler_utility needs at least one opponent");
  double total = 0.0;
  for (std::size_t i = 0; i < opponents.size(); ++i) {
    MatchOptions options;
    options.turns = turns;
    options.repetitions = reps;
    options.seed = derive_seed(seed, i);
    total += simulate_match(f, opponents[i], options, payoffs).mean_a;
  }
  return total / static_cast<double>(opponents.size());
}

GamblerOptimum optimize_gambler(const std::vector<MemoryOneStrategy>& opponents, int budget, int turns, int reps,
                                std::uint64_t seed, const std::vector<GamblerStrategy>& warm_starts,
                                const PayoffValues& payoffs) {
  if (budget < 10 * GamblerStrategy::kParameters) throw ConstraintError("optimize_gambler needs budget >= 170");
  auto objective = [&](const Eigen::VectorXd& x) {
    return gambler_utility(GamblerStrategy(GamblerStrategy::Parameters(x)), opponents, turns, reps, seed, payoffs);
  };
  GlobalOptimizeOptions options;
  options.budget = budget;
  options.seed = seed;
  for (const auto& g : warm_starts) options.initial_points.push_back(g.serialize());
  const OptimizeResult r = global_optimize(objective, GamblerStrategy::kParameters, options);
  return {GamblerStrategy(GamblerStrategy::Parameters(r.point)), r.value, r.evaluations};
}

ComparisonOptions ComparisonOptions::full() {
  ComparisonOptions o;
  o.turns = 500;
  o.reps = 200;
  return o;
}

std::vector<ComparisonRecord> compare_experiment(const ComparisonOptions& options) {
  if (options.trials < 1) throw ConstraintError("compare_experiment needs trials >= 1");
  std::vector<ComparisonRecord> out;
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, static_cast<std::uint64_t>(t));
    ComparisonRecord rec;
    rec.trial = t;
    rec.opponents = random_opponents(options.n_opponents, trial_seed);

    BestResponseOptions br = options.best_response;
    br.seed = trial_seed;
    const auto best = best_response(TournamentContext(rec.opponents, options.payoffs), br);
    rec.memory_one = best.strategy;
    rec.memory_one_utility = best.utility;

    std::vector<GamblerStrategy> warm;
    if (options.warm_start) warm.push_back(GamblerStrategy::from_memory_one(best.strategy));
    const auto g = optimize_gambler(rec.opponents, options.budget, options.turns, options.reps,
                                    derive_seed(trial_seed, 1), warm, options.payoffs);
    rec.gambler = g.strategy;
    rec.gambler_utility = g.utility;
    rec.gambler_holdout_utility = gambler_utility(g.strategy, rec.opponents, options.turns, options.reps,
                                                  derive_seed(trial_seed, 2), options.payoffs);
    rec.ratio = rec.memory_one_utility > 0.0 ? rec.gambler_utility / rec.memory_one_utility
                                             : std::numeric_limits<double>::quiet_NaN();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace memone
