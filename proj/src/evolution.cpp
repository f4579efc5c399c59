#include "memone/evolution.hpp"

#include "memone/seeding.hpp"
#include "memone/zd_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace memone {

namespace {

double self_utility(const MemoryOneStrategy& p, const PayoffValues& payoffs, bool& degenerate) {
  const Evaluation e = utility(p, coefficients(p, payoffs));
  degenerate = degenerate || e.degenerate;
  return e.value;
}

}  // namespace

Evaluation self_play_objective(const MemoryOneStrategy& p, const TournamentContext& opponents, int K) {
  if (K < 0) throw ConstraintError("self_play_objective needs K >= 0");
  Evaluation e = tournament_utility(p, opponents);
  if (K > 0) e.value += K * self_utility(p, opponents.payoffs(), e.degenerate);
  return e;
}

DynamicsResult best_response_dynamics(const TournamentContext& opponents, int K, const DynamicsOptions& options) {
  if (!(options.tol > 0.0)) throw ConstraintError("best_response_dynamics needs tol > 0");
  if (K < 0) throw ConstraintError("best_response_dynamics needs K >= 0");
  DynamicsResult out;
  out.strategy = MemoryOneStrategy::cooperator();
  for (int it = 1; it <= options.max_iter; ++it) {
    const TournamentContext ctx = K > 0 ? opponents.with_opponent(out.strategy, K) : opponents;
    const BestResponseResult next = best_response(ctx, options.best_response);
    const double step = (next.strategy.vec() - out.strategy.vec()).cwiseAbs().maxCoeff();
    out.strategy = next.strategy;
    out.objective = next.utility;
    out.iterations = it;
    if (step < options.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

PayoffMatrixK payoff_matrix_K(const MemoryOneStrategy& p, const MemoryOneStrategy& q, const PayoffValues& payoffs) {
  const auto cp = coefficients(p, payoffs);
  const auto cq = coefficients(q, payoffs);
  PayoffMatrixK A;
  const Evaluation e11 = utility(p, cp), e12 = utility(p, cq), e21 = utility(q, cp), e22 = utility(q, cq);
  A.A11 = e11.value;
  A.A12 = e12.value;
  A.A21 = e21.value;
  A.A22 = e22.value;
  A.degenerate = e11.degenerate || e12.degenerate || e21.degenerate || e22.degenerate;
  return A;
}

Fitness fitness(const PayoffMatrixK& A, int n, int K) {
  return {(K - 1) * A.A11 + (n - K) * A.A12, K * A.A21 + (n - K - 1) * A.A22};
}

double gamma_ratio(const Fitness& f) {
  if (f.f1 == 0.0 && f.f2 == 0.0) return 1.0;
  if (f.f1 == 0.0) return std::numeric_limits<double>::infinity();
  return f.f2 / f.f1;
}

double fixation_from_gammas(const std::vector<double>& gammas, int K) {
  const int n = static_cast<int>(gammas.size()) + 1;
  if (K < 0 || K > n) throw ConstraintError("fixation needs 0 <= K <= n");
  if (K == 0) return 0.0;
  if (K == n) return 1.0;
  // Term j is prod_{i<=j} gamma_i, held as eps^order * exp(log). A zero gamma
  // contributes order +1 and an infinite one order -1; only the lowest order
  // survives in the limit.
  std::vector<int> order(n, 0);
  std::vector<double> logs(n, 0.0);
  for (int j = 1; j < n; ++j) {
    const double g = gammas[j - 1];
    if (!(g >= 0.0)) throw ConstraintError("gamma ratios must be non-negative");
    order[j] = order[j - 1];
    logs[j] = logs[j - 1];
    if (g == 0.0) {
      ++order[j];
    } else if (std::isinf(g)) {
      --order[j];
    } else {
      logs[j] += std::log(g);
    }
  }
  const int lowest = *std::min_element(order.begin(), order.end());
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    if (order[j] == lowest) peak = std::max(peak, logs[j]);
  }
  double num = 0.0, den = 0.0;
  for (int j = 0; j < n; ++j) {
    if (order[j] != lowest) continue;
    const double w = std::exp(logs[j] - peak);
    den += w;
    if (j < K) num += w;
  }
  return std::clamp(num / den, 0.0, 1.0);
}

namespace {

std::vector<double> fixed_gammas(const MemoryOneStrategy& p, const MemoryOneStrategy& q, int n,
                                 const PayoffValues& payoffs) {
  const PayoffMatrixK A = payoff_matrix_K(p, q, payoffs);
  std::vector<double> g;
  for (int i = 1; i < n; ++i) g.push_back(gamma_ratio(fitness(A, n, i)));
  return g;
}

double ratio_of(double x, double x_tilde) {
  if (x == x_tilde) return 1.0;
  if (x_tilde == 0.0) return std::numeric_limits<double>::infinity();
  return x / x_tilde;
}

}  // namespace

double fixation_probability(const MemoryOneStrategy& p, const MemoryOneStrategy& q, int n, int K,
                            const PayoffValues& payoffs) {
  if (n < 2) throw ConstraintError("population size must be at least 2");
  return fixation_from_gammas(fixed_gammas(p, q, n, payoffs), K);
}

FixationResult fixation_probabilities(const MoranConfig& cfg, const DynamicsOptions& options) {
  if (cfg.n < 2) throw ConstraintError("population size must be at least 2");
  for (int K : cfg.K_values) {
    if (K < 1 || K >= cfg.n) throw ConstraintError("every K must satisfy 1 <= K < n");
  }
  FixationResult out;
  out.K_values = cfg.K_values;
  const TournamentContext ctx(std::vector<MemoryOneStrategy>{cfg.opponent}, cfg.payoffs);

  // Strategies are needed at every count in dynamic mode and only at the
  // starting counts otherwise.
  std::vector<int> needed;
  if (cfg.dynamic) {
    for (int i = 1; i < cfg.n; ++i) needed.push_back(i);
  } else {
    needed = cfg.K_values;
  }
  out.strategies.assign(cfg.n - 1, MemoryOneStrategy{});
  out.converged.assign(cfg.n - 1, false);
  std::vector<bool> have(cfg.n - 1, false);
  for (int i : needed) {
    if (have[i - 1]) continue;
    const DynamicsResult r = best_response_dynamics(ctx, i, options);
    out.strategies[i - 1] = r.strategy;
    out.converged[i - 1] = r.converged;
    have[i - 1] = true;
  }

  if (cfg.dynamic) {
    for (int i = 1; i < cfg.n; ++i) {
      const PayoffMatrixK A = payoff_matrix_K(out.strategies[i - 1], cfg.opponent, cfg.payoffs);
      out.gammas.push_back(gamma_ratio(fitness(A, cfg.n, i)));
    }
  }
  for (int K : cfg.K_values) {
    const double x_tilde = fixation_probability(out.strategies[K - 1], cfg.opponent, cfg.n, K, cfg.payoffs);
    const double x = cfg.dynamic ? fixation_from_gammas(out.gammas, K) : x_tilde;
    out.x_tilde.push_back(x_tilde);
    out.x.push_back(x);
    out.ratio.push_back(ratio_of(x, x_tilde));
  }
  return out;
}

DynamicRatioReport dynamic_ratio_experiment(int trials, int n, std::uint64_t seed, const std::vector<int>& K_values,
                                            const DynamicsOptions& options, const PayoffValues& payoffs) {
  if (trials < 1) throw ConstraintError("dynamic_ratio_experiment needs trials >= 1");
  DynamicRatioReport report;
  std::vector<double> ratios;
  for (int t = 0; t < trials; ++t) {
    DynamicRatioRecord rec;
    rec.trial = t;
    rec.opponent = random_opponents(1, derive_seed(seed, static_cast<std::uint64_t>(t))).front();
    MoranConfig cfg;
    cfg.n = n;
    cfg.opponent = rec.opponent;
    cfg.payoffs = payoffs;
    cfg.K_values = K_values;
    rec.result = fixation_probabilities(cfg, options);
    ratios.insert(ratios.end(), rec.result.ratio.begin(), rec.result.ratio.end());
    report.records.push_back(std::move(rec));
  }
  report.summary = summarize(ratios);
  report.mean_ratio = report.summary.mean;
  report.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  return report;
}

DefectionStability defection_stable(const TournamentContext& ctx) {
  DefectionStability out;
  double abar_sum = 0.0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& f = ctx.opponents()[i].form;
    out.condition += ctx.weights()[i] * (f.c * f.abar - f.cbar * f.a);
    abar_sum += f.abar;
  }
  out.inapplicable = std::abs(abar_sum) <= kStabilityTolerance;
  out.stable = !out.inapplicable && (out.condition.array() <= kStabilityTolerance).all();
  try {
    out.derivative_at_zero = tournament_gradient(Eigen::Vector4d::Zero(), ctx);
  } catch (const DegenerateDenominator&) {
    out.derivative_at_zero.setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

}  // namespace memone
