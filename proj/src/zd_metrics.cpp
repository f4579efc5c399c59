#include "memone/zd_metrics.hpp"

#include "memone/seeding.hpp"

#include <cassert>

namespace memone {

ZdMatrix c_matrix(const PayoffValues& pv) {
  ZdMatrix C;
  C << pv.R - pv.P, pv.R - pv.P,
       pv.S - pv.P, pv.T - pv.P,
       pv.T - pv.P, pv.S - pv.P,
       0.0, 0.0;
  return C;
}

ZdProjection nearest_zd(const MemoryOneStrategy& p, const PayoffValues& payoffs) {
  const ZdMatrix C = c_matrix(payoffs);
  ZdProjection out;
  out.p_bar = Eigen::Vector4d(p[0] - 1.0, p[1] - 1.0, p[2], p[3]);
  const Eigen::Matrix2d normal = C.transpose() * C;
  // Valid payoffs make the columns of C independent.
  assert(std::abs(normal.determinant()) > 0.0);
  if (!(std::abs(normal.determinant()) > 0.0)) throw std::domain_error("C^T C is singular");
  out.x_star = normal.ldlt().solve(C.transpose() * out.p_bar);
  out.sse = std::max(0.0, out.p_bar.dot(out.p_bar) - out.p_bar.dot(C * out.x_star));
  return out;
}

std::vector<MemoryOneStrategy> random_opponents(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MemoryOneStrategy> out;
  for (int i = 0; i < count; ++i) {
    Eigen::Vector4d q;
    for (int k = 0; k < 4; ++k) q[k] = uniform01(rng);
    out.emplace_back(q);
  }
  return out;
}

SseExperimentReport sse_experiment(const SseExperimentOptions& options) {
  if (options.trials < 1) throw ConstraintError("sse_experiment needs trials >= 1");
  if (options.n_opponents < 1) throw ConstraintError("sse_experiment needs at least one opponent");
  SseExperimentReport report;
  report.trials = options.trials;
  report.n_opponents = options.n_opponents;
  report.seed = options.seed;
  std::vector<double> sses;
  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = derive_seed(options.seed, static_cast<std::uint64_t>(t));
    SseTrialRecord rec;
    rec.trial = t;
    rec.opponents = random_opponents(options.n_opponents, trial_seed);
    BestResponseOptions br = options.best_response;
    br.seed = trial_seed;
    rec.best = best_response(TournamentContext(rec.opponents, options.payoffs), br);
    rec.sse = nearest_zd(rec.best.strategy, options.payoffs).sse;
    sses.push_back(rec.sse);
    report.records.push_back(std::move(rec));
  }
  report.summary = summarize(sses);
  return report;
}

}  // namespace memone
