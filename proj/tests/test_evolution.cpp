#include "memone/evolution.hpp"
#include "memone/seeding.hpp"
#include "memone/zd_metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <limits>

using namespace memone;

TEST_CASE("self-play objective") {
  const auto C = MemoryOneStrategy::cooperator();
  const MemoryOneStrategy p(0.9, 0.1, 0.2, 0.8);
  const TournamentContext ctx(random_opponents(2, 3));
  CHECK(self_play_objective(p, ctx, 0).value == tournament_utility(p, ctx).value);
  CHECK(self_play_objective(C, TournamentContext({C}), 2).value == doctest::Approx(9.0).epsilon(1e-7));
  double expected = 0.0;
  for (const auto& o : ctx.opponents()) expected += oracle::utility(p.vec(), o.source_opponent.vec()) / 2;
  expected += oracle::utility(p.vec(), p.vec());
  CHECK(std::abs(self_play_objective(p, ctx, 1).value - expected) <= 1e-8);
  CHECK_THROWS_AS(self_play_objective(p, ctx, -1), ConstraintError);
}

TEST_CASE("best response dynamics") {
  const TournamentContext coop({MemoryOneStrategy::cooperator()});
  const auto r0 = best_response_dynamics(coop, 0);
  CHECK(r0.converged);
  CHECK(r0.objective == doctest::Approx(5.0));
  CHECK(r0.strategy == MemoryOneStrategy::defector());

  const TournamentContext def({MemoryOneStrategy::defector()});
  const auto r5 = best_response_dynamics(def, 20);
  const double self = utility(r5.strategy, coefficients(r5.strategy)).value;
  CHECK(self >= 1.0 - 1e-9);

  // A converged fixed point reproduces itself under one more step.
  const TournamentContext ctx(random_opponents(1, 2));
  const auto r = best_response_dynamics(ctx, 1);
  REQUIRE(r.converged);
  const auto again = best_response(ctx.with_opponent(r.strategy, 1));
  CHECK(std::abs(again.utility - r.objective) < 1e-6);

  DynamicsOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(best_response_dynamics(ctx, 1, bad), ConstraintError);
}

TEST_CASE("non-convergence is reported") {
  // This opponent makes the iteration cycle through several corners.
  const auto q = random_opponents(1, derive_seed(0, 14)).front();
  DynamicsOptions o;
  o.max_iter = 12;
  const auto r = best_response_dynamics(TournamentContext({q}), 1, o);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 12);
}

TEST_CASE("payoff matrix") {
  const auto A = payoff_matrix_K(MemoryOneStrategy::defector(), MemoryOneStrategy::cooperator());
  CHECK(A.A11 == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(A.A12 == doctest::Approx(5.0));
  CHECK(A.A21 == doctest::Approx(0.0));
  CHECK(A.A22 == doctest::Approx(3.0).epsilon(1e-7));

  const MemoryOneStrategy p(0.9, 0.1, 0.2, 0.8), q(0.3, 0.7, 0.6, 0.4);
  const auto B = payoff_matrix_K(p, q);
  CHECK(std::abs(B.A11 - oracle::utility(p.vec(), p.vec())) <= 1e-8);
  CHECK(std::abs(B.A12 - oracle::utility(p.vec(), q.vec())) <= 1e-8);
  CHECK(std::abs(B.A21 - oracle::utility(q.vec(), p.vec())) <= 1e-8);
  CHECK(std::abs(B.A22 - oracle::utility(q.vec(), q.vec())) <= 1e-8);
  const auto same = payoff_matrix_K(q, q);
  CHECK(same.A11 == same.A12);
  CHECK(same.A21 == same.A22);
  CHECK(same.A11 == same.A22);
}

TEST_CASE("fixation probabilities") {
  const MemoryOneStrategy q(0.3, 0.7, 0.6, 0.4);
  for (int n = 2; n <= 10; ++n)
    for (int K = 1; K < n; ++K) CHECK(std::abs(fixation_probability(q, q, n, K) - double(K) / n) <= 1e-12);

  const MemoryOneStrategy p(0.9, 0.1, 0.2, 0.8);
  const auto A = payoff_matrix_K(p, q);
  const double g1 = gamma_ratio(fitness(A, 2, 1));
  CHECK(fixation_probability(p, q, 2, 1) == doctest::Approx(1.0 / (1.0 + g1)).epsilon(1e-14));
  CHECK(g1 == doctest::Approx(A.A21 / A.A12));

  double prev = 0.0;
  for (int K = 1; K < 8; ++K) {
    const double x = fixation_probability(p, q, 8, K);
    CHECK(x >= prev);
    CHECK(x <= 1.0);
    prev = x;
  }
}

TEST_CASE("gamma products with zero and infinite ratios") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(gamma_ratio({0.0, 2.0}) == inf);
  CHECK(gamma_ratio({2.0, 0.0}) == 0.0);
  CHECK(gamma_ratio({0.0, 0.0}) == 1.0);
  // The forward move from count 2 is impossible: 1 or 2 mutants never fix.
  CHECK(fixation_from_gammas({1.0, inf, 1.0}, 1) == 0.0);
  CHECK(fixation_from_gammas({1.0, inf, 1.0}, 2) == 0.0);
  CHECK(fixation_from_gammas({1.0, inf, 1.0}, 3) == doctest::Approx(0.5));
  // Once at 2 mutants the population cannot lose one.
  CHECK(fixation_from_gammas({1.0, 0.0, 1.0}, 2) == 1.0);
  CHECK(fixation_from_gammas({1.0, 0.0, 1.0}, 1) == doctest::Approx(0.5));
  // Large populations do not overflow.
  std::vector<double> big(400, 10.0);
  const double x = fixation_from_gammas(big, 200);
  CHECK(std::isfinite(x));
  CHECK(x >= 0.0);
  CHECK(x < 1e-100);
}

TEST_CASE("dynamic ratio against a cooperator is one") {
  MoranConfig cfg;
  cfg.n = 4;
  cfg.opponent = MemoryOneStrategy::cooperator();
  const auto r = fixation_probabilities(cfg);
  REQUIRE(r.ratio.size() == 3);
  for (double x : r.ratio) CHECK(x == 1.0);
  for (const auto& s : r.strategies) CHECK(s == MemoryOneStrategy::defector());
  cfg.K_values = {4};
  CHECK_THROWS_AS(fixation_probabilities(cfg), ConstraintError);
}

TEST_CASE("static mode and determinism") {
  MoranConfig cfg;
  cfg.n = 4;
  cfg.opponent = MemoryOneStrategy(0.3, 0.7, 0.6, 0.4);
  cfg.dynamic = false;
  const auto s = fixation_probabilities(cfg);
  for (std::size_t k = 0; k < s.x.size(); ++k) CHECK(s.x[k] == s.x_tilde[k]);
  const auto a = dynamic_ratio_experiment(1, 4, 17);
  const auto b = dynamic_ratio_experiment(1, 4, 17);
  CHECK(a.records[0].result.ratio == b.records[0].result.ratio);
  CHECK(a.records[0].opponent == b.records[0].opponent);
  for (double x : a.records[0].result.x) CHECK((x >= 0.0 && x <= 1.0));
}

TEST_CASE("defection stability") {
  const TournamentContext stable({MemoryOneStrategy(0.22199, 0.87073, 0.20672, 0.91861),
                                  MemoryOneStrategy(0.48841, 0.61174, 0.76591, 0.51842),
                                  MemoryOneStrategy(0.2968, 0.18772, 0.08074, 0.73844)});
  const TournamentContext unstable({MemoryOneStrategy(0.96703, 0.54723, 0.97268, 0.71482),
                                    MemoryOneStrategy(0.69773, 0.21609, 0.97627, 0.0062),
                                    MemoryOneStrategy(0.25298, 0.43479, 0.77938, 0.19769)});
  const auto a = defection_stable(stable);
  const auto b = defection_stable(unstable);
  CHECK(a.stable);
  CHECK_FALSE(b.stable);
  CHECK_FALSE(a.inapplicable);
  for (const auto* r : {&a, &b})
    for (int i = 0; i < 4; ++i) CHECK((std::abs(r->condition[i]) <= 1e-10 || r->condition[i] * r->derivative_at_zero[i] > 0));

  // A single opponent: condition and gradient are the same expression up to abar^2.
  const MemoryOneStrategy q(0.4, 0.3, 0.8, 0.6);
  const auto s = defection_stable(TournamentContext({q}));
  const double abar = coefficients(q).form.abar;
  CHECK((s.derivative_at_zero - s.condition / (abar * abar)).cwiseAbs().maxCoeff() < 1e-12);
  const auto fd = oracle::central_gradient(
      [&](const Eigen::Vector4d& x) { return tournament_value_raw(x, TournamentContext({q})); }, Eigen::Vector4d::Zero());
  CHECK((fd - s.derivative_at_zero).norm() < 1e-6);

  const auto d = defection_stable(TournamentContext({MemoryOneStrategy::defector()}));
  CHECK(d.condition[0] == 0.0);
  CHECK(d.condition[1] == 0.0);
  CHECK(d.derivative_at_zero[0] == 0.0);
  CHECK(d.derivative_at_zero[1] == 0.0);
}
