#include "memone/closed_form.hpp"
#include "memone/noise_report.hpp"
#include "memone/seeding.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace memone;

namespace {

Eigen::Vector4d random_interior(Rng& rng) {
  Eigen::Vector4d x;
  for (int i = 0; i < 4; ++i) x[i] = 0.01 + 0.98 * uniform01(rng);
  return x;
}

/// The scaled-noise coefficients written out entry by entry, with every
/// power of s expanded.
QuadraticForm<double> expanded_noisy_form(const Eigen::Vector4d& q, const PayoffValues& pv, double noise) {
  const double R(pv.R), P(pv.P), S(pv.S), T(pv.T);
  const double q1 = q[0], q2 = q[1], q3 = q[2], q4 = q[3];
  const double s = 1.0 - noise;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  QuadraticForm<double> f;

  auto set_sym = [](Eigen::Matrix4d& M, int i, int j, double v) {
    M(i, j) = v;
    M(j, i) = v;
  };
  set_sym(f.Q, 0, 1, -s3 * (q1 - q3) * (P * s * q2 - P - T * s * q4));
  set_sym(f.Q, 0, 2, s4 * (q1 - q2) * (P * q3 - S * q4));
  set_sym(f.Q, 0, 3, s3 * (q1 - q4) * (S * s * q2 - S - T * s * q3));
  set_sym(f.Q, 1, 2, s3 * (q2 - q3) * (P * s * q1 - P - R * s * q4));
  set_sym(f.Q, 1, 3, -s3 * (q3 - q4) * (R * s * q2 - R - T * s * q1 + T));
  set_sym(f.Q, 2, 3, s3 * (q2 - q4) * (R * s * q3 - S * s * q1 + S));

  set_sym(f.Qbar, 0, 1, -s3 * (q1 - q3) * (s * q2 - s * q4 - 1.0));
  set_sym(f.Qbar, 0, 2, s4 * (q1 - q2) * (q3 - q4));
  set_sym(f.Qbar, 0, 3, s3 * (q1 - q4) * (s * q2 - s * q3 - 1.0));
  set_sym(f.Qbar, 1, 2, s3 * (q2 - q3) * (s * q1 - s * q4 - 1.0));
  set_sym(f.Qbar, 1, 3, s4 * (q1 - q2) * (q3 - q4));
  set_sym(f.Qbar, 2, 3, -s3 * (q2 - q4) * (s * q1 - s * q3 - 1.0));

  f.c[0] = s2 * q1 * (P * s * q2 - P - T * s * q4);
  f.c[1] = -s * (s * q3 - 1.0) * (P * s * q2 - P - T * s * q4);
  f.c[2] = -s2 * (P * s * q1 * q2 - P * s * q2 * q3 - P * q2 + P * q3 - R * s * q2 * q4 +
                  S * s * q2 * q4 - S * q4);
  f.c[3] = -s * (R * s2 * q2 * q4 - R * s * q4 - S * s2 * q2 * q4 + S * s * q2 + S * s * q4 - S -
                 T * s2 * q1 * q4 + T * s2 * q3 * q4 - T * s * q3 + T * s * q4);

  f.cbar[0] = s2 * q1 * (s * q2 - s * q4 - 1.0);
  f.cbar[1] = -s * (s * q3 - 1.0) * (s * q2 - s * q4 - 1.0);
  f.cbar[2] = -s2 * (s * q1 * q2 - s * q2 * q3 - q2 + q3 - q4);
  f.cbar[3] = s * (s2 * q1 * q4 - s2 * q3 * q4 - s * q2 + s * q3 - s * q4 + 1.0);

  f.a = P + s * (-P * q2 + T * q4);
  f.abar = s * (-q2 + q4) + 1.0;
  return f;
}

}  // namespace

TEST_CASE("closed form equals the power-iteration utility") {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const Eigen::Vector4d p = random_interior(rng), q = random_interior(rng);
    const auto e = utility(MemoryOneStrategy(p), coefficients(MemoryOneStrategy(q)));
    CHECK_FALSE(e.degenerate);
    CHECK(std::abs(e.value - oracle::utility(p, q)) <= 1e-10);
  }
}

TEST_CASE("closed form with other payoffs") {
  const PayoffValues pv{4, 2, 1, 6};
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Vector4d p = random_interior(rng), q = random_interior(rng);
    const double cf = utility(MemoryOneStrategy(p), coefficients(MemoryOneStrategy(q), pv)).value;
    CHECK(std::abs(cf - oracle::utility(p, q, pv.outcome_scores())) <= 1e-10);
  }
}

TEST_CASE("coefficients at long double precision") {
  const Eigen::Matrix<long double, 4, 1> q(0.3L, 0.7L, 0.6L, 0.4L), p(0.9L, 0.1L, 0.2L, 0.8L);
  const auto f = quadratic_form<long double>(q, PayoffValues{});
  CHECK(std::abs(ratio_value(f, p) - 409.0L / 161.0L) < 1e-17L);
}

TEST_CASE("quadratic forms are symmetric") {
  const auto f = coefficients(MemoryOneStrategy(0.3, 0.7, 0.6, 0.4)).form;
  CHECK((f.Q - f.Q.transpose()).norm() == 0.0);
  CHECK((f.Qbar - f.Qbar.transpose()).norm() == 0.0);
}

TEST_CASE("gradient and Hessian against central differences") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const TournamentContext ctx({MemoryOneStrategy(random_interior(rng)), MemoryOneStrategy(random_interior(rng))});
    const Eigen::Vector4d p = random_interior(rng);
    const auto f = [&](const Eigen::Vector4d& x) { return tournament_value_raw(x, ctx); };
    const Eigen::Vector4d g = tournament_gradient(p, ctx);
    const Eigen::Vector4d fd = oracle::central_gradient(f, p);
    CHECK((g - fd).norm() <= 1e-6 * std::max(1.0, g.norm()));

    const Eigen::Matrix4d H = tournament_hessian(p, ctx);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 4; ++i) {
      const auto gi = [&](const Eigen::Vector4d& x) { return tournament_gradient(x, ctx)[i]; };
      CHECK((H.row(i).transpose() - oracle::central_gradient(gi, p, 1e-5)).norm() <= 1e-5 * std::max(1.0, H.norm()));
    }
  }
}

TEST_CASE("tournament utility is the mean") {
  const MemoryOneStrategy q1(0.3, 0.7, 0.6, 0.4), q2(0.8, 0.2, 0.5, 0.1), p(0.9, 0.1, 0.2, 0.8);
  const TournamentContext ctx({q1, q2});
  CHECK(ctx.weights() == std::vector<double>{0.5, 0.5});
  CHECK(tournament_utility(p, ctx).value ==
        doctest::Approx((utility_stationary(p, q1) + utility_stationary(p, q2)) / 2).epsilon(1e-12));
  const auto ext = ctx.with_opponent(p, 3.0);
  CHECK(ext.size() == 3);
  CHECK(tournament_utility(p, ext).value ==
        doctest::Approx(tournament_utility(p, ctx).value + 3.0 * utility_stationary(p, p)).epsilon(1e-12));
  CHECK_THROWS_AS(TournamentContext(std::vector<MemoryOneStrategy>{}), ConstraintError);
}

TEST_CASE("degenerate denominators") {
  const auto C = MemoryOneStrategy::cooperator(), D = MemoryOneStrategy::defector();
  const auto tft = MemoryOneStrategy::tit_for_tat();
  const auto e = utility(tft, coefficients(tft));
  CHECK(e.degenerate);
  CHECK(std::isfinite(e.value));
  const auto dd = utility(D, coefficients(D));
  CHECK(dd.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(utility(D, coefficients(C)).degenerate);
  CHECK(utility(D, coefficients(C)).value == 5.0);
  CHECK_THROWS_AS(tournament_gradient(tft, TournamentContext({tft})), DegenerateDenominator);
  try {
    tournament_gradient(tft, TournamentContext({C, tft}));
  } catch (const DegenerateDenominator& err) {
    CHECK(err.opponent_index() == 1);
  }
}

TEST_CASE("noisy coefficients") {
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const MemoryOneStrategy q(random_interior(rng));
    const auto a = coefficients(q).form, b = noisy_coefficients(q, {}, 0.0).form;
    CHECK(a.Q == b.Q);
    CHECK(a.Qbar == b.Qbar);
    CHECK(a.c == b.c);
    CHECK(a.cbar == b.cbar);
    CHECK(a.a == b.a);
    CHECK(a.abar == b.abar);
  }
  // With noise the form is the noiseless chain with both strategies scaled by 1 - p_n.
  for (double pn : {0.01, 0.05, 0.2}) {
    const Eigen::Vector4d p = random_interior(rng), q = random_interior(rng);
    const double cf = utility(MemoryOneStrategy(p), noisy_coefficients(MemoryOneStrategy(q), {}, pn)).value;
    CHECK(cf == doctest::Approx(oracle::utility((1 - pn) * p, (1 - pn) * q)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(noisy_coefficients(MemoryOneStrategy::cooperator(), {}, 1.5), ConstraintError);
}

TEST_CASE("noisy coefficients match the expanded entries") {
  Rng rng(9);
  for (double pn : {0.0, 0.01, 0.05, 0.3}) {
    for (int t = 0; t < 20; ++t) {
      const Eigen::Vector4d q = random_interior(rng);
      const auto a = noisy_coefficients(MemoryOneStrategy(q), {}, pn).form;
      const auto b = expanded_noisy_form(q, {}, pn);
      CHECK((a.Q - b.Q).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((a.Qbar - b.Qbar).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((a.c - b.c).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((a.cbar - b.cbar).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(std::abs(a.a - b.a) < 1e-13);
      CHECK(std::abs(a.abar - b.abar) < 1e-13);
    }
  }
}

TEST_CASE("noise discrepancy report") {
  NoiseReportOptions o;
  o.pairs = 5;
  o.turns = 500;
  o.repetitions = 5;
  const auto rows = noise_discrepancy_report(o);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.pairs == 5);
    CHECK(r.mean_abs_delta >= 0.0);
    CHECK(r.max_abs_delta >= r.mean_abs_delta);
  }
  CHECK(flip_noise(MemoryOneStrategy::cooperator(), 0.1).vec().isApprox(Eigen::Vector4d::Constant(0.9)));
}
