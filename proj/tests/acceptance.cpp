// Acceptance suite: one PASS/FAIL line per criterion, each checked at its
// stated tolerance and runtime limit. Criterion k draws from master seed k.
//
//   memone_acceptance          run all criteria
//   memone_acceptance 4 7      run a subset

#include "memone/best_response.hpp"
#include "memone/closed_form.hpp"
#include "memone/evolution.hpp"
#include "memone/longer_memory.hpp"
#include "memone/noise_report.hpp"
#include "memone/seeding.hpp"
#include "memone/simulation.hpp"
#include "memone/zd_metrics.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace memone;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

MemoryOneStrategy uniform_strategy(Rng& rng) {
  return MemoryOneStrategy(uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng));
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome closed_form_correctness() {
  Rng rng(1);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto p = uniform_strategy(rng), q = uniform_strategy(rng);
    const double cf = utility(p, coefficients(q)).value;
    worst = std::max(worst, std::abs(cf - utility_stationary(p, q)));
  }
  return {worst <= 1e-8, fmt("1000 pairs, max |closed form - stationary solve| = %.3g (tol 1e-8)", worst)};
}

Outcome simulation_consistency() {
  Rng rng(2);
  int inside = 0;
  double worst_z = 0.0;
  for (int t = 0; t < 50; ++t) {
    const auto p = uniform_strategy(rng), q = uniform_strategy(rng);
    const auto sim = simulate_match(p, q, {10000, 20, derive_seed(2, t), 0.0});
    const double z = std::abs(utility(p, coefficients(q)).value - sim.mean_a) / sim.stderr_a;
    worst_z = std::max(worst_z, z);
    if (z <= 3.0) ++inside;
  }
  return {inside == 50, fmt("%d/50 pairs within 3 standard errors, worst %.2f SE", inside, worst_z)};
}

Outcome gradient_check() {
  Rng rng(3);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const TournamentContext ctx({uniform_strategy(rng), uniform_strategy(rng)});
    const Eigen::Vector4d p = uniform_strategy(rng).vec();
    const Eigen::Vector4d g = tournament_gradient(p, ctx);
    const Eigen::Vector4d fd =
        oracle::central_gradient([&](const Eigen::Vector4d& x) { return tournament_value_raw(x, ctx); }, p, 1e-6);
    worst = std::max(worst, (g - fd).norm() / g.norm());
  }
  return {worst <= 1e-5, fmt("200 points, N=2, max relative error %.3g (tol 1e-5)", worst)};
}

Outcome best_response_exactness() {
  double worst_gap = -INFINITY;
  int ok = 0;
  for (int t = 0; t < 20; ++t) {
    const std::uint64_t seed = derive_seed(4, t);
    const auto opponents = random_opponents(t % 2 + 1, seed);
    BestResponseOptions o;
    o.seed = seed;
    const auto br = best_response(TournamentContext(opponents), o);
    const double grid = oracle::grid_max(
        [&](const Eigen::Vector4d& p) {
          double total = 0.0;
          for (const auto& q : opponents) total += oracle::utility(p, q.vec());
          return total / static_cast<double>(opponents.size());
        },
        20);
    worst_gap = std::max(worst_gap, grid - br.utility);
    if (br.utility >= grid - 1e-6) ++ok;
  }
  const auto coop = best_response(TournamentContext({MemoryOneStrategy::cooperator()}));
  const bool coop_ok = std::abs(coop.utility - 5.0) <= 1e-9;
  return {ok == 20 && coop_ok,
          fmt("%d/20 sets reach the 0.05-grid maximum (largest grid excess %.3g, tol 1e-6); "
              "vs cooperator %.12g at %s",
              ok, worst_gap, coop.utility, to_string(coop.strategy).c_str())};
}

Outcome sse_experiment_band() {
  SseExperimentOptions o;
  o.trials = 50;
  o.n_opponents = 2;
  o.seed = 5;
  const auto r = sse_experiment(o);
  const auto& s = r.summary;
  const bool ok = s.mean >= 0.1 && s.mean <= 0.6 && s.skewness > 0.0 && s.max < 3.0;
  return {ok, fmt("50 trials: mean %.4f (band [0.1, 0.6]), std %.4f, skew %.4f (> 0), kurtosis %.4f, max %.4f (< 3)",
                  s.mean, s.std, s.skewness, s.kurtosis, s.max)};
}

Outcome zd_projection() {
  Rng rng(6);
  const ZdMatrix C = c_matrix();
  double worst = 0.0;
  int made = 0;
  while (made < 100) {
    const Eigen::Vector2d x(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    const Eigen::Vector4d p = C * x + Eigen::Vector4d(1, 1, 0, 0);
    if ((p.array() < 0.0).any() || (p.array() > 1.0).any()) continue;
    ++made;
    worst = std::max(worst, nearest_zd(MemoryOneStrategy(p)).sse);
  }
  return {worst <= 1e-12, fmt("100 strategies in the column space of C, max SSE %.3g (tol 1e-12)", worst)};
}

Outcome gambler_dominance() {
  ComparisonOptions o;
  o.trials = 10;
  o.turns = 200;
  o.reps = 40;
  o.budget = 1000;
  o.seed = 7;
  const auto records = compare_experiment(o);
  double lo = INFINITY, hi = -INFINITY;
  int above = 0;
  std::ostringstream ratios;
  for (const auto& r : records) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    if (r.ratio > 1.0) ++above;
    ratios << fmt(" %.4f", r.ratio);
  }
  return {lo >= 0.95 && above >= 1,
          fmt("10 trials: min ratio %.4f (>= 0.95), max %.4f, %d above 1; ratios:", lo, hi, above) + ratios.str()};
}

Outcome moran_properties() {
  double drift_err = 0.0;
  Rng rng(8);
  for (int n = 2; n <= 10; ++n) {
    const auto q = uniform_strategy(rng);
    for (int K = 1; K < n; ++K) drift_err = std::max(drift_err, std::abs(fixation_probability(q, q, n, K) - double(K) / n));
  }
  const auto report = dynamic_ratio_experiment(20, 4, 8);
  int below = 0, total = 0;
  std::string where;
  for (const auto& r : report.records) {
    for (std::size_t k = 0; k < r.result.ratio.size(); ++k) {
      ++total;
      if (r.result.ratio[k] < 1.0 - 1e-9) {
        ++below;
        where += fmt(" trial %d K=%d ratio %.6f;", r.trial, r.result.K_values[k], r.result.ratio[k]);
      }
    }
  }
  const bool ok = drift_err <= 1e-12 && below == 0 && report.mean_ratio >= 1.0;
  return {ok, fmt("neutral drift max error %.3g (tol 1e-12); %d/%d ratios below 1 - 1e-9; mean ratio %.6f (>= 1)",
                  drift_err, below, total, report.mean_ratio) +
                  where};
}

int sign_of(double x) { return x > 1e-10 ? 1 : (x < -1e-10 ? -1 : 0); }

Outcome defection_stability() {
  const TournamentContext first({MemoryOneStrategy(0.22199, 0.87073, 0.20672, 0.91861),
                                 MemoryOneStrategy(0.48841, 0.61174, 0.76591, 0.51842),
                                 MemoryOneStrategy(0.2968, 0.18772, 0.08074, 0.73844)});
  const TournamentContext second({MemoryOneStrategy(0.96703, 0.54723, 0.97268, 0.71482),
                                  MemoryOneStrategy(0.69773, 0.21609, 0.97627, 0.0062),
                                  MemoryOneStrategy(0.25298, 0.43479, 0.77938, 0.19769)});
  const auto a = defection_stable(first), b = defection_stable(second);
  bool signs = true;
  for (const auto* r : {&a, &b})
    for (int i = 0; i < 4; ++i) signs = signs && sign_of(r->condition[i]) == sign_of(r->derivative_at_zero[i]);
  return {a.stable && !b.stable && signs,
          fmt("first set stable=%s, second set stable=%s, condition/gradient signs agree=%s", a.stable ? "true" : "false",
              b.stable ? "true" : "false", signs ? "true" : "false")};
}

Outcome noise_sanity() {
  Rng rng(10);
  bool exact = true;
  for (int t = 0; t < 100; ++t) {
    const auto q = uniform_strategy(rng);
    const auto a = coefficients(q).form, b = noisy_coefficients(q, {}, 0.0).form;
    exact = exact && a.Q == b.Q && a.Qbar == b.Qbar && a.c == b.c && a.cbar == b.cbar && a.a == b.a && a.abar == b.abar;
  }
  NoiseReportOptions o;
  o.noise_levels = {0.01, 0.05};
  o.pairs = 50;
  o.turns = 2000;
  o.repetitions = 20;
  o.seed = 10;
  const auto rows = noise_discrepancy_report(o);
  bool quantified = rows.size() == 2;
  std::string text;
  for (const auto& r : rows) {
    quantified = quantified && std::isfinite(r.mean_abs_delta) && std::isfinite(r.max_abs_delta);
    text += fmt(" p_n=%.2f: mean |delta| %.4f, max |delta| %.4f, within 3 SE %.2f (flip model %.4f, %.2f);", r.noise,
                r.mean_abs_delta, r.max_abs_delta, r.fraction_within_3se, r.flip_exact_mean_abs_delta,
                r.flip_exact_fraction_within_3se);
  }
  return {exact && quantified,
          fmt("zero-noise coefficients identical=%s;", exact ? "true" : "false") + text};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "closed-form correctness", 10, closed_form_correctness},
      {2, "simulation consistency", 120, simulation_consistency},
      {3, "gradient check", 30, gradient_check},
      {4, "best-response exactness", 600, best_response_exactness},
      {5, "SSE experiment", 900, sse_experiment_band},
      {6, "ZD projection", 1, zd_projection},
      {7, "Gambler dominance", 1800, gambler_dominance},
      {8, "Moran properties", 1200, moran_properties},
      {9, "defection stability", 1, defection_stability},
      {10, "noise sanity", 60, noise_sanity},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d (%s): %s; %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : " TIME LIMIT EXCEEDED");
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
