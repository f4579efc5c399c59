#include "memone/noise_report.hpp"

#include "memone/closed_form.hpp"
#include "memone/seeding.hpp"
#include "memone/simulation.hpp"

#include <algorithm>
#include <cmath>

namespace memone {

MemoryOneStrategy flip_noise(const MemoryOneStrategy& p, double p_n) {
  const Eigen::Vector4d ones = Eigen::Vector4d::Ones();
  return MemoryOneStrategy::clamped((1.0 - p_n) * p.vec() + p_n * (ones - p.vec()));
}

std::vector<NoiseDiscrepancyRow> noise_discrepancy_report(const NoiseReportOptions& options) {
  std::vector<NoiseDiscrepancyRow> rows;
  for (std::size_t level = 0; level < options.noise_levels.size(); ++level) {
    const double p_n = options.noise_levels[level];
    NoiseDiscrepancyRow row;
    row.noise = p_n;
    row.pairs = options.pairs;
    int within = 0, flip_within = 0;
    for (int k = 0; k < options.pairs; ++k) {
      // Pairs depend only on the pair index so both noise levels see the same strategies.
      Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(k)));
      Eigen::Vector4d pv, qv;
      for (int i = 0; i < 4; ++i) pv[i] = 0.01 + 0.98 * uniform01(rng);
      for (int i = 0; i < 4; ++i) qv[i] = 0.01 + 0.98 * uniform01(rng);
      const MemoryOneStrategy p(pv), q(qv);

      const double closed = utility(p, noisy_coefficients(q, options.payoffs, p_n)).value;
      const double flip_exact = utility_stationary(flip_noise(p, p_n), flip_noise(q, p_n), options.payoffs);
      MatchOptions mo;
      mo.turns = options.turns;
      mo.repetitions = options.repetitions;
      mo.seed = derive_seed(derive_seed(options.seed, 1000003u + level), static_cast<std::uint64_t>(k));
      mo.noise = p_n;
      const MatchResult sim = simulate_match(p, q, mo, options.payoffs);

      const double delta = closed - sim.mean_a;
      row.mean_signed_delta += delta;
      row.mean_abs_delta += std::abs(delta);
      row.max_abs_delta = std::max(row.max_abs_delta, std::abs(delta));
      if (std::abs(delta) <= 3.0 * sim.stderr_a) ++within;
      row.flip_exact_mean_abs_delta += std::abs(flip_exact - sim.mean_a);
      if (std::abs(flip_exact - sim.mean_a) <= 3.0 * sim.stderr_a) ++flip_within;
    }
    const double n = static_cast<double>(options.pairs);
    row.mean_signed_delta /= n;
    row.mean_abs_delta /= n;
    row.flip_exact_mean_abs_delta /= n;
    row.fraction_within_3se = within / n;
    row.flip_exact_fraction_within_3se = flip_within / n;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace memone
