// Quantifies how far the scaled-strategy noise model (every cooperation
// probability multiplied by 1 - p_n) sits from the action-flip model the
// simulator uses, where an intended action is flipped with probability p_n.

#ifndef MEMONE_NOISE_REPORT_HPP
#define MEMONE_NOISE_REPORT_HPP

#include "memone/game.hpp"

#include <cstdint>
#include <vector>

namespace memone {

struct NoiseDiscrepancyRow {
  double noise = 0.0;
  int pairs = 0;
  /// closed form (scaled model) minus simulated flip model
  double mean_signed_delta = 0.0;
  double mean_abs_delta = 0.0;
  double max_abs_delta = 0.0;
  /// share of pairs whose closed form lies within 3 standard errors of simulation
  double fraction_within_3se = 0.0;
  /// exact flip model (stationary solve of p(1-p_n) + (1-p)p_n) vs simulation
  double flip_exact_mean_abs_delta = 0.0;
  double flip_exact_fraction_within_3se = 0.0;
};

struct NoiseReportOptions {
  std::vector<double> noise_levels = {0.01, 0.05};
  int pairs = 200;
  int turns = 10000;
  int repetitions = 50;
  std::uint64_t seed = 0;
  PayoffValues payoffs;
};

/// Interior pairs are drawn uniformly from [0.01, 0.99]^4.
std::vector<NoiseDiscrepancyRow> noise_discrepancy_report(const NoiseReportOptions& options);

/// Effective cooperation probabilities under the flip model.
MemoryOneStrategy flip_noise(const MemoryOneStrategy& p, double p_n);

}  // namespace memone

#endif  // MEMONE_NOISE_REPORT_HPP
