// Distance of a memory-one strategy from the zero-determinant subspace.
//
// With p_bar = (p1 - 1, p2 - 1, p3, p4) and the 4x2 matrix C spanning the
// extortionate directions, the nearest ZD parameters are the least-squares
// solution x* = (C^T C)^-1 C^T p_bar and the squared residual
// SSE = p_bar^T p_bar - p_bar^T C x* measures how far p is from ZD behaviour.

#ifndef MEMONE_ZD_METRICS_HPP
#define MEMONE_ZD_METRICS_HPP

#include "memone/best_response.hpp"
#include "memone/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace memone {

using ZdMatrix = Eigen::Matrix<double, 4, 2>;

ZdMatrix c_matrix(const PayoffValues& payoffs = {});

struct ZdProjection {
  Eigen::Vector2d x_star = Eigen::Vector2d::Zero();
  double sse = 0.0;
  Eigen::Vector4d p_bar = Eigen::Vector4d::Zero();
};

ZdProjection nearest_zd(const MemoryOneStrategy& p, const PayoffValues& payoffs = {});

struct SseTrialRecord {
  int trial = 0;
  std::vector<MemoryOneStrategy> opponents;
  BestResponseResult best;
  double sse = 0.0;
};

struct SseExperimentReport {
  std::vector<SseTrialRecord> records;
  SummaryStatistics summary;
  int trials = 0;
  int n_opponents = 0;
  std::uint64_t seed = 0;
  std::string opponent_sampling = "uniform [0,1]^4 per component";
  std::string moment_convention = "skew g1, excess kurtosis g2 (biased moments); std with n-1";
};

struct SseExperimentOptions {
  int trials = 1000;
  int n_opponents = 2;
  std::uint64_t seed = 0;
  BestResponseOptions best_response;
  PayoffValues payoffs;
};

/// Per trial t the opponents come from RNG derive_seed(seed, t) and the best
/// response uses derive_seed(seed, t) as its own seed.
SseExperimentReport sse_experiment(const SseExperimentOptions& options);

std::vector<MemoryOneStrategy> random_opponents(int count, std::uint64_t seed);

}  // namespace memone

#endif  // MEMONE_ZD_METRICS_HPP
