// Memory-one best responses to a set of opponents.
//
// A maximizer over [0,1]^4 either sits at a vertex or is a stationary point of
// the objective restricted to some face: coordinates in J pinned to 0 or 1,
// coordinates in K free with zero partial derivatives. The candidate set is
// the 16 vertices plus the stationary points of every face (64 proper faces and
// the interior); the best response is its argmax.
//
// At a vertex where some opponent's denominator vanishes (the chain splits
// into two closed classes, e.g. p = (1,1,0,0) against any interior opponent)
// the utility is 0/0 and its limit depends on the direction of approach; the
// supremum can sit there without being attained. For those vertices the best
// limiting direction is searched and the point a short step along it is added
// as a further candidate.
//
// Stationary points are found numerically: damped Newton on the restricted
// gradient (Levenberg-Marquardt when the Hessian is singular) from quasi-random
// starts, plus projected ascent runs that are polished by Newton when they end
// inside the face. Every accepted point is re-checked against the gradient.

#ifndef MEMONE_BEST_RESPONSE_HPP
#define MEMONE_BEST_RESPONSE_HPP

#include "memone/closed_form.hpp"
#include "memone/global_optimize.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace memone {

/// Which coordinates are pinned to the boundary (J) and which are free (K).
struct IndexPartition {
  std::array<bool, 4> fixed{};          ///< true for j in J
  std::array<double, 4> boundary{};     ///< 0 or 1 for fixed coordinates

  std::vector<int> free_indices() const;
  int free_count() const;
  /// Places the free coordinates `x` into a full 4-vector.
  Eigen::Vector4d embed(const Eigen::VectorXd& x) const;
  std::string label() const;
};

/// The interior plus every proper face with each 0/1 assignment of J
/// (1 + 64 partitions), in a fixed order.
std::vector<IndexPartition> stationarity_partitions();

/// Restricted gradients at accepted points must not exceed this.
inline constexpr double kGradientRecheck = 1e-8;
/// Roots where any per-opponent |denominator| is below this are rejected.
inline constexpr double kSideCondition = 1e-10;
inline constexpr double kCandidateDedup = 1e-6;

struct StationaryCandidate {
  MemoryOneStrategy strategy;
  /// Some free coordinate has an identically zero partial derivative on the
  /// face and was set to 1/2.
  bool degenerate = false;
};

std::vector<StationaryCandidate> stationarity_candidates(const TournamentContext& ctx,
                                                         const IndexPartition& partition, int starts,
                                                         std::uint64_t seed);

/// All vertices of [0,1]^4, binary counting with p1 most significant.
std::vector<MemoryOneStrategy> corner_candidates();

/// Per-opponent directional limits at a vertex: N_i(v)/D_i(v) where the
/// denominator is regular, (grad N_i . d)/(grad D_i . d) where it vanishes.
/// Returns -inf when a limit is undefined along d.
double vertex_direction_limit(const TournamentContext& ctx, const Eigen::Vector4d& vertex, const Eigen::Vector4d& d);

struct VertexLimit {
  Eigen::Vector4d vertex = Eigen::Vector4d::Zero();
  Eigen::Vector4d direction = Eigen::Vector4d::Zero();  ///< inward, unit 1-norm
  double limit = 0.0;
  /// vertex + t * direction with the smallest t in {1e-7, 1e-6, ..., 1e-3}
  /// that keeps every |denominator| >= 1e-8, so rounding stays small.
  MemoryOneStrategy strategy;
};

/// For every vertex with a vanishing denominator, the inward direction with
/// the largest limit.
std::vector<VertexLimit> vertex_limits(const TournamentContext& ctx, std::uint64_t seed = 0);

enum class Provenance { corner, stationarity, vertex_limit, optimizer };

std::string to_string(Provenance p);

struct Candidate {
  MemoryOneStrategy strategy;
  Provenance provenance = Provenance::corner;
  std::optional<IndexPartition> partition;
  bool degenerate = false;
};

struct CandidateSet {
  std::vector<Candidate> candidates;
  double dedup_tolerance = kCandidateDedup;
};

/// Vertices first, then face stationary points sorted lexicographically and
/// dropped when within the dedup tolerance (infinity norm) of a kept point.
/// Last come vertex-limit points whose limit exceeds every earlier candidate's
/// utility by more than 1e-9; these are exempt from deduplication.
CandidateSet candidate_set(const TournamentContext& ctx, int starts = 32, std::uint64_t seed = 0);

struct BestResponseOptions {
  int starts = 32;
  std::uint64_t seed = 0;
  /// Budget for an extra derivative-free search whose result joins the
  /// candidates; 0 evaluates the candidate set alone.
  int optimizer_budget = 0;
};

struct BestResponseResult {
  MemoryOneStrategy strategy;
  double utility = 0.0;
  bool degenerate = false;  ///< the winner's utility needed the degeneracy policy
  int candidate_count = 0;
  Provenance provenance = Provenance::corner;
};

/// Utilities within this of the best are ties, won by the lexicographically
/// smallest strategy.
inline constexpr double kTieTolerance = 1e-12;

BestResponseResult best_response(const TournamentContext& ctx, const BestResponseOptions& options = {});

/// Argmax over an explicit candidate list (same tie rule).
BestResponseResult best_among(const TournamentContext& ctx, const std::vector<Candidate>& candidates);

}  // namespace memone

#endif  // MEMONE_BEST_RESPONSE_HPP
