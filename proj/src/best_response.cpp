#include "memone/best_response.hpp"

#include "memone/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace memone {

std::vector<int> IndexPartition::free_indices() const {
  std::vector<int> out;
  for (int i = 0; i < 4; ++i)
    if (!fixed[i]) out.push_back(i);
  return out;
}

int IndexPartition::free_count() const {
  return static_cast<int>(std::count(fixed.begin(), fixed.end(), false));
}

Eigen::Vector4d IndexPartition::embed(const Eigen::VectorXd& x) const {
  Eigen::Vector4d p;
  int k = 0;
  for (int i = 0; i < 4; ++i) p[i] = fixed[i] ? boundary[i] : x[k++];
  return p;
}

std::string IndexPartition::label() const {
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (!fixed[i]) s += '*';
    else s += boundary[i] == 0.0 ? '0' : (boundary[i] == 1.0 ? '1' : 'h');
  }
  return s;
}

std::vector<IndexPartition> stationarity_partitions() {
  std::vector<IndexPartition> out;
  // Each coordinate is free, pinned at 0 or pinned at 1: 3^4 faces, minus the 16 vertices.
  for (int code = 0; code < 81; ++code) {
    IndexPartition part;
    int c = code;
    int n_free = 0;
    for (int i = 0; i < 4; ++i) {
      const int t = c % 3;
      c /= 3;
      part.fixed[i] = t != 0;
      part.boundary[i] = t == 2 ? 1.0 : 0.0;
      if (t == 0) ++n_free;
    }
    if (n_free > 0) out.push_back(part);
  }
  std::stable_sort(out.begin(), out.end(), [](const IndexPartition& a, const IndexPartition& b) {
    return a.free_count() > b.free_count();
  });
  return out;
}

std::vector<MemoryOneStrategy> corner_candidates() {
  std::vector<MemoryOneStrategy> out;
  for (int bits = 0; bits < 16; ++bits) {
    out.emplace_back((bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1);
  }
  return out;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::corner: return "corner";
    case Provenance::stationarity: return "stationarity";
    case Provenance::vertex_limit: return "vertex_limit";
    case Provenance::optimizer: return "optimizer";
  }
  return "unknown";
}

namespace {

constexpr double kNewtonDomainLow = -0.5;
constexpr double kNewtonDomainHigh = 1.5;
constexpr double kNewtonAccept = 1e-10;
constexpr double kBoxSlack = 1e-9;

// The objective restricted to one face.
class FaceProblem {
 public:
  FaceProblem(const TournamentContext& ctx, const IndexPartition& part)
      : ctx_(ctx), part_(part), free_(part.free_indices()) {}

  int dim() const { return static_cast<int>(free_.size()); }
  Eigen::Vector4d embed(const Eigen::VectorXd& x) const { return part_.embed(x); }

  bool valid(const Eigen::VectorXd& x) const {
    return x.allFinite() && min_abs_denominator(embed(x), ctx_) >= kSideCondition;
  }
  bool in_newton_domain(const Eigen::VectorXd& x) const {
    return (x.array() >= kNewtonDomainLow).all() && (x.array() <= kNewtonDomainHigh).all() && valid(x);
  }

  double value(const Eigen::VectorXd& x) const { return tournament_value_raw(embed(x), ctx_); }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    const Eigen::Vector4d g = tournament_gradient(embed(x), ctx_);
    Eigen::VectorXd out(dim());
    for (int k = 0; k < dim(); ++k) out[k] = g[free_[k]];
    return out;
  }

  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    const Eigen::Matrix4d H = tournament_hessian(embed(x), ctx_);
    Eigen::MatrixXd out(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) out(i, j) = H(free_[i], free_[j]);
    return out;
  }

 private:
  const TournamentContext& ctx_;
  IndexPartition part_;
  std::vector<int> free_;
};

// Damped Newton on the restricted gradient with a Levenberg-Marquardt
// fallback. Returns the last iterate; the caller checks the residual.
std::optional<Eigen::VectorXd> newton_root(const FaceProblem& fp, Eigen::VectorXd x) {
  if (!fp.in_newton_domain(x)) return std::nullopt;
  Eigen::VectorXd g = fp.gradient(x);
  double gn = g.squaredNorm();
  const int m = fp.dim();

  for (int it = 0; it < 100; ++it) {
    if (g.cwiseAbs().maxCoeff() <= 1e-14) break;
    const Eigen::MatrixXd H = fp.hessian(x);
    bool accepted = false;
    Eigen::VectorXd next;
    Eigen::VectorXd g_next;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
    if (lu.isInvertible()) {
      const Eigen::VectorXd step = lu.solve(-g);
      for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
        next = x + alpha * step;
        if (!fp.in_newton_domain(next)) continue;
        g_next = fp.gradient(next);
        if (g_next.squaredNorm() < (1.0 - 1e-4 * alpha) * gn) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      const Eigen::MatrixXd HtH = H.transpose() * H;
      const Eigen::VectorXd Htg = H.transpose() * g;
      const double scale = std::max(HtH.diagonal().maxCoeff(), 1e-300);
      for (double lambda = 1e-10 * scale; lambda < 1e10 * scale; lambda *= 10.0) {
        const Eigen::MatrixXd A = HtH + lambda * Eigen::MatrixXd::Identity(m, m);
        next = x + A.ldlt().solve(-Htg);
        if (!fp.in_newton_domain(next)) continue;
        g_next = fp.gradient(next);
        if (g_next.squaredNorm() < gn) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
    const double moved = (next - x).cwiseAbs().maxCoeff();
    x = next;
    g = g_next;
    gn = g.squaredNorm();
    if (moved < 1e-16) break;
  }
  if (!(g.cwiseAbs().maxCoeff() <= kNewtonAccept)) return std::nullopt;
  return x;
}

// Projected gradient ascent inside [0,1]^m with Armijo backtracking.
std::optional<Eigen::VectorXd> projected_ascent(const FaceProblem& fp, Eigen::VectorXd x) {
  if (!fp.valid(x)) return std::nullopt;
  double fx = fp.value(x);
  double alpha = 0.1;
  for (int it = 0; it < 300; ++it) {
    const Eigen::VectorXd g = fp.gradient(x);
    bool moved = false;
    Eigen::VectorXd next;
    alpha = std::min(alpha * 4.0, 1e4);
    for (; alpha > 1e-14; alpha *= 0.5) {
      next = (x + alpha * g).cwiseMax(0.0).cwiseMin(1.0);
      if (!fp.valid(next)) continue;
      const double fn = fp.value(next);
      if (fn >= fx + 1e-4 * g.dot(next - x) && fn >= fx) {
        moved = true;
        fx = fn;
        break;
      }
    }
    if (!moved) break;
    const double step = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (step < 1e-13) break;
  }
  return x;
}

bool strictly_inside(const Eigen::VectorXd& x, double margin) {
  return (x.array() > margin).all() && (x.array() < 1.0 - margin).all();
}

void dedup_append(std::vector<StationaryCandidate>& out, const StationaryCandidate& c, double tol) {
  for (const auto& existing : out) {
    if ((existing.strategy.vec() - c.strategy.vec()).cwiseAbs().maxCoeff() <= tol) return;
  }
  out.push_back(c);
}

}  // namespace

std::vector<StationaryCandidate> stationarity_candidates(const TournamentContext& ctx,
                                                         const IndexPartition& partition, int starts,
                                                         std::uint64_t seed) {
  std::vector<StationaryCandidate> out;
  const std::vector<int> free = partition.free_indices();
  const int m = static_cast<int>(free.size());
  if (m == 0) return out;

  // Free coordinates whose partial derivative vanishes everywhere on the face
  // do not change the objective; they are pinned at the midpoint.
  IndexPartition reduced = partition;
  bool degenerate = false;
  {
    const FaceProblem fp(ctx, partition);
    std::vector<bool> flat(m, true);
    int usable = 0;
    for (auto x : scrambled_halton(8, m, derive_seed(seed, 0xf1a7u))) {
      x = (0.05 + 0.9 * x.array()).matrix();
      if (!fp.valid(x)) continue;
      ++usable;
      const Eigen::VectorXd g = fp.gradient(x);
      const double scale = 1.0 + std::abs(fp.value(x));
      for (int k = 0; k < m; ++k)
        if (std::abs(g[k]) > 1e-11 * scale) flat[k] = false;
    }
    if (usable == 0) return out;
    for (int k = 0; k < m; ++k) {
      if (flat[k]) {
        reduced.fixed[free[k]] = true;
        reduced.boundary[free[k]] = 0.5;
        degenerate = true;
      }
    }
  }

  const FaceProblem fp(ctx, reduced);
  const int dim = fp.dim();
  auto accept = [&](const Eigen::VectorXd& root) {
    if ((root.array() < -kBoxSlack).any() || (root.array() > 1.0 + kBoxSlack).any()) return;
    const Eigen::VectorXd x = root.cwiseMax(0.0).cwiseMin(1.0);
    if (!fp.valid(x)) return;
    if (dim > 0 && fp.gradient(x).cwiseAbs().maxCoeff() > kGradientRecheck) return;
    dedup_append(out, {MemoryOneStrategy::clamped(fp.embed(x)), degenerate}, kCandidateDedup);
  };

  if (dim == 0) {
    accept(Eigen::VectorXd(0));
    return out;
  }

  for (const auto& start : scrambled_halton(std::max(starts, 1), dim, seed)) {
    if (auto root = newton_root(fp, start)) accept(*root);
    if (auto top = projected_ascent(fp, start); top && strictly_inside(*top, 1e-7)) {
      if (auto root = newton_root(fp, *top)) accept(*root);
    }
  }
  std::sort(out.begin(), out.end(), [](const StationaryCandidate& a, const StationaryCandidate& b) {
    return lexicographically_less(a.strategy.vec(), b.strategy.vec());
  });
  return out;
}

double vertex_direction_limit(const TournamentContext& ctx, const Eigen::Vector4d& vertex, const Eigen::Vector4d& d) {
  double total = 0.0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const auto& f = ctx.opponents()[i].form;
    const double D = f.denominator(vertex);
    double value;
    if (std::abs(D) >= kDegenerateDenominator) {
      value = f.numerator(vertex) / D;
    } else {
      const double num = (f.Q * vertex + f.c).dot(d);
      const double den = (f.Qbar * vertex + f.cbar).dot(d);
      if (!(std::abs(den) > 1e-14)) return -std::numeric_limits<double>::infinity();
      value = num / den;
    }
    total += ctx.weights()[i] * value;
  }
  return total;
}

std::vector<VertexLimit> vertex_limits(const TournamentContext& ctx, std::uint64_t seed) {
  std::vector<VertexLimit> out;
  const auto corners = corner_candidates();
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const Eigen::Vector4d v = corners[k].vec();
    if (min_abs_denominator(v, ctx) >= kDegenerateDenominator) continue;
    // Inward directions: +x_j at a 0 coordinate, -x_j at a 1 coordinate.
    const Eigen::Vector4d sign = (v.array() < 0.5).select(Eigen::Vector4d::Ones(), -Eigen::Vector4d::Ones());
    const auto direction = [&sign](const Eigen::VectorXd& x) -> Eigen::Vector4d {
      const double norm = x.sum();
      return norm > 0.0 ? Eigen::Vector4d(sign.cwiseProduct(Eigen::Vector4d(x)) / norm) : Eigen::Vector4d::Zero();
    };
    const auto objective = [&](const Eigen::VectorXd& x) {
      const Eigen::Vector4d d = direction(x);
      if (d.isZero()) return -std::numeric_limits<double>::infinity();
      return vertex_direction_limit(ctx, v, d);
    };
    const OptimizeResult r = global_optimize(objective, 4, 600, derive_seed(seed, k));
    if (!std::isfinite(r.value)) continue;
    VertexLimit vl;
    vl.vertex = v;
    vl.direction = direction(r.point);
    vl.limit = r.value;
    double t = 1e-7;
    while (t < 1e-3 && min_abs_denominator(v + t * vl.direction, ctx) < 1e-8) t *= 10.0;
    vl.strategy = MemoryOneStrategy::clamped(v + t * vl.direction);
    out.push_back(vl);
  }
  return out;
}

CandidateSet candidate_set(const TournamentContext& ctx, int starts, std::uint64_t seed) {
  CandidateSet set;
  for (const auto& corner : corner_candidates()) set.candidates.push_back({corner, Provenance::corner, {}, false});

  std::vector<Candidate> found;
  const auto partitions = stationarity_partitions();
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    for (const auto& sc : stationarity_candidates(ctx, partitions[i], starts, derive_seed(seed, i))) {
      found.push_back({sc.strategy, Provenance::stationarity, partitions[i], sc.degenerate});
    }
  }

  std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return lexicographically_less(a.strategy.vec(), b.strategy.vec());
  });
  for (const auto& c : found) {
    const bool duplicate = std::any_of(set.candidates.begin(), set.candidates.end(), [&](const Candidate& k) {
      return (k.strategy.vec() - c.strategy.vec()).cwiseAbs().maxCoeff() <= set.dedup_tolerance;
    });
    if (!duplicate) set.candidates.push_back(c);
  }
  // A vertex limit only matters when it beats everything attainable. These
  // points sit within the dedup tolerance of their vertex by construction.
  const double attained = best_among(ctx, set.candidates).utility;
  for (const auto& vl : vertex_limits(ctx, derive_seed(seed, 0x11u))) {
    if (vl.limit > attained + 1e-9) set.candidates.push_back({vl.strategy, Provenance::vertex_limit, {}, false});
  }
  return set;
}

BestResponseResult best_among(const TournamentContext& ctx, const std::vector<Candidate>& candidates) {
  BestResponseResult best;
  best.utility = -std::numeric_limits<double>::infinity();
  best.candidate_count = static_cast<int>(candidates.size());
  for (const auto& c : candidates) {
    const Evaluation e = tournament_utility(c.strategy, ctx);
    if (!std::isfinite(e.value)) continue;
    const bool better = e.value > best.utility + kTieTolerance;
    const bool tie = std::abs(e.value - best.utility) <= kTieTolerance &&
                     lexicographically_less(c.strategy.vec(), best.strategy.vec());
    if (better || tie) {
      best.strategy = c.strategy;
      best.utility = e.value;
      best.degenerate = e.degenerate;
      best.provenance = c.provenance;
    }
  }
  return best;
}

BestResponseResult best_response(const TournamentContext& ctx, const BestResponseOptions& options) {
  CandidateSet set = candidate_set(ctx, options.starts, options.seed);
  if (options.optimizer_budget > 0) {
    const auto objective = [&ctx](const Eigen::VectorXd& x) {
      return tournament_utility(MemoryOneStrategy::clamped(x), ctx).value;
    };
    const OptimizeResult r =
        global_optimize(objective, 4, std::max(options.optimizer_budget, 40), derive_seed(options.seed, 0x0b7u));
    set.candidates.push_back({MemoryOneStrategy::clamped(r.point), Provenance::optimizer, {}, false});
  }
  return best_among(ctx, set.candidates);
}

}  // namespace memone
