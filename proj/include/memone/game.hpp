// Game semantics for the iterated prisoner's dilemma between memory-one players.
//
// Everything here is the ground truth the closed-form machinery is checked
// against: the Markov chain over the four joint outcomes, its long-run
// distribution, and the resulting per-round utility.

#ifndef MEMONE_GAME_HPP
#define MEMONE_GAME_HPP

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>

namespace memone {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

/// Raised when inputs violate a documented domain constraint.
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Action : unsigned char { C = 0, D = 1 };

inline Action flip(Action a) { return a == Action::C ? Action::D : Action::C; }

/// Joint outcome from the focal player's point of view: CC, CD, DC, DD.
inline int outcome_index(Action own, Action other) {
  return 2 * static_cast<int>(own) + static_cast<int>(other);
}

/// Prisoner's dilemma constants. The default is (R, P, S, T) = (3, 1, 0, 5).
struct PayoffValues {
  double R = 3.0;
  double P = 1.0;
  double S = 0.0;
  double T = 5.0;

  /// Scores in outcome order (R, S, T, P), matching CC, CD, DC, DD.
  Eigen::Vector4d outcome_scores() const { return {R, S, T, P}; }
};

/// Checks T > R > P > S and 2R > T + S.
PayoffValues validate_payoffs(double R, double P, double S, double T);

/// Cooperation probabilities after CC, CD, DC, DD.
class MemoryOneStrategy {
 public:
  MemoryOneStrategy() = default;
  MemoryOneStrategy(double p1, double p2, double p3, double p4)
      : MemoryOneStrategy(Eigen::Vector4d(p1, p2, p3, p4)) {}
  explicit MemoryOneStrategy(const Eigen::Vector4d& probabilities);

  const Eigen::Vector4d& vec() const { return probs_; }
  double operator[](int i) const { return probs_[i]; }

  static MemoryOneStrategy cooperator() { return {1, 1, 1, 1}; }
  static MemoryOneStrategy defector() { return {0, 0, 0, 0}; }
  static MemoryOneStrategy tit_for_tat() { return {1, 0, 1, 0}; }

  /// Clamps each component into [0,1] first; for optimizer output that may
  /// overshoot the box by rounding.
  static MemoryOneStrategy clamped(const Eigen::Vector4d& probabilities);

  friend bool operator==(const MemoryOneStrategy& a, const MemoryOneStrategy& b) {
    return a.probs_ == b.probs_;
  }

 private:
  Eigen::Vector4d probs_ = Eigen::Vector4d::Zero();
};

/// Lexicographic order on the probability vectors.
bool lexicographically_less(const Eigen::Vector4d& a, const Eigen::Vector4d& b);

std::string to_string(const MemoryOneStrategy& s);

/// Row-stochastic transition matrix over (CC, CD, DC, DD) for p playing q.
/// Rows 2 and 3 use q3 and q2: the opponent sees CD as DC and vice versa.
template <typename Scalar>
Matrix4<Scalar> transition_matrix(const Vector4<Scalar>& p, const Vector4<Scalar>& q) {
  const std::array<int, 4> opp = {0, 2, 1, 3};
  Matrix4<Scalar> M;
  for (int i = 0; i < 4; ++i) {
    const Scalar pi = p[i];
    const Scalar qi = q[opp[i]];
    M(i, 0) = pi * qi;
    M(i, 1) = pi * (Scalar(1) - qi);
    M(i, 2) = (Scalar(1) - pi) * qi;
    M(i, 3) = (Scalar(1) - pi) * (Scalar(1) - qi);
  }
  return M;
}

inline Eigen::Matrix4d transition_matrix(const MemoryOneStrategy& p, const MemoryOneStrategy& q) {
  return transition_matrix<double>(p.vec(), q.vec());
}

struct StationaryDistribution {
  Eigen::Vector4d v = Eigen::Vector4d::Zero();
  /// Every state reaches every other state.
  bool ergodic = false;
  /// Exactly one closed class, so v does not depend on the start state.
  bool unique = false;
};

/// Long-run distribution of the chain. With a single closed class this is the
/// solution of vM = v, sum(v) = 1; otherwise it is the long-run occupation of
/// the chain started in CC (absorption probabilities times the per-class
/// stationary vectors), with `unique` cleared.
StationaryDistribution stationary_distribution(const Eigen::Matrix4d& M);

/// u_q(p) = v . (R, S, T, P).
double utility_stationary(const MemoryOneStrategy& p, const MemoryOneStrategy& q,
                          const PayoffValues& payoffs = {});

}  // namespace memone

#endif  // MEMONE_GAME_HPP
