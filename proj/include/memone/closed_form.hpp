// Closed-form utility of a memory-one player as a ratio of two quadratic forms
//
//            1/2 p Q p^T + c p + a
//   u_q(p) = ---------------------------
//            1/2 p Qbar p^T + cbar p + abar
//
// where Q, Qbar, c, cbar, a, abar depend only on the opponent q and the payoffs.
// Against several opponents the objective is a weighted sum of such ratios;
// with equal weights 1/N it is the tournament mean. Gradients and Hessians
// returned here are of that weighted sum.
//
// The templated functions work for any Eigen scalar; the non-template API
// below them is what the rest of the library uses.

#ifndef MEMONE_CLOSED_FORM_HPP
#define MEMONE_CLOSED_FORM_HPP

#include "memone/game.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace memone {

template <typename Scalar>
struct QuadraticForm {
  Matrix4<Scalar> Q = Matrix4<Scalar>::Zero();
  Matrix4<Scalar> Qbar = Matrix4<Scalar>::Zero();
  Vector4<Scalar> c = Vector4<Scalar>::Zero();
  Vector4<Scalar> cbar = Vector4<Scalar>::Zero();
  Scalar a = Scalar(0);
  Scalar abar = Scalar(0);

  template <typename Derived>
  Scalar numerator(const Eigen::MatrixBase<Derived>& p) const {
    return Scalar(0.5) * p.dot(Q * p) + c.dot(p) + a;
  }
  template <typename Derived>
  Scalar denominator(const Eigen::MatrixBase<Derived>& p) const {
    return Scalar(0.5) * p.dot(Qbar * p) + cbar.dot(p) + abar;
  }
};

/// Coefficients of u_q(p) for opponent q.
template <typename Scalar>
QuadraticForm<Scalar> quadratic_form(const Vector4<Scalar>& q, const PayoffValues& pv) {
  const Scalar R(pv.R), P(pv.P), S(pv.S), T(pv.T);
  const Scalar q1 = q[0], q2 = q[1], q3 = q[2], q4 = q[3];
  QuadraticForm<Scalar> f;

  auto set_sym = [](Matrix4<Scalar>& M, int i, int j, Scalar v) {
    M(i, j) = v;
    M(j, i) = v;
  };
  set_sym(f.Q, 0, 1, -(q1 - q3) * (P * q2 - P - T * q4));
  set_sym(f.Q, 0, 2, (q1 - q2) * (P * q3 - S * q4));
  set_sym(f.Q, 0, 3, (q1 - q4) * (S * q2 - S - T * q3));
  set_sym(f.Q, 1, 2, (q2 - q3) * (P * q1 - P - R * q4));
  set_sym(f.Q, 1, 3, -(q3 - q4) * (R * q2 - R - T * q1 + T));
  set_sym(f.Q, 2, 3, (q2 - q4) * (R * q3 - S * q1 + S));

  set_sym(f.Qbar, 0, 1, -(q1 - q3) * (q2 - q4 - Scalar(1)));
  set_sym(f.Qbar, 0, 2, (q1 - q2) * (q3 - q4));
  set_sym(f.Qbar, 0, 3, (q1 - q4) * (q2 - q3 - Scalar(1)));
  set_sym(f.Qbar, 1, 2, (q2 - q3) * (q1 - q4 - Scalar(1)));
  set_sym(f.Qbar, 1, 3, (q1 - q2) * (q3 - q4));
  set_sym(f.Qbar, 2, 3, -(q2 - q4) * (q1 - q3 - Scalar(1)));

  f.c[0] = q1 * (P * q2 - P - T * q4);
  f.c[1] = -(q3 - Scalar(1)) * (P * q2 - P - T * q4);
  f.c[2] = -P * q1 * q2 + P * q2 * q3 + P * q2 - P * q3 + R * q2 * q4 - S * q2 * q4 + S * q4;
  f.c[3] = -R * q2 * q4 + R * q4 + S * q2 * q4 - S * q2 - S * q4 + S + T * q1 * q4 - T * q3 * q4 +
           T * q3 - T * q4;

  f.cbar[0] = q1 * (q2 - q4 - Scalar(1));
  f.cbar[1] = -(q3 - Scalar(1)) * (q2 - q4 - Scalar(1));
  f.cbar[2] = -q1 * q2 + q2 * q3 + q2 - q3 + q4;
  f.cbar[3] = q1 * q4 - q2 - q3 * q4 + q3 - q4 + Scalar(1);

  f.a = -P * q2 + P + T * q4;
  f.abar = -q2 + q4 + Scalar(1);
  return f;
}

/// Coefficients when both players' cooperation probabilities are scaled by the
/// execution probability s = 1 - p_n (every p_i becomes p_i (1 - p_n)). This is
/// the noiseless form at s*q with p replaced by s*p, so the quadratic terms
/// carry s^2 and the linear terms s. At s = 1 every operation is exact and
/// quadratic_form is reproduced bit for bit.
template <typename Scalar>
QuadraticForm<Scalar> noisy_quadratic_form(const Vector4<Scalar>& q, const PayoffValues& pv,
                                           Scalar noise) {
  const Scalar s = Scalar(1) - noise;
  QuadraticForm<Scalar> f = quadratic_form<Scalar>(Vector4<Scalar>(s * q), pv);
  f.Q *= s * s;
  f.Qbar *= s * s;
  f.c *= s;
  f.cbar *= s;
  return f;
}

template <typename Scalar, typename Derived>
Scalar ratio_value(const QuadraticForm<Scalar>& f, const Eigen::MatrixBase<Derived>& p) {
  return f.numerator(p) / f.denominator(p);
}

/// (pQ + c) D - (pQbar + cbar) N, all over D^2.
template <typename Scalar, typename Derived>
Vector4<Scalar> ratio_gradient(const QuadraticForm<Scalar>& f, const Eigen::MatrixBase<Derived>& p) {
  const Scalar N = f.numerator(p);
  const Scalar D = f.denominator(p);
  const Vector4<Scalar> dN = f.Q * p + f.c;
  const Vector4<Scalar> dD = f.Qbar * p + f.cbar;
  return (dN * D - dD * N) / (D * D);
}

template <typename Scalar, typename Derived>
Matrix4<Scalar> ratio_hessian(const QuadraticForm<Scalar>& f, const Eigen::MatrixBase<Derived>& p) {
  const Scalar N = f.numerator(p);
  const Scalar D = f.denominator(p);
  const Vector4<Scalar> dN = f.Q * p + f.c;
  const Vector4<Scalar> dD = f.Qbar * p + f.cbar;
  const Scalar D2 = D * D;
  return (f.Q * D - f.Qbar * N) / D2 - (dN * dD.transpose() + dD * dN.transpose()) / D2 +
         Scalar(2) * N * dD * dD.transpose() / (D2 * D);
}

// ---------------------------------------------------------------------------

/// Denominators below this magnitude are treated as zero.
inline constexpr double kDegenerateDenominator = 1e-12;
/// Weight used to mix p and q toward (1/2, 1/2, 1/2, 1/2) at a degenerate point.
inline constexpr double kDegenerateMixing = 1e-8;

struct QuadraticCoefficients {
  QuadraticForm<double> form;
  MemoryOneStrategy source_opponent;
  double noise = 0.0;
  PayoffValues payoffs;
};

QuadraticCoefficients coefficients(const MemoryOneStrategy& q, const PayoffValues& payoffs = {});

/// Both players' actions are executed as intended with probability 1 - p_n.
QuadraticCoefficients noisy_coefficients(const MemoryOneStrategy& q, const PayoffValues& payoffs,
                                         double p_n);

/// A value plus whether the degenerate-denominator policy had to be applied.
struct Evaluation {
  double value = 0.0;
  bool degenerate = false;
};

/// u_q(p). When |denominator| < 1e-12 both p and q are mixed toward the
/// uniform strategy with weight 1e-8, the coefficients rebuilt, and the result
/// flagged as degenerate.
Evaluation utility(const MemoryOneStrategy& p, const QuadraticCoefficients& coeffs);

/// Opponents with weights. The plain constructor weights each opponent 1/N so
/// the objective is the tournament mean.
class TournamentContext {
 public:
  TournamentContext(std::vector<QuadraticCoefficients> opponents, PayoffValues payoffs);
  TournamentContext(const std::vector<MemoryOneStrategy>& opponents, const PayoffValues& payoffs = {},
                    double noise = 0.0);

  /// Copy with one more opponent at the given weight (existing weights kept).
  TournamentContext with_opponent(const MemoryOneStrategy& q, double weight) const;

  const std::vector<QuadraticCoefficients>& opponents() const { return opponents_; }
  const std::vector<double>& weights() const { return weights_; }
  const PayoffValues& payoffs() const { return payoffs_; }
  std::size_t size() const { return opponents_.size(); }

 private:
  std::vector<QuadraticCoefficients> opponents_;
  std::vector<double> weights_;
  PayoffValues payoffs_;
};

/// Weighted sum of per-opponent utilities (the mean for a plain context).
Evaluation tournament_utility(const MemoryOneStrategy& p, const TournamentContext& ctx);

/// A per-opponent denominator vanished where a derivative was requested.
class DegenerateDenominator : public std::domain_error {
 public:
  DegenerateDenominator(std::size_t opponent_index, double denominator);
  std::size_t opponent_index() const { return index_; }

 private:
  std::size_t index_;
};

/// Gradient of the weighted objective; throws DegenerateDenominator.
Eigen::Vector4d tournament_gradient(const Eigen::Vector4d& p, const TournamentContext& ctx);
inline Eigen::Vector4d tournament_gradient(const MemoryOneStrategy& p, const TournamentContext& ctx) {
  return tournament_gradient(p.vec(), ctx);
}
Eigen::Matrix4d tournament_hessian(const Eigen::Vector4d& p, const TournamentContext& ctx);

/// Raw weighted objective without the degeneracy policy; p may leave [0,1]^4.
double tournament_value_raw(const Eigen::Vector4d& p, const TournamentContext& ctx);

/// Smallest per-opponent |denominator| at p.
double min_abs_denominator(const Eigen::Vector4d& p, const TournamentContext& ctx);

}  // namespace memone

#endif  // MEMONE_CLOSED_FORM_HPP
