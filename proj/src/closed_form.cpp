#include "memone/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace memone {

QuadraticCoefficients coefficients(const MemoryOneStrategy& q, const PayoffValues& payoffs) {
  return {quadratic_form<double>(q.vec(), payoffs), q, 0.0, payoffs};
}

QuadraticCoefficients noisy_coefficients(const MemoryOneStrategy& q, const PayoffValues& payoffs,
                                         double p_n) {
  if (!(p_n >= 0.0 && p_n <= 1.0)) throw ConstraintError("noise probability must lie in [0,1]");
  return {noisy_quadratic_form<double>(q.vec(), payoffs, p_n), q, p_n, payoffs};
}

namespace {

const Eigen::Vector4d kUniform = Eigen::Vector4d::Constant(0.5);

Eigen::Vector4d mix_toward_uniform(const Eigen::Vector4d& x) {
  return (1.0 - kDegenerateMixing) * x + kDegenerateMixing * kUniform;
}

QuadraticCoefficients rebuild(const MemoryOneStrategy& q, const QuadraticCoefficients& like) {
  return like.noise > 0.0 ? noisy_coefficients(q, like.payoffs, like.noise)
                          : coefficients(q, like.payoffs);
}

}  // namespace

Evaluation utility(const MemoryOneStrategy& p, const QuadraticCoefficients& coeffs) {
  const double D = coeffs.form.denominator(p.vec());
  if (std::abs(D) >= kDegenerateDenominator) {
    return {coeffs.form.numerator(p.vec()) / D, false};
  }
  const Eigen::Vector4d p_mixed = mix_toward_uniform(p.vec());
  const auto q_mixed = MemoryOneStrategy(mix_toward_uniform(coeffs.source_opponent.vec()));
  const auto mixed = rebuild(q_mixed, coeffs);
  return {ratio_value(mixed.form, p_mixed), true};
}

TournamentContext::TournamentContext(std::vector<QuadraticCoefficients> opponents, PayoffValues payoffs)
    : opponents_(std::move(opponents)), payoffs_(payoffs) {
  if (opponents_.empty()) throw ConstraintError("a tournament needs at least one opponent");
  weights_.assign(opponents_.size(), 1.0 / static_cast<double>(opponents_.size()));
}

TournamentContext::TournamentContext(const std::vector<MemoryOneStrategy>& opponents,
                                     const PayoffValues& payoffs, double noise)
    : payoffs_(payoffs) {
  if (opponents.empty()) throw ConstraintError("a tournament needs at least one opponent");
  for (const auto& q : opponents) {
    opponents_.push_back(noise > 0.0 ? noisy_coefficients(q, payoffs, noise) : coefficients(q, payoffs));
  }
  weights_.assign(opponents_.size(), 1.0 / static_cast<double>(opponents_.size()));
}

TournamentContext TournamentContext::with_opponent(const MemoryOneStrategy& q, double weight) const {
  TournamentContext out = *this;
  const double noise = opponents_.front().noise;
  out.opponents_.push_back(noise > 0.0 ? noisy_coefficients(q, payoffs_, noise) : coefficients(q, payoffs_));
  out.weights_.push_back(weight);
  return out;
}

Evaluation tournament_utility(const MemoryOneStrategy& p, const TournamentContext& ctx) {
  Evaluation total;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (ctx.weights()[i] == 0.0) continue;
    const Evaluation e = utility(p, ctx.opponents()[i]);
    total.value += ctx.weights()[i] * e.value;
    total.degenerate = total.degenerate || e.degenerate;
  }
  return total;
}

namespace {

std::string degenerate_message(std::size_t index, double denominator) {
  std::ostringstream os;
  os << "denominator of opponent " << index << " vanishes (" << denominator << ")";
  return os.str();
}

void require_nondegenerate(const Eigen::Vector4d& p, const TournamentContext& ctx) {
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const double D = ctx.opponents()[i].form.denominator(p);
    if (!(std::abs(D) >= kDegenerateDenominator)) throw DegenerateDenominator(i, D);
  }
}

}  // namespace

DegenerateDenominator::DegenerateDenominator(std::size_t opponent_index, double denominator)
    : std::domain_error(degenerate_message(opponent_index, denominator)), index_(opponent_index) {}

Eigen::Vector4d tournament_gradient(const Eigen::Vector4d& p, const TournamentContext& ctx) {
  require_nondegenerate(p, ctx);
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < ctx.size(); ++i) g += ctx.weights()[i] * ratio_gradient(ctx.opponents()[i].form, p);
  return g;
}

Eigen::Matrix4d tournament_hessian(const Eigen::Vector4d& p, const TournamentContext& ctx) {
  require_nondegenerate(p, ctx);
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  for (std::size_t i = 0; i < ctx.size(); ++i) H += ctx.weights()[i] * ratio_hessian(ctx.opponents()[i].form, p);
  return H;
}

double tournament_value_raw(const Eigen::Vector4d& p, const TournamentContext& ctx) {
  double total = 0.0;
  for (std::size_t i = 0; i < ctx.size(); ++i) total += ctx.weights()[i] * ratio_value(ctx.opponents()[i].form, p);
  return total;
}

double min_abs_denominator(const Eigen::Vector4d& p, const TournamentContext& ctx) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& o : ctx.opponents()) m = std::min(m, std::abs(o.form.denominator(p)));
  return m;
}

}  // namespace memone
