#include "memone/game.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace memone {

PayoffValues validate_payoffs(double R, double P, double S, double T) {
  for (double x : {R, P, S, T}) {
    if (!std::isfinite(x)) throw ConstraintError("payoff values must be finite");
  }
  if (!(T > R)) throw ConstraintError("payoffs violate T > R");
  if (!(R > P)) throw ConstraintError("payoffs violate R > P");
  if (!(P > S)) throw ConstraintError("payoffs violate P > S");
  if (!(2 * R > T + S)) throw ConstraintError("payoffs violate 2R > T + S");
  return PayoffValues{R, P, S, T};
}

MemoryOneStrategy::MemoryOneStrategy(const Eigen::Vector4d& probabilities) : probs_(probabilities) {
  for (int i = 0; i < 4; ++i) {
    if (!(probabilities[i] >= 0.0 && probabilities[i] <= 1.0)) {
      throw ConstraintError("memory-one strategy components must lie in [0,1]");
    }
  }
}

MemoryOneStrategy MemoryOneStrategy::clamped(const Eigen::Vector4d& probabilities) {
  return MemoryOneStrategy(probabilities.cwiseMax(0.0).cwiseMin(1.0));
}

bool lexicographically_less(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return std::lexicographical_compare(a.data(), a.data() + 4, b.data(), b.data() + 4);
}

std::string to_string(const MemoryOneStrategy& s) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << s[0] << ", " << s[1] << ", " << s[2] << ", " << s[3] << ')';
  return os.str();
}

namespace {

using Reach = std::array<std::array<bool, 4>, 4>;

Reach reachability(const Eigen::Matrix4d& M) {
  Reach r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = (i == j) || M(i, j) > 0.0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[i][j] = r[i][j] || (r[i][k] && r[k][j]);
  return r;
}

// Stationary vector of M restricted to `states`, which must form a closed class.
Eigen::VectorXd class_stationary(const Eigen::Matrix4d& M, const std::vector<int>& states) {
  const int m = static_cast<int>(states.size());
  Eigen::MatrixXd A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = M(states[j], states[i]) - (i == j ? 1.0 : 0.0);
  A.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b[m - 1] = 1.0;
  return A.fullPivLu().solve(b);
}

bool is_stationary(const Eigen::Matrix4d& M, const Eigen::Vector4d& v) {
  return v.allFinite() && (v.transpose() * M - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12 &&
         v.minCoeff() >= -1e-12 && std::abs(v.sum() - 1.0) <= 1e-12;
}

// Cesaro average of the chain started in CC.
Eigen::Vector4d cesaro_from_cc(const Eigen::Matrix4d& M) {
  Eigen::RowVector4d x(1, 0, 0, 0);
  Eigen::RowVector4d sum = x;
  Eigen::RowVector4d avg = x;
  for (long t = 2; t <= 1000000; ++t) {
    x = x * M;
    sum += x;
    Eigen::RowVector4d next = sum / static_cast<double>(t);
    const double diff = (next - avg).cwiseAbs().maxCoeff();
    avg = next;
    if (diff < 1e-12) break;
  }
  return avg.transpose();
}

}  // namespace

StationaryDistribution stationary_distribution(const Eigen::Matrix4d& M) {
  StationaryDistribution out;
  const Reach r = reachability(M);

  std::array<bool, 4> recurrent{};
  out.ergodic = true;
  for (int i = 0; i < 4; ++i) {
    recurrent[i] = true;
    for (int j = 0; j < 4; ++j) {
      if (!r[i][j]) out.ergodic = false;
      if (r[i][j] && !r[j][i]) recurrent[i] = false;
    }
  }

  std::vector<std::vector<int>> classes;
  std::array<int, 4> class_of{-1, -1, -1, -1};
  for (int i = 0; i < 4; ++i) {
    if (!recurrent[i] || class_of[i] >= 0) continue;
    std::vector<int> members;
    for (int j = 0; j < 4; ++j) {
      if (recurrent[j] && r[i][j] && r[j][i]) {
        members.push_back(j);
        class_of[j] = static_cast<int>(classes.size());
      }
    }
    classes.push_back(std::move(members));
  }
  out.unique = classes.size() == 1;

  if (out.unique) {
    Eigen::Matrix4d A = M.transpose() - Eigen::Matrix4d::Identity();
    A.row(3).setOnes();
    const Eigen::Vector4d b(0, 0, 0, 1);
    Eigen::Vector4d v = A.fullPivLu().solve(b);
    if (is_stationary(M, v)) {
      out.v = v.cwiseMax(0.0);
      out.v /= out.v.sum();
      return out;
    }
    out.v = cesaro_from_cc(M);
    return out;
  }

  // Several closed classes: weight each class's stationary vector by the
  // probability that the chain started in CC is absorbed there.
  std::vector<int> transient;
  for (int i = 0; i < 4; ++i)
    if (!recurrent[i]) transient.push_back(i);

  Eigen::VectorXd absorb = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(classes.size()));
  if (recurrent[0]) {
    absorb[class_of[0]] = 1.0;
  } else {
    const int t = static_cast<int>(transient.size());
    Eigen::MatrixXd I_minus_T(t, t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j)
        I_minus_T(i, j) = (i == j ? 1.0 : 0.0) - M(transient[i], transient[j]);
    Eigen::MatrixXd to_class = Eigen::MatrixXd::Zero(t, static_cast<Eigen::Index>(classes.size()));
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < 4; ++j)
        if (recurrent[j]) to_class(i, class_of[j]) += M(transient[i], j);
    const Eigen::MatrixXd B = I_minus_T.fullPivLu().solve(to_class);
    const auto cc = std::find(transient.begin(), transient.end(), 0) - transient.begin();
    absorb = B.row(cc).transpose();
  }

  out.v.setZero();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const Eigen::VectorXd pi = class_stationary(M, classes[c]);
    for (std::size_t k = 0; k < classes[c].size(); ++k)
      out.v[classes[c][k]] += absorb[static_cast<Eigen::Index>(c)] * pi[static_cast<Eigen::Index>(k)];
  }
  if (!out.v.allFinite() || std::abs(out.v.sum() - 1.0) > 1e-9) out.v = cesaro_from_cc(M);
  out.v = out.v.cwiseMax(0.0);
  out.v /= out.v.sum();
  return out;
}

double utility_stationary(const MemoryOneStrategy& p, const MemoryOneStrategy& q,
                          const PayoffValues& payoffs) {
  const auto dist = stationary_distribution(transition_matrix(p, q));
  return dist.v.dot(payoffs.outcome_scores());
}

}  // namespace memone
