#include "memone/global_optimize.hpp"

#include "memone/game.hpp"
#include "memone/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace memone {

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int n = 2; static_cast<int>(primes.size()) < count; ++n) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(n);
  }
  return primes;
}

double radical_inverse(long index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

class CountingObjective {
 public:
  CountingObjective(const BoxObjective& f, int budget) : f_(f), budget_(budget) {}

  bool exhausted() const { return used_ >= budget_; }
  int used() const { return used_; }

  double operator()(const Eigen::VectorXd& x) {
    ++used_;
    const double v = f_(x);
    if (std::isfinite(v) && (!have_best_ || v > best_value_)) {
      best_value_ = v;
      best_point_ = x;
      have_best_ = true;
    }
    return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  }

  bool have_best() const { return have_best_; }
  const Eigen::VectorXd& best_point() const { return best_point_; }
  double best_value() const { return best_value_; }

 private:
  const BoxObjective& f_;
  int budget_;
  int used_ = 0;
  bool have_best_ = false;
  Eigen::VectorXd best_point_;
  double best_value_ = 0.0;
};

// Opportunistic compass search; coordinates polled in a seeded order.
void compass_search(CountingObjective& f, Eigen::VectorXd x, double fx, int budget, Rng& rng) {
  const int d = static_cast<int>(x.size());
  const int stop_at = std::min(f.used() + budget, std::numeric_limits<int>::max());
  double step = 0.25;
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  while (step > 1e-7 && f.used() < stop_at && !f.exhausted()) {
    std::shuffle(order.begin(), order.end(), rng);
    bool improved = false;
    for (int k : order) {
      for (double dir : {1.0, -1.0}) {
        if (f.used() >= stop_at || f.exhausted()) return;
        Eigen::VectorXd y = x;
        y[k] = std::clamp(y[k] + dir * step, 0.0, 1.0);
        if (y[k] == x[k]) continue;
        const double fy = f(y);
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
}

}  // namespace

std::vector<Eigen::VectorXd> scrambled_halton(int count, int d, std::uint64_t seed, int skip) {
  const std::vector<int> primes = first_primes(d);
  Rng rng(derive_seed(seed, 0x4a17u));
  Eigen::VectorXd shift(d);
  for (int k = 0; k < d; ++k) shift[k] = uniform01(rng);
  std::vector<Eigen::VectorXd> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x(d);
    for (int k = 0; k < d; ++k) {
      const double h = radical_inverse(static_cast<long>(i + 1 + skip), primes[k]) + shift[k];
      x[k] = h - std::floor(h);
    }
    points.push_back(std::move(x));
  }
  return points;
}

OptimizeResult global_optimize(const BoxObjective& objective, int d, const GlobalOptimizeOptions& options) {
  if (d < 1) throw ConstraintError("global_optimize needs d >= 1");
  if (options.budget < 10 * d) throw ConstraintError("global_optimize needs budget >= 10 d");

  CountingObjective f(objective, options.budget);
  std::vector<std::pair<double, Eigen::VectorXd>> design;

  for (const auto& x0 : options.initial_points) {
    if (f.exhausted()) break;
    const Eigen::VectorXd x = x0.cwiseMax(0.0).cwiseMin(1.0);
    design.emplace_back(f(x), x);
  }
  const int design_size = std::max(options.budget / 2, 1);
  for (auto& x : scrambled_halton(design_size, d, options.seed)) {
    if (f.exhausted()) break;
    design.emplace_back(f(x), x);
  }

  // Best first; ties resolved lexicographically so the order is deterministic.
  std::stable_sort(design.begin(), design.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return std::lexicographical_compare(a.second.data(), a.second.data() + a.second.size(),
                                        b.second.data(), b.second.data() + b.second.size());
  });

  Rng rng(derive_seed(options.seed, 0xc0ffeeu));
  const int starts = std::max(1, std::min<int>(options.local_starts, static_cast<int>(design.size())));
  for (int s = 0; s < starts && !f.exhausted(); ++s) {
    const int remaining = options.budget - f.used();
    const int share = remaining / (starts - s);
    compass_search(f, design[s].second, design[s].first, share, rng);
  }

  OptimizeResult out;
  out.evaluations = f.used();
  if (f.have_best()) {
    out.point = f.best_point();
    out.value = f.best_value();
  } else {
    out.point = Eigen::VectorXd::Constant(d, 0.5);
    out.value = objective(out.point);
  }
  return out;
}

}  // namespace memone
