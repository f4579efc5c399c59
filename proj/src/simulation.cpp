#include "memone/simulation.hpp"

#include "memone/seeding.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace memone {

namespace {

struct Seat {
  int turn = 1;
  Action own_last = Action::C;
  Action opp_last = Action::C;
  Action opp_first = Action::C;
  Action opp_second = Action::C;

  void record(Action own, Action opp) {
    if (turn == 1) opp_first = opp;
    if (turn == 2) opp_second = opp;
    own_last = own;
    opp_last = opp;
    ++turn;
  }
};

struct CooperationProbability {
  const Seat& seat;
  double operator()(const MemoryOneStrategy& p) const {
    if (seat.turn == 1) return 1.0;
    return p[outcome_index(seat.own_last, seat.opp_last)];
  }
  double operator()(const GamblerStrategy& f) const {
    return gambler_decision(f, seat.turn, seat.opp_first, seat.opp_second, seat.opp_last,
                            seat.own_last);
  }
};

Action draw(double cooperate, double noise, Rng& rng) {
  Action a = uniform01(rng) < cooperate ? Action::C : Action::D;
  if (noise > 0.0 && uniform01(rng) < noise) a = flip(a);
  return a;
}

double standard_error(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

MatchResult simulate_match(const Strategy& a, const Strategy& b, const MatchOptions& options,
                           const PayoffValues& payoffs) {
  if (options.turns < 1 || options.repetitions < 1) {
    throw ConstraintError("simulate_match needs turns >= 1 and repetitions >= 1");
  }
  if (!(options.noise >= 0.0 && options.noise <= 1.0)) {
    throw ConstraintError("noise must lie in [0,1]");
  }
  const Eigen::Vector4d scores = payoffs.outcome_scores();
  std::vector<double> per_rep_a(options.repetitions), per_rep_b(options.repetitions);

  for (int rep = 0; rep < options.repetitions; ++rep) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(rep)));
    Seat seat_a, seat_b;
    double total_a = 0.0, total_b = 0.0;
    for (int t = 0; t < options.turns; ++t) {
      const double pa = std::visit(CooperationProbability{seat_a}, a);
      const double pb = std::visit(CooperationProbability{seat_b}, b);
      const Action act_a = draw(pa, options.noise, rng);
      const Action act_b = draw(pb, options.noise, rng);
      total_a += scores[outcome_index(act_a, act_b)];
      total_b += scores[outcome_index(act_b, act_a)];
      seat_a.record(act_a, act_b);
      seat_b.record(act_b, act_a);
    }
    per_rep_a[rep] = total_a / options.turns;
    per_rep_b[rep] = total_b / options.turns;
  }

  MatchResult out;
  out.turns = options.turns;
  out.repetitions = options.repetitions;
  out.seed = options.seed;
  for (int rep = 0; rep < options.repetitions; ++rep) {
    out.mean_a += per_rep_a[rep];
    out.mean_b += per_rep_b[rep];
  }
  out.mean_a /= options.repetitions;
  out.mean_b /= options.repetitions;
  out.stderr_a = standard_error(per_rep_a, out.mean_a);
  out.stderr_b = standard_error(per_rep_b, out.mean_b);
  return out;
}

}  // namespace memone
