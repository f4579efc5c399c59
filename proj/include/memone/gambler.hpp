// Gambler lookup strategy with n1 = 2 (opponent's first two moves), m1 = 1
// (opponent's last move) and m2 = 1 (own last move), plus an opening
// probability: 17 parameters in total.
//
// Table layout, row-major over (first two, opponent last, own last):
//
//   index = 4 * rank(first two) + 2 * opponent_last + own_last
//
// with ranks CC = 0, CD = 1, DC = 2, DD = 3 and C = 0, D = 1. The serialized
// form is [opening, table[0], ..., table[15]].

#ifndef MEMONE_GAMBLER_HPP
#define MEMONE_GAMBLER_HPP

#include "memone/game.hpp"

#include <Eigen/Dense>

#include <array>

namespace memone {

class GamblerStrategy {
 public:
  static constexpr int kParameters = 17;
  using Parameters = Eigen::Matrix<double, kParameters, 1>;

  GamblerStrategy() = default;
  GamblerStrategy(double opening, const std::array<double, 16>& table);
  /// From the 17-element serialized vector.
  explicit GamblerStrategy(const Parameters& serialized);

  static GamblerStrategy constant(double probability);
  /// Table entries replicate p's response to (own last, opponent last);
  /// opening is cooperation. Ignores the opponent's first two moves.
  static GamblerStrategy from_memory_one(const MemoryOneStrategy& p);

  static int table_index(int first_two_rank, Action opp_last, Action own_last) {
    return 4 * first_two_rank + 2 * static_cast<int>(opp_last) + static_cast<int>(own_last);
  }

  double opening() const { return opening_; }
  const std::array<double, 16>& table() const { return table_; }
  Parameters serialize() const;

 private:
  double opening_ = 0.0;
  std::array<double, 16> table_{};
};

/// Rank of the opponent's first two moves: CC = 0, CD = 1, DC = 2, DD = 3.
inline int first_two_rank(Action first, Action second) {
  return 2 * static_cast<int>(first) + static_cast<int>(second);
}

/// Cooperation probability on `turn` (1-based). Turn 1 plays the opening and
/// ignores the history arguments. Turn 2 uses the table with the opponent's
/// first move standing in for both of its first two moves (`opp_second` is
/// ignored). Later turns are a plain lookup.
double gambler_decision(const GamblerStrategy& f, int turn, Action opp_first, Action opp_second,
                        Action opp_last, Action own_last);

}  // namespace memone

#endif  // MEMONE_GAMBLER_HPP
