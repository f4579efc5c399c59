#include "memone/gambler.hpp"

namespace memone {

namespace {

void check_probability(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ConstraintError("gambler parameters must lie in [0,1]");
}

}  // namespace

GamblerStrategy::GamblerStrategy(double opening, const std::array<double, 16>& table)
    : opening_(opening), table_(table) {
  check_probability(opening_);
  for (double x : table_) check_probability(x);
}

GamblerStrategy::GamblerStrategy(const Parameters& serialized) {
  opening_ = serialized[0];
  for (int i = 0; i < 16; ++i) table_[i] = serialized[i + 1];
  check_probability(opening_);
  for (double x : table_) check_probability(x);
}

GamblerStrategy GamblerStrategy::constant(double probability) {
  std::array<double, 16> table;
  table.fill(probability);
  return GamblerStrategy(probability, table);
}

GamblerStrategy GamblerStrategy::from_memory_one(const MemoryOneStrategy& p) {
  std::array<double, 16> table{};
  for (int rank = 0; rank < 4; ++rank) {
    for (Action opp : {Action::C, Action::D}) {
      for (Action own : {Action::C, Action::D}) {
        table[table_index(rank, opp, own)] = p[outcome_index(own, opp)];
      }
    }
  }
  return GamblerStrategy(1.0, table);
}

GamblerStrategy::Parameters GamblerStrategy::serialize() const {
  Parameters out;
  out[0] = opening_;
  for (int i = 0; i < 16; ++i) out[i + 1] = table_[i];
  return out;
}

double gambler_decision(const GamblerStrategy& f, int turn, Action opp_first, Action opp_second,
                        Action opp_last, Action own_last) {
  if (turn <= 1) return f.opening();
  const Action second = turn == 2 ? opp_first : opp_second;
  return f.table()[GamblerStrategy::table_index(first_two_rank(opp_first, second), opp_last, own_last)];
}

}  // namespace memone
