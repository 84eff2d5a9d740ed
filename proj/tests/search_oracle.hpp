#pragma once

// Exhaustive minimax without pruning and a separately written evaluation.
// Used to check that the alpha-beta search returns the same value and move.

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "cybermoraba/ai.hpp"

namespace oracle {

inline int count_slides(const cybermoraba::ClassicState& s, cybermoraba::Role r) {
  using namespace cybermoraba;
  int n = 0;
  for (int id = 0; id < kPointCount; ++id) {
    const Point p = Point::from_id(id);
    if (s.occupant(p) != r) continue;
    for (Point q : s.topology().adjacent(p)) {
      if (!s.occupant(q)) ++n;
    }
  }
  return n;
}

inline int count_open_twos(const cybermoraba::ClassicState& s, cybermoraba::Role r) {
  int n = 0;
  for (const auto& line : s.topology().mill_lines()) {
    int own = 0, empty = 0;
    for (auto p : line) {
      const auto who = s.occupant(p);
      if (!who) ++empty;
      else if (*who == r) ++own;
    }
    if (own == 2 && empty == 1) ++n;
  }
  return n;
}

inline double static_value(const cybermoraba::ClassicState& s, cybermoraba::Role me,
                           const cybermoraba::EvalWeights& w) {
  const auto them = cybermoraba::opponent(me);
  const auto total = [&](cybermoraba::Role r) { return s.hand(r) + s.on_board(r); };
  return w.material * (total(me) - total(them)) +
         w.mobility * (count_slides(s, me) - count_slides(s, them)) +
         w.mill_potential * (count_open_twos(s, me) - count_open_twos(s, them));
}

inline double minimax(const cybermoraba::ClassicState& s, int depth, cybermoraba::Role me,
                      const cybermoraba::EvalWeights& w, int ply) {
  using namespace cybermoraba;
  if (const auto out = terminal(s)) {
    if (!out->winner) return 0.0;
    return *out->winner == me ? kWinScore - ply : -(kWinScore - ply);
  }
  if (depth <= 0 && !s.pending_capture()) return static_value(s, me, w);
  const bool mine = s.to_move() == me;
  double best = mine ? -std::numeric_limits<double>::infinity()
                     : std::numeric_limits<double>::infinity();
  for (const Move& m : legal_moves(s)) {
    const int cost = m.kind == Move::Kind::Capture ? 0 : 1;
    const double v = minimax(apply_move(s, m), depth - cost, me, w, ply + 1);
    best = mine ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

struct RootAnswer {
  cybermoraba::Move move;
  double value;
};

/// Best root move, lowest notation among equal values.
inline RootAnswer best_root(const cybermoraba::ClassicState& s, int depth,
                            const cybermoraba::EvalWeights& w = {}) {
  using namespace cybermoraba;
  auto moves = legal_moves(s);
  std::sort(moves.begin(), moves.end(),
            [](const Move& a, const Move& b) { return a.notation() < b.notation(); });
  RootAnswer best{moves.front(), -std::numeric_limits<double>::infinity()};
  for (const Move& m : moves) {
    const int cost = m.kind == Move::Kind::Capture ? 0 : 1;
    const double v = minimax(apply_move(s, m), depth - cost, s.to_move(), w, 1);
    if (v > best.value) best = {m, v};
  }
  return best;
}

/// A non-terminal position reached by a seeded random game of a seeded
/// random length. Covers placement, movement and pending captures.
inline cybermoraba::ClassicState random_position(std::uint64_t seed) {
  using namespace cybermoraba;
  std::mt19937_64 rng(seed);
  const int target = std::uniform_int_distribution<int>(0, 60)(rng);
  ClassicState s = new_classic_game(standard_topology(false), Role::Attacker);
  for (int ply = 0; ply < target; ++ply) {
    const auto moves = legal_moves(s);
    ClassicState next =
        apply_move(s, moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)]);
    if (terminal(next)) break;
    s = std::move(next);
  }
  return s;
}

}  // namespace oracle
