#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cybermoraba/classic.hpp"
#include "cybermoraba/error.hpp"

namespace cybermoraba {

struct EvalWeights {
  double material = 10.0;
  double mobility = 1.0;
  double mill_potential = 3.0;
};

struct SearchConfig {
  int max_depth = 3;
  EvalWeights weights;

  void validate() const {
    if (max_depth < 1) throw GameError(ErrorCode::invalid_options, "search depth must be >= 1");
    for (double w : {weights.material, weights.mobility, weights.mill_potential}) {
      if (!std::isfinite(w)) throw GameError(ErrorCode::invalid_options, "weights must be finite");
    }
  }
};

/// Decided positions score +/-(kWinScore - ply) so that quicker wins and
/// slower losses are preferred. Heuristic values stay far below this.
inline constexpr double kWinScore = 1e9;

inline int slide_count(const ClassicState& s, Role r) {
  int n = 0;
  const PointMask empty = s.empty_mask();
  for (PointMask own = s.pieces(r); own != 0; own &= own - 1) {
    const Point from = Point::from_id(std::countr_zero(own));
    n += std::popcount(s.topology().neighbor_mask(from) & empty);
  }
  return n;
}

/// Lines holding two of r's pieces and an empty third point.
inline int open_twos(const ClassicState& s, Role r) {
  int n = 0;
  const PointMask own = s.pieces(r);
  const PointMask empty = s.empty_mask();
  for (const MillLine& line : s.topology().mill_lines()) {
    const PointMask m = BoardTopology::mask_of(line);
    if (std::popcount(own & m) == 2 && std::popcount(empty & m) == 1) ++n;
  }
  return n;
}

/// Static evaluation from `perspective`'s point of view.
inline double evaluate(const ClassicState& s, Role perspective, const EvalWeights& w) {
  const Role opp = opponent(perspective);
  return w.material * (s.total(perspective) - s.total(opp)) +
         w.mobility * (slide_count(s, perspective) - slide_count(s, opp)) +
         w.mill_potential * (open_twos(s, perspective) - open_twos(s, opp));
}

inline double outcome_score(const ClassicOutcome& outcome, Role perspective, int ply) {
  if (outcome.is_draw()) return 0.0;
  const double magnitude = kWinScore - ply;
  return *outcome.winner == perspective ? magnitude : -magnitude;
}

/// Depth consumed by playing m. Captures finish the turn that closed the
/// mill, so they are searched without spending depth.
constexpr int depth_cost(const Move& m) { return m.kind == Move::Kind::Capture ? 0 : 1; }

struct SearchResult {
  Move move;
  double value = 0.0;
  std::uint64_t nodes = 0;
};

namespace detail {

inline double alphabeta(const ClassicState& s, int depth, double alpha, double beta, Role root,
                        const EvalWeights& w, int ply, std::uint64_t& nodes) {
  ++nodes;
  if (const auto outcome = terminal(s)) return outcome_score(*outcome, root, ply);
  if (depth <= 0 && !s.pending_capture()) return evaluate(s, root, w);

  const bool maximizing = s.to_move() == root;
  double best = maximizing ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
  for (const Move& m : legal_moves(s)) {
    const double v = alphabeta(apply_legal_move(s, m), depth - depth_cost(m), alpha, beta, root,
                               w, ply + 1, nodes);
    if (maximizing) {
      best = std::max(best, v);
      alpha = std::max(alpha, best);
    } else {
      best = std::min(best, v);
      beta = std::min(beta, best);
    }
    if (alpha >= beta) break;
  }
  return best;
}

}  // namespace detail

/// Root moves in tie-break order: ascending notation.
inline std::vector<Move> ordered_root_moves(const ClassicState& s) {
  auto moves = legal_moves(s);
  std::sort(moves.begin(), moves.end(),
            [](const Move& a, const Move& b) { return a.notation() < b.notation(); });
  return moves;
}

/// Alpha-beta search to cfg.max_depth. Among equally valued moves the one
/// with the lowest notation string wins.
inline SearchResult search(const ClassicState& state, const SearchConfig& cfg) {
  cfg.validate();
  if (terminal(state)) throw GameError(ErrorCode::game_over, "no move in a decided position");
  const Role root = state.to_move();
  SearchResult result;
  double alpha = -std::numeric_limits<double>::infinity();
  const double beta = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const Move& m : ordered_root_moves(state)) {
    // Strict improvement keeps the earliest (lowest notation) of equal moves;
    // later equal moves fail low against alpha and are never preferred.
    const double v = detail::alphabeta(apply_legal_move(state, m), cfg.max_depth - depth_cost(m),
                                       alpha, beta, root, cfg.weights, 1, result.nodes);
    if (first || v > result.value) {
      result.move = m;
      result.value = v;
      first = false;
    }
    alpha = std::max(alpha, result.value);
  }
  return result;
}

inline Move minimax_move(const ClassicState& state, const SearchConfig& cfg = {}) {
  return search(state, cfg).move;
}

}  // namespace cybermoraba
