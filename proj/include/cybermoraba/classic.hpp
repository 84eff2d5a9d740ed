#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cybermoraba/board.hpp"
#include "cybermoraba/error.hpp"

namespace cybermoraba {

/// The two sides. Classic mode reuses them as plain first/second colours.
enum class Role : std::uint8_t { Attacker = 0, Defender = 1 };

constexpr Role opponent(Role r) { return r == Role::Attacker ? Role::Defender : Role::Attacker; }
constexpr int slot(Role r) { return static_cast<int>(r); }

constexpr std::string_view to_string(Role r) {
  return r == Role::Attacker ? "attacker" : "defender";
}

inline Role role_from_string(std::string_view s) {
  if (s == "attacker" || s == "Attacker") return Role::Attacker;
  if (s == "defender" || s == "Defender") return Role::Defender;
  throw GameError(ErrorCode::malformed, "unknown role: '" + std::string(s) + "'");
}

enum class Phase : std::uint8_t { Placement, Movement };

constexpr std::string_view to_string(Phase p) {
  return p == Phase::Placement ? "placement" : "movement";
}

struct Move {
  enum class Kind : std::uint8_t { Place, Slide, Capture };

  Kind kind = Kind::Place;
  Point from;  // Slide only
  Point to;    // target point for every kind

  static constexpr Move place(Point p) { return {Kind::Place, p, p}; }
  static constexpr Move slide(Point from, Point to) { return {Kind::Slide, from, to}; }
  static constexpr Move capture(Point p) { return {Kind::Capture, p, p}; }

  /// "P:a7", "S:a7-d7" or "C:g1".
  std::string notation() const {
    switch (kind) {
      case Kind::Place: return "P:" + to.name();
      case Kind::Slide: return "S:" + from.name() + "-" + to.name();
      case Kind::Capture: return "C:" + to.name();
    }
    return {};
  }

  static Move parse(std::string_view text) {
    auto fail = [&]() -> Move {
      throw GameError(ErrorCode::malformed, "bad move notation: '" + std::string(text) + "'");
    };
    if (text.size() < 4 || text[1] != ':') return fail();
    const std::string_view body = text.substr(2);
    try {
      switch (text[0]) {
        case 'P': return place(Point::from_name(body));
        case 'C': return capture(Point::from_name(body));
        case 'S':
          if (body.size() != 5 || body[2] != '-') return fail();
          return slide(Point::from_name(body.substr(0, 2)), Point::from_name(body.substr(3)));
        default: return fail();
      }
    } catch (const GameError&) {
      return fail();
    }
  }

  friend constexpr bool operator==(const Move&, const Move&) = default;
};

struct ClassicRules {
  int pieces_per_side = 12;
  /// Three-piece flying. Off by default; kept for variant play.
  bool flying = false;
  int no_capture_draw_plies = 100;
  int repetition_limit = 3;

  friend bool operator==(const ClassicRules&, const ClassicRules&) = default;
};

/// Arbitrary position for tests and puzzles. Pieces not on the board and not
/// in hand count as captured.
struct ClassicSetup {
  std::vector<Point> attacker;
  std::vector<Point> defender;
  int attacker_hand = 0;
  int defender_hand = 0;
  Role to_move = Role::Attacker;
};

struct ClassicOutcome {
  enum class Reason { TooFewPieces, Immobilized, Repetition, NoCaptureLimit };
  std::optional<Role> winner;  // empty on a draw
  Reason reason = Reason::TooFewPieces;

  bool is_draw() const { return !winner.has_value(); }
  friend bool operator==(const ClassicOutcome&, const ClassicOutcome&) = default;
};

class ClassicState;
std::vector<Move> legal_moves(const ClassicState& state);
ClassicState apply_move(const ClassicState& state, const Move& m);
ClassicState apply_legal_move(const ClassicState& state, const Move& m);
std::optional<ClassicOutcome> terminal(const ClassicState& state);

/// Immutable-by-convention game state; transitions go through apply_move().
class ClassicState {
 public:
  ClassicState(const BoardTopology& topology, Role first, ClassicRules rules = {})
      : topology_(&topology), rules_(rules), to_move_(first) {
    hand_ = {rules.pieces_per_side, rules.pieces_per_side};
  }

  static ClassicState from_setup(const BoardTopology& topology, const ClassicSetup& setup,
                                 ClassicRules rules = {}) {
    ClassicState s(topology, setup.to_move, rules);
    s.hand_ = {setup.attacker_hand, setup.defender_hand};
    auto fill = [&s](Role r, const std::vector<Point>& pts) {
      for (Point p : pts) {
        if (((s.pieces_[0] | s.pieces_[1]) & bit(p)) != 0) {
          throw GameError(ErrorCode::occupied_point, "point used twice in setup: " + p.name());
        }
        s.pieces_[slot(r)] |= bit(p);
      }
    };
    fill(Role::Attacker, setup.attacker);
    fill(Role::Defender, setup.defender);
    for (Role r : {Role::Attacker, Role::Defender}) {
      const int lost = rules.pieces_per_side - s.hand_[slot(r)] - s.on_board(r);
      if (lost < 0 || s.hand_[slot(r)] < 0) {
        throw GameError(ErrorCode::invalid_options, "setup exceeds piece budget");
      }
      s.lost_[slot(r)] = lost;
    }
    s.remember_position();
    return s;
  }

  const BoardTopology& topology() const { return *topology_; }
  const ClassicRules& rules() const { return rules_; }

  std::optional<Role> occupant(Point p) const {
    if (pieces_[0] & bit(p)) return Role::Attacker;
    if (pieces_[1] & bit(p)) return Role::Defender;
    return std::nullopt;
  }
  PointMask pieces(Role r) const { return pieces_[slot(r)]; }
  PointMask empty_mask() const {
    return ((PointMask{1} << kPointCount) - 1) & ~(pieces_[0] | pieces_[1]);
  }

  int hand(Role r) const { return hand_[slot(r)]; }
  int on_board(Role r) const { return std::popcount(pieces_[slot(r)]); }
  /// Pieces of r removed by the opponent.
  int captured(Role r) const { return lost_[slot(r)]; }
  int total(Role r) const { return hand(r) + on_board(r); }

  Phase phase() const { return hand_[0] > 0 || hand_[1] > 0 ? Phase::Placement : Phase::Movement; }
  Role to_move() const { return to_move_; }
  bool pending_capture() const { return pending_capture_; }
  const std::vector<Move>& history() const { return history_; }
  int quiet_plies() const { return quiet_plies_; }

  /// Exact encoding of (occupancy, side to move, phase).
  std::uint64_t position_key() const {
    return std::uint64_t{pieces_[0]} | (std::uint64_t{pieces_[1]} << 24) |
           (std::uint64_t{static_cast<std::uint8_t>(to_move_)} << 48) |
           (std::uint64_t{static_cast<std::uint8_t>(phase())} << 49);
  }

  int repetitions() const {
    return static_cast<int>(std::count(seen_.begin(), seen_.end(), position_key()));
  }

  bool in_mill(Point p) const {
    const auto who = occupant(p);
    if (!who) return false;
    for (std::size_t line : topology_->mill_indices(p)) {
      const PointMask m = BoardTopology::mask_of(topology_->mill_lines()[line]);
      if ((pieces_[slot(*who)] & m) == m) return true;
    }
    return false;
  }

  friend bool operator==(const ClassicState&, const ClassicState&) = default;

 private:
  friend std::vector<Move> legal_moves(const ClassicState&);
  friend ClassicState apply_legal_move(const ClassicState&, const Move&);

  void remember_position() {
    if (phase() == Phase::Movement && !pending_capture_) seen_.push_back(position_key());
  }

  const BoardTopology* topology_;
  ClassicRules rules_;
  std::array<PointMask, 2> pieces_{};
  std::array<int, 2> hand_{};
  std::array<int, 2> lost_{};
  Role to_move_;
  bool pending_capture_ = false;
  std::vector<Move> history_;
  // Movement-phase positions since the last capture; earlier ones cannot recur.
  std::vector<std::uint64_t> seen_;
  int quiet_plies_ = 0;
};

inline ClassicState new_classic_game(const BoardTopology& topology, Role first = Role::Attacker,
                                     ClassicRules rules = {}) {
  return ClassicState(topology, first, rules);
}

inline std::vector<Move> capturable_moves(const ClassicState& s) {
  const Role victim = opponent(s.to_move());
  std::vector<Move> free_pieces;
  std::vector<Move> all;
  for (PointMask m = s.pieces(victim); m != 0; m &= m - 1) {
    const Point p = Point::from_id(std::countr_zero(m));
    all.push_back(Move::capture(p));
    if (!s.in_mill(p)) free_pieces.push_back(Move::capture(p));
  }
  // At three pieces every piece is fair game.
  if (s.total(victim) <= 3 || free_pieces.empty()) return all;
  return free_pieces;
}

inline std::vector<Move> legal_moves(const ClassicState& s) {
  std::vector<Move> moves;
  const Role me = s.to_move();
  if (s.pending_capture_) return capturable_moves(s);

  const PointMask empty = s.empty_mask();
  if (s.hand(me) > 0) {
    for (PointMask m = empty; m != 0; m &= m - 1) {
      moves.push_back(Move::place(Point::from_id(std::countr_zero(m))));
    }
    return moves;
  }
  const bool flying = s.rules().flying && s.on_board(me) == 3;
  for (PointMask own = s.pieces(me); own != 0; own &= own - 1) {
    const Point from = Point::from_id(std::countr_zero(own));
    PointMask targets = flying ? empty : (s.topology().neighbor_mask(from) & empty);
    for (; targets != 0; targets &= targets - 1) {
      moves.push_back(Move::slide(from, Point::from_id(std::countr_zero(targets))));
    }
  }
  return moves;
}

/// True when `at` sits on a line fully covered by `mask`.
inline bool forms_mill(const BoardTopology& topology, PointMask mask, Point at) {
  for (std::size_t line : topology.mill_indices(at)) {
    const PointMask m = BoardTopology::mask_of(topology.mill_lines()[line]);
    if ((mask & m) == m) return true;
  }
  return false;
}

inline std::optional<ClassicOutcome> terminal(const ClassicState& s) {
  using Reason = ClassicOutcome::Reason;
  for (Role r : {s.to_move(), opponent(s.to_move())}) {
    if (s.total(r) < 3) return ClassicOutcome{opponent(r), Reason::TooFewPieces};
  }
  if (s.pending_capture()) return std::nullopt;
  if (legal_moves(s).empty()) return ClassicOutcome{opponent(s.to_move()), Reason::Immobilized};
  if (s.phase() == Phase::Movement) {
    if (s.repetitions() >= s.rules().repetition_limit) {
      return ClassicOutcome{std::nullopt, Reason::Repetition};
    }
    if (s.quiet_plies() >= s.rules().no_capture_draw_plies) {
      return ClassicOutcome{std::nullopt, Reason::NoCaptureLimit};
    }
  }
  return std::nullopt;
}

/// Transition without legality checks; m must come from legal_moves(state)
/// of a non-terminal state. Search code uses this to skip revalidation.
inline ClassicState apply_legal_move(const ClassicState& state, const Move& m) {
  ClassicState next = state;
  const Role me = state.to_move();
  auto& own = next.pieces_[slot(me)];
  next.history_.push_back(m);

  switch (m.kind) {
    case Move::Kind::Capture: {
      const Role victim = opponent(me);
      next.pieces_[slot(victim)] &= ~bit(m.to);
      ++next.lost_[slot(victim)];
      next.pending_capture_ = false;
      next.to_move_ = victim;
      next.quiet_plies_ = 0;
      next.seen_.clear();
      next.remember_position();
      return next;
    }
    case Move::Kind::Place:
      own |= bit(m.to);
      --next.hand_[slot(me)];
      break;
    case Move::Kind::Slide:
      own = (own & ~bit(m.from)) | bit(m.to);
      ++next.quiet_plies_;
      break;
  }

  // One capture per move even when two lines close at once.
  if (forms_mill(next.topology(), own, m.to)) {
    next.pending_capture_ = true;
    if (!capturable_moves(next).empty()) return next;
    next.pending_capture_ = false;
  }
  next.to_move_ = opponent(me);
  next.remember_position();
  return next;
}

/// Checked transition: throws game_over on decided games and illegal_move
/// for anything outside legal_moves(state). The input is never modified.
inline ClassicState apply_move(const ClassicState& state, const Move& m) {
  if (terminal(state)) throw GameError(ErrorCode::game_over, "game is already decided");
  const auto legal = legal_moves(state);
  if (std::find(legal.begin(), legal.end(), m) == legal.end()) {
    throw GameError(ErrorCode::illegal_move, "illegal move " + m.notation());
  }
  return apply_legal_move(state, m);
}

}  // namespace cybermoraba
