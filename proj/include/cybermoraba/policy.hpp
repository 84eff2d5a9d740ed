#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cybermoraba/ai.hpp"
#include "cybermoraba/awareness.hpp"
#include "cybermoraba/classic.hpp"
#include "cybermoraba/error.hpp"

namespace cybermoraba {

/// Number of remaining defense tokens that lose to `attack`.
inline int beaten_defenses(const AwarenessState& s, const std::string& attack) {
  int n = 0;
  for (const std::string& d : s.remaining(Role::Defender)) {
    if (judge_verdict(s.matrix(), attack, d).winner == Role::Attacker) ++n;
  }
  return n;
}

/// Expected attacker reward of `attack` against a defender answering
/// uniformly at random from its remaining tokens.
inline double expected_attack_reward(const AwarenessState& s, const std::string& attack) {
  const auto& defenses = s.remaining(Role::Defender);
  if (defenses.empty()) return 0.0;
  return static_cast<double>(beaten_defenses(s, attack)) / static_cast<double>(defenses.size());
}

/// First remaining defense (catalog order) that beats the committed attack,
/// else the first remaining defense. In blind matches the committed attack is
/// unknown, so the token beating the most unplayed attacks is taken instead.
inline std::string defender_policy_greedy(const AwarenessState& s) {
  if (s.phase() != AwarenessPhase::AwaitDefense) {
    throw GameError(ErrorCode::wrong_phase, "greedy defender needs a committed attack");
  }
  const auto& options = s.remaining(Role::Defender);
  if (!s.options().blind) {
    const std::string& attack = s.pending()->token;
    for (const std::string& d : options) {
      if (judge_verdict(s.matrix(), attack, d).winner == Role::Defender) return d;
    }
    return options.front();
  }
  std::vector<std::string> unseen = s.remaining(Role::Attacker);
  if (!s.options().allow_reuse) unseen.push_back(s.pending()->token);
  std::string best = options.front();
  int best_wins = -1;
  for (const std::string& d : options) {
    int wins = 0;
    for (const std::string& a : unseen) {
      wins += judge_verdict(s.matrix(), a, d).winner == Role::Defender ? 1 : 0;
    }
    if (wins > best_wins) {
      best = d;
      best_wins = wins;
    }
  }
  return best;
}

/// Attack maximising expected_attack_reward; ties go to catalog order.
inline std::string attacker_policy_expectimax(const AwarenessState& s) {
  if (s.phase() != AwarenessPhase::AwaitAttack) {
    throw GameError(ErrorCode::wrong_phase, "expectimax attacker moves only in await_attack");
  }
  const auto& options = s.remaining(Role::Attacker);
  std::string best = options.front();
  int best_count = -1;  // the denominator is shared, so counts order the same
  for (const std::string& a : options) {
    const int c = beaten_defenses(s, a);
    if (c > best_count) {
      best = a;
      best_count = c;
    }
  }
  return best;
}

struct AttackChoice {
  std::string token;
  Point point;
};

struct RandomPolicy {
  std::uint64_t seed = 0;
  std::mt19937_64 rng{seed};
};
struct GreedyDefenderPolicy {};
struct ExpectimaxAttackerPolicy {};
struct MinimaxPolicy {
  SearchConfig config;
};

/// A machine player. Only Random plays every seat; the others are tied to a
/// mode and role and reject anything else with invalid_options.
class Policy {
 public:
  using Kind = std::variant<RandomPolicy, GreedyDefenderPolicy, ExpectimaxAttackerPolicy,
                            MinimaxPolicy>;

  explicit Policy(Kind kind) : kind_(std::move(kind)) {}

  static Policy random(std::uint64_t seed) { return Policy(RandomPolicy{seed, std::mt19937_64(seed)}); }
  static Policy greedy_defender() { return Policy(GreedyDefenderPolicy{}); }
  static Policy expectimax_attacker() { return Policy(ExpectimaxAttackerPolicy{}); }
  static Policy minimax(SearchConfig cfg = {}) {
    cfg.validate();
    return Policy(MinimaxPolicy{cfg});
  }

  /// Accepts "random", "greedy-defender", "expectimax-attacker", "minimax".
  static Policy parse(std::string_view name, std::uint64_t seed = 0, int depth = 3) {
    if (name == "random") return random(seed);
    if (name == "greedy-defender") return greedy_defender();
    if (name == "expectimax-attacker") return expectimax_attacker();
    if (name == "minimax") {
      SearchConfig cfg;
      cfg.max_depth = depth;
      return minimax(cfg);
    }
    throw GameError(ErrorCode::invalid_options, "unknown policy: '" + std::string(name) + "'");
  }

  std::string name() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, RandomPolicy>) return "random";
          if constexpr (std::is_same_v<T, GreedyDefenderPolicy>) return "greedy-defender";
          if constexpr (std::is_same_v<T, ExpectimaxAttackerPolicy>) return "expectimax-attacker";
          if constexpr (std::is_same_v<T, MinimaxPolicy>) return "minimax";
        },
        kind_);
  }

  bool supports_awareness(Role seat) const {
    if (std::holds_alternative<RandomPolicy>(kind_)) return true;
    if (std::holds_alternative<GreedyDefenderPolicy>(kind_)) return seat == Role::Defender;
    if (std::holds_alternative<ExpectimaxAttackerPolicy>(kind_)) return seat == Role::Attacker;
    return false;
  }
  bool supports_classic() const {
    return std::holds_alternative<RandomPolicy>(kind_) ||
           std::holds_alternative<MinimaxPolicy>(kind_);
  }

  AttackChoice choose_attack(const AwarenessState& s) {
    if (auto* r = std::get_if<RandomPolicy>(&kind_)) {
      const auto& tokens = s.remaining(Role::Attacker);
      const std::string token = tokens[pick(r->rng, tokens.size())];
      std::vector<Point> free;
      for (int id = 0; id < kPointCount; ++id) {
        if (!s.is_occupied(Point::from_id(id))) free.push_back(Point::from_id(id));
      }
      if (free.empty()) throw GameError(ErrorCode::occupied_point, "board is full");
      return {token, free[pick(r->rng, free.size())]};
    }
    if (std::holds_alternative<ExpectimaxAttackerPolicy>(kind_)) {
      const auto point = s.first_free_point();
      if (!point) throw GameError(ErrorCode::occupied_point, "board is full");
      return {attacker_policy_expectimax(s), *point};
    }
    throw GameError(ErrorCode::invalid_options, name() + " cannot play the attacker seat");
  }

  std::string choose_defense(const AwarenessState& s) {
    if (auto* r = std::get_if<RandomPolicy>(&kind_)) {
      const auto& tokens = s.remaining(Role::Defender);
      return tokens[pick(r->rng, tokens.size())];
    }
    if (std::holds_alternative<GreedyDefenderPolicy>(kind_)) return defender_policy_greedy(s);
    throw GameError(ErrorCode::invalid_options, name() + " cannot play the defender seat");
  }

  Move choose_move(const ClassicState& s) {
    if (auto* r = std::get_if<RandomPolicy>(&kind_)) {
      const auto moves = legal_moves(s);
      if (moves.empty()) throw GameError(ErrorCode::game_over, "no legal moves");
      return moves[pick(r->rng, moves.size())];
    }
    if (auto* m = std::get_if<MinimaxPolicy>(&kind_)) return minimax_move(s, m->config);
    throw GameError(ErrorCode::invalid_options, name() + " does not play classic mode");
  }

  const Kind& kind() const { return kind_; }

 private:
  static std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  }

  Kind kind_;
};

/// Plays an awareness match to the end with two machine players.
inline AwarenessState play_out(AwarenessState s, Policy& attacker, Policy& defender) {
  while (s.phase() != AwarenessPhase::Finished) {
    if (s.phase() == AwarenessPhase::AwaitAttack) {
      const AttackChoice c = attacker.choose_attack(s);
      s = submit_attack(s, c.token, c.point);
    } else {
      s = submit_defense(s, defender.choose_defense(s)).first;
    }
  }
  return s;
}

struct ClassicPlayout {
  ClassicState state;
  std::optional<ClassicOutcome> outcome;  // empty if the ply cap was hit
};

/// Plays classic mode with `attacker` moving for Role::Attacker. Stops after
/// `max_plies` even if the game is still open.
inline ClassicPlayout play_out(ClassicState s, Policy& attacker, Policy& defender, int max_plies = 1000) {
  for (int ply = 0; ply < max_plies; ++ply) {
    if (auto o = terminal(s)) return {std::move(s), o};
    Policy& p = s.to_move() == Role::Attacker ? attacker : defender;
    s = apply_move(s, p.choose_move(s));
  }
  auto o = terminal(s);
  return {std::move(s), o};
}

}  // namespace cybermoraba
