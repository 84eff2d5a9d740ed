#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cybermoraba/board.hpp"
#include "cybermoraba/classic.hpp"
#include "cybermoraba/error.hpp"
#include "cybermoraba/matrix.hpp"
#include "cybermoraba/tokens.hpp"

namespace cybermoraba {

inline constexpr std::string_view kTimeoutFeedback = "move time expired";

struct AwarenessOptions {
  int rounds = 13;
  /// Tokens go back to the hand after use.
  bool allow_reuse = false;
  /// Defender answers without seeing the committed attack.
  bool blind = false;
  std::optional<double> timer_seconds;
  bool diagonals = false;

  friend bool operator==(const AwarenessOptions&, const AwarenessOptions&) = default;
};

struct RoundRecord {
  int round = 0;
  std::string attack_token;  // empty when the attacker timed out
  std::string defend_token;  // empty when the defender did not answer
  std::optional<Point> point;
  int attacker_reward = 0;
  int defender_reward = 0;
  std::string feedback;
  double attacker_elapsed = 0.0;
  double defender_elapsed = 0.0;
  bool timed_out = false;

  Role winner() const { return attacker_reward == 1 ? Role::Attacker : Role::Defender; }
  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

enum class AwarenessPhase { AwaitAttack, AwaitDefense, Finished };

constexpr std::string_view to_string(AwarenessPhase p) {
  switch (p) {
    case AwarenessPhase::AwaitAttack: return "await_attack";
    case AwarenessPhase::AwaitDefense: return "await_defense";
    case AwarenessPhase::Finished: return "finished";
  }
  return "?";
}

struct PendingAttack {
  std::string token;
  Point point;
  double elapsed = 0.0;
  friend bool operator==(const PendingAttack&, const PendingAttack&) = default;
};

class AwarenessState;
AwarenessState submit_attack(const AwarenessState&, const std::string&, Point, double);
std::pair<AwarenessState, RoundRecord> submit_defense(const AwarenessState&, const std::string&,
                                                      double);
std::pair<AwarenessState, RoundRecord> expire_timer(const AwarenessState&);
AwarenessState new_awareness_match(std::shared_ptr<const TokenCatalog>,
                                   std::shared_ptr<const MatchupMatrix>, AwarenessOptions);

class AwarenessState {
 public:
  const TokenCatalog& catalog() const { return *catalog_; }
  const MatchupMatrix& matrix() const { return *matrix_; }
  std::shared_ptr<const TokenCatalog> catalog_ptr() const { return catalog_; }
  std::shared_ptr<const MatchupMatrix> matrix_ptr() const { return matrix_; }
  const AwarenessOptions& options() const { return options_; }
  const BoardTopology& topology() const { return standard_topology(options_.diagonals); }

  AwarenessPhase phase() const { return phase_; }
  int rounds_total() const { return options_.rounds; }
  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  const std::optional<PendingAttack>& pending() const { return pending_; }

  const std::vector<std::string>& remaining(Role r) const {
    return r == Role::Attacker ? remaining_attack_ : remaining_defend_;
  }
  bool has_token(Role r, const std::string& id) const {
    const auto& list = remaining(r);
    return std::find(list.begin(), list.end(), id) != list.end();
  }

  PointMask occupied() const { return occupied_; }
  bool is_occupied(Point p) const { return (occupied_ & bit(p)) != 0; }

  /// Lowest-id free point, used when a caller does not pick one.
  std::optional<Point> first_free_point() const {
    for (int id = 0; id < kPointCount; ++id) {
      if (!is_occupied(Point::from_id(id))) return Point::from_id(id);
    }
    return std::nullopt;
  }

  int attacker_score() const { return score_[slot(Role::Attacker)]; }
  int defender_score() const { return score_[slot(Role::Defender)]; }

  /// Side whose move is awaited; empty once finished.
  std::optional<Role> awaiting() const {
    switch (phase_) {
      case AwarenessPhase::AwaitAttack: return Role::Attacker;
      case AwarenessPhase::AwaitDefense: return Role::Defender;
      case AwarenessPhase::Finished: return std::nullopt;
    }
    return std::nullopt;
  }

  friend bool operator==(const AwarenessState& a, const AwarenessState& b) {
    return a.catalog_ == b.catalog_ && a.matrix_ == b.matrix_ && a.options_ == b.options_ &&
           a.phase_ == b.phase_ && a.rounds_ == b.rounds_ && a.pending_ == b.pending_ &&
           a.remaining_attack_ == b.remaining_attack_ &&
           a.remaining_defend_ == b.remaining_defend_ && a.occupied_ == b.occupied_ &&
           a.score_ == b.score_;
  }

 private:
  friend AwarenessState submit_attack(const AwarenessState&, const std::string&, Point, double);
  friend std::pair<AwarenessState, RoundRecord> submit_defense(const AwarenessState&,
                                                               const std::string&, double);
  friend std::pair<AwarenessState, RoundRecord> expire_timer(const AwarenessState&);
  friend AwarenessState new_awareness_match(std::shared_ptr<const TokenCatalog>,
                                            std::shared_ptr<const MatchupMatrix>,
                                            AwarenessOptions);

  AwarenessState() = default;

  void consume(Role r, const std::string& id) {
    if (options_.allow_reuse) return;
    auto& list = r == Role::Attacker ? remaining_attack_ : remaining_defend_;
    list.erase(std::find(list.begin(), list.end(), id));
  }

  void close_round(RoundRecord record) {
    score_[slot(Role::Attacker)] += record.attacker_reward;
    score_[slot(Role::Defender)] += record.defender_reward;
    rounds_.push_back(std::move(record));
    pending_.reset();
    phase_ = static_cast<int>(rounds_.size()) >= options_.rounds ? AwarenessPhase::Finished
                                                                  : AwarenessPhase::AwaitAttack;
  }

  std::shared_ptr<const TokenCatalog> catalog_;
  std::shared_ptr<const MatchupMatrix> matrix_;
  AwarenessOptions options_;
  AwarenessPhase phase_ = AwarenessPhase::AwaitAttack;
  std::vector<RoundRecord> rounds_;
  std::optional<PendingAttack> pending_;
  std::vector<std::string> remaining_attack_;
  std::vector<std::string> remaining_defend_;
  PointMask occupied_ = 0;
  std::array<int, 2> score_{};
};

inline AwarenessState new_awareness_match(
    std::shared_ptr<const TokenCatalog> catalog = default_catalog(),
    std::shared_ptr<const MatchupMatrix> matrix = default_matrix(),
    AwarenessOptions options = {}) {
  if (!catalog || !matrix) throw GameError(ErrorCode::invalid_options, "catalog and matrix required");
  if (options.rounds < 0) {
    throw GameError(ErrorCode::invalid_options, "rounds must be >= 0");
  }
  if (options.rounds > kPointCount) {
    throw GameError(ErrorCode::invalid_options,
                    "rounds exceed board capacity of " + std::to_string(kPointCount));
  }
  if (!options.allow_reuse &&
      static_cast<std::size_t>(options.rounds) >
          std::min(catalog->attack().size(), catalog->defend().size())) {
    throw GameError(ErrorCode::invalid_options, "not enough single-use tokens for " +
                                                    std::to_string(options.rounds) + " rounds");
  }
  if (options.timer_seconds && !(*options.timer_seconds > 0.0)) {
    throw GameError(ErrorCode::invalid_options, "timer must be positive");
  }
  const MatrixReport report = validate_matrix(*matrix, *catalog);
  if (!report.ok()) {
    std::string what = "matrix incomplete for catalog";
    if (!report.missing.empty()) {
      what += ": missing pair (" + report.missing.front().first + ", " +
              report.missing.front().second + ")";
    }
    throw GameError(ErrorCode::invalid_matrix, what);
  }

  AwarenessState s;
  s.catalog_ = std::move(catalog);
  s.matrix_ = std::move(matrix);
  s.options_ = options;
  for (const Token& t : s.catalog_->attack()) s.remaining_attack_.push_back(t.id);
  for (const Token& t : s.catalog_->defend()) s.remaining_defend_.push_back(t.id);
  s.phase_ = options.rounds == 0 ? AwarenessPhase::Finished : AwarenessPhase::AwaitAttack;
  return s;
}

namespace detail {

inline void require_phase(const AwarenessState& s, AwarenessPhase want) {
  if (s.phase() == AwarenessPhase::Finished) {
    throw GameError(ErrorCode::game_over, "match is finished");
  }
  if (s.phase() != want) {
    throw GameError(ErrorCode::wrong_phase, "expected phase " + std::string(to_string(want)) +
                                                ", match is in " +
                                                std::string(to_string(s.phase())));
  }
}

inline void require_token(const AwarenessState& s, Role role, const std::string& id) {
  s.catalog().at(id, role);
  if (!s.has_token(role, id)) throw GameError(ErrorCode::token_exhausted, "token exhausted: " + id);
}

}  // namespace detail

inline AwarenessState submit_attack(const AwarenessState& state, const std::string& token,
                                    Point point, double elapsed = 0.0) {
  detail::require_phase(state, AwarenessPhase::AwaitAttack);
  detail::require_token(state, Role::Attacker, token);
  if (state.is_occupied(point)) {
    throw GameError(ErrorCode::occupied_point, "point occupied: " + point.name());
  }
  AwarenessState next = state;
  next.consume(Role::Attacker, token);
  next.occupied_ |= bit(point);
  next.pending_ = PendingAttack{token, point, elapsed};
  next.phase_ = AwarenessPhase::AwaitDefense;
  return next;
}

inline std::pair<AwarenessState, RoundRecord> submit_defense(const AwarenessState& state,
                                                             const std::string& token,
                                                             double elapsed = 0.0) {
  detail::require_phase(state, AwarenessPhase::AwaitDefense);
  detail::require_token(state, Role::Defender, token);
  const PendingAttack& attack = *state.pending();
  const Verdict verdict = judge_verdict(state.matrix(), attack.token, token);

  RoundRecord record;
  record.round = static_cast<int>(state.rounds().size()) + 1;
  record.attack_token = attack.token;
  record.defend_token = token;
  record.point = attack.point;
  record.attacker_reward = verdict.winner == Role::Attacker ? 1 : 0;
  record.defender_reward = 1 - record.attacker_reward;
  record.feedback = verdict.feedback;
  record.attacker_elapsed = attack.elapsed;
  record.defender_elapsed = elapsed;

  AwarenessState next = state;
  next.consume(Role::Defender, token);
  next.close_round(record);
  return {std::move(next), std::move(record)};
}

/// Forfeits the round of whoever is on the clock. A timed-out attacker uses
/// no token and no point; a timed-out defender loses to the committed attack.
inline std::pair<AwarenessState, RoundRecord> expire_timer(const AwarenessState& state) {
  if (!state.options().timer_seconds) {
    throw GameError(ErrorCode::timer_disabled, "match has no move timer");
  }
  if (state.phase() == AwarenessPhase::Finished) {
    throw GameError(ErrorCode::game_over, "match is finished");
  }
  const double limit = *state.options().timer_seconds;
  RoundRecord record;
  record.round = static_cast<int>(state.rounds().size()) + 1;
  record.feedback = std::string(kTimeoutFeedback);
  record.timed_out = true;
  if (state.phase() == AwarenessPhase::AwaitAttack) {
    record.defender_reward = 1;
    record.attacker_elapsed = limit;
  } else {
    const PendingAttack& attack = *state.pending();
    record.attack_token = attack.token;
    record.point = attack.point;
    record.attacker_reward = 1;
    record.attacker_elapsed = attack.elapsed;
    record.defender_elapsed = limit;
  }
  AwarenessState next = state;
  next.close_round(record);
  return {std::move(next), std::move(record)};
}

enum class AwarenessOutcome { AttackerWins, DefenderWins, Draw };

constexpr AwarenessOutcome outcome_from_scores(int attacker, int defender) {
  if (attacker > defender) return AwarenessOutcome::AttackerWins;
  if (defender > attacker) return AwarenessOutcome::DefenderWins;
  return AwarenessOutcome::Draw;
}

/// "Attacker", "Defender" or "Draw", as shown in the scoreboard's Winner column.
constexpr std::string_view winner_label(AwarenessOutcome o) {
  switch (o) {
    case AwarenessOutcome::AttackerWins: return "Attacker";
    case AwarenessOutcome::DefenderWins: return "Defender";
    case AwarenessOutcome::Draw: return "Draw";
  }
  return "?";
}

inline AwarenessOutcome outcome_from_label(std::string_view s) {
  if (s == "Attacker") return AwarenessOutcome::AttackerWins;
  if (s == "Defender") return AwarenessOutcome::DefenderWins;
  if (s == "Draw") return AwarenessOutcome::Draw;
  throw GameError(ErrorCode::malformed, "unknown winner: '" + std::string(s) + "'");
}

struct AwarenessResult {
  int attacker_score = 0;
  int defender_score = 0;
  AwarenessOutcome outcome = AwarenessOutcome::Draw;
  /// Labels of the tokens that won rounds, first occurrence order.
  std::vector<std::string> attacker_best_moves;
  std::vector<std::string> defender_best_moves;

  std::string summary() const {
    switch (outcome) {
      case AwarenessOutcome::AttackerWins:
        return "Attacker wins with " + std::to_string(attacker_score) + "%";
      case AwarenessOutcome::DefenderWins:
        return "Defender wins with " + std::to_string(defender_score) + "%";
      case AwarenessOutcome::Draw:
        return "Draw at " + std::to_string(attacker_score) + "%";
    }
    return {};
  }
};

inline AwarenessResult final_result(const AwarenessState& state) {
  if (state.phase() != AwarenessPhase::Finished) {
    throw GameError(ErrorCode::match_unfinished, "match is not finished");
  }
  AwarenessResult r;
  r.attacker_score = state.attacker_score();
  r.defender_score = state.defender_score();
  r.outcome = outcome_from_scores(r.attacker_score, r.defender_score);
  auto note = [](std::vector<std::string>& list, const std::string& label) {
    if (std::find(list.begin(), list.end(), label) == list.end()) list.push_back(label);
  };
  for (const RoundRecord& round : state.rounds()) {
    if (round.timed_out) continue;
    if (round.attacker_reward == 1) {
      note(r.attacker_best_moves, state.catalog().at(round.attack_token, Role::Attacker).label);
    } else {
      note(r.defender_best_moves, state.catalog().at(round.defend_token, Role::Defender).label);
    }
  }
  return r;
}

}  // namespace cybermoraba
