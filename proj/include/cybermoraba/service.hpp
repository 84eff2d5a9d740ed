#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "cybermoraba/awareness.hpp"
#include "cybermoraba/classic.hpp"
#include "cybermoraba/codec.hpp"
#include "cybermoraba/error.hpp"
#include "cybermoraba/persistence.hpp"
#include "cybermoraba/policy.hpp"

// Match sessions independent of any transport. Every accepted command,
// join, bot move and timer expiry bumps the match revision by one and
// appends events stamped with that revision. The event log alone is enough
// to rebuild the engine state (see replay_event_log).

namespace cybermoraba {

inline constexpr int kProtocolVersion = 1;

enum class MatchMode { Classic, Awareness };

constexpr std::string_view to_string(MatchMode m) {
  return m == MatchMode::Classic ? "classic" : "awareness";
}

inline MatchMode mode_from_string(std::string_view s) {
  if (s == "classic") return MatchMode::Classic;
  if (s == "awareness") return MatchMode::Awareness;
  throw GameError(ErrorCode::invalid_options, "unknown mode: '" + std::string(s) + "'");
}

constexpr std::string_view to_string(ClassicOutcome::Reason r) {
  switch (r) {
    case ClassicOutcome::Reason::TooFewPieces: return "too_few_pieces";
    case ClassicOutcome::Reason::Immobilized: return "immobilized";
    case ClassicOutcome::Reason::Repetition: return "repetition";
    case ClassicOutcome::Reason::NoCaptureLimit: return "no_capture_limit";
  }
  return "?";
}

/// Seconds on a monotonic scale.
using ServiceClock = std::function<double()>;

inline ServiceClock steady_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
  };
}

struct BotSpec {
  std::string policy;
  std::uint64_t seed = 0;
  int depth = 3;
};

struct CreateMatchRequest {
  MatchMode mode = MatchMode::Awareness;
  AwarenessOptions options;
  ClassicRules rules;
  PlayerProfile profile;
  Role role = Role::Attacker;
  /// Seats a bot in the other chair; otherwise the chair stays open for join.
  std::optional<BotSpec> opponent;
};

struct MatchEvent {
  std::uint64_t revision = 0;
  std::string type;
  Json payload;
};

inline Json event_to_json(const MatchEvent& e) {
  return Json{{"revision", e.revision}, {"type", e.type}, {"payload", e.payload}};
}

inline MatchEvent event_from_json(const Json& j) {
  return MatchEvent{codec::get<std::uint64_t>(j, "revision"), codec::get<std::string>(j, "type"),
                    codec::get<Json>(j, "payload")};
}

struct SeatGrant {
  std::string match_id;
  std::string session_token;
  Role role = Role::Attacker;
  Json state;
};

struct CommandResult {
  std::uint64_t revision = 0;
  std::vector<MatchEvent> events;
  Json state;
};

using EngineState = std::variant<ClassicState, AwarenessState>;

namespace detail {

inline Json token_list(const TokenCatalog& catalog, const std::vector<std::string>& ids, Role role) {
  Json out = Json::array();
  for (const std::string& id : ids) {
    const Token& t = catalog.at(id, role);
    out.push_back(Json{{"id", t.id}, {"label", t.label}, {"definition", t.definition}});
  }
  return out;
}

inline Json rules_to_json(const ClassicRules& r, bool diagonals) {
  return Json{{"piecesPerSide", r.pieces_per_side},
              {"flying", r.flying},
              {"noCaptureDrawPlies", r.no_capture_draw_plies},
              {"repetitionLimit", r.repetition_limit},
              {"diagonals", diagonals}};
}

inline void validate_rules(const ClassicRules& r) {
  if (r.pieces_per_side < 3 || r.pieces_per_side > 12 || r.no_capture_draw_plies < 1 ||
      r.repetition_limit < 2) {
    throw GameError(ErrorCode::invalid_options, "classic rules out of range");
  }
}

inline ClassicRules rules_from_json(const Json& j) {
  ClassicRules r;
  if (j.is_null()) return r;
  r.pieces_per_side = codec::get_or<int>(j, "piecesPerSide", r.pieces_per_side);
  r.flying = codec::get_or<bool>(j, "flying", r.flying);
  r.no_capture_draw_plies = codec::get_or<int>(j, "noCaptureDrawPlies", r.no_capture_draw_plies);
  r.repetition_limit = codec::get_or<int>(j, "repetitionLimit", r.repetition_limit);
  validate_rules(r);
  return r;
}

inline Json result_to_json(const AwarenessResult& r) {
  return Json{{"attackerScore", r.attacker_score},
              {"defenderScore", r.defender_score},
              {"winner", winner_label(r.outcome)},
              {"summary", r.summary()},
              {"attackerBestMoves", r.attacker_best_moves},
              {"defenderBestMoves", r.defender_best_moves}};
}

inline std::string random_hex(std::size_t bytes) {
  static std::mutex mutex;
  static std::random_device device;
  static const char* digits = "0123456789abcdef";
  std::lock_guard lock(mutex);
  std::string out;
  for (std::size_t i = 0; i < bytes; i += 4) {
    std::uint32_t word = device();
    for (int k = 0; k < 4 && i + k < bytes; ++k, word >>= 8) {
      out += digits[(word >> 4) & 0xf];
      out += digits[word & 0xf];
    }
  }
  return out;
}

}  // namespace detail

/// Rebuilds engine state from a match event log, checking every logged
/// round against the engine's own verdict.
inline EngineState replay_event_log(const std::vector<MatchEvent>& log,
                                    std::shared_ptr<const TokenCatalog> catalog = default_catalog(),
                                    std::shared_ptr<const MatchupMatrix> matrix = default_matrix()) {
  if (log.empty() || log.front().type != "created") {
    throw GameError(ErrorCode::malformed, "event log must start with 'created'");
  }
  const Json& created = log.front().payload;
  std::optional<EngineState> state;
  if (mode_from_string(codec::get<std::string>(created, "mode")) == MatchMode::Awareness) {
    state = new_awareness_match(std::move(catalog), std::move(matrix),
                                codec::options_from_json(codec::get<Json>(created, "options")));
  } else {
    const Json rules = codec::get<Json>(created, "rules");
    state = new_classic_game(standard_topology(codec::get<bool>(rules, "diagonals")), Role::Attacker,
                             detail::rules_from_json(rules));
  }
  std::uint64_t last = log.front().revision;
  for (std::size_t i = 1; i < log.size(); ++i) {
    const MatchEvent& e = log[i];
    if (e.revision < last) throw GameError(ErrorCode::malformed, "event revisions go backwards");
    last = e.revision;
    if (e.type == "move") {
      auto& s = std::get<ClassicState>(*state);
      s = apply_move(s, codec::move_from_json(codec::get<Json>(e.payload, "move")));
    } else if (e.type == "attack") {
      auto& s = std::get<AwarenessState>(*state);
      s = submit_attack(s, codec::get<std::string>(e.payload, "token"),
                        Point::from_name(codec::get<std::string>(e.payload, "point")),
                        codec::get<double>(e.payload, "elapsed"));
    } else if (e.type == "round" || e.type == "timeout") {
      auto& s = std::get<AwarenessState>(*state);
      const RoundRecord logged = codec::round_from_json(codec::get<Json>(e.payload, "record"));
      auto [next, record] = e.type == "timeout"
                                ? expire_timer(s)
                                : submit_defense(s, logged.defend_token, logged.defender_elapsed);
      if (!(record == logged)) {
        throw GameError(ErrorCode::malformed,
                        "logged round " + std::to_string(logged.round) + " differs from the engine");
      }
      s = std::move(next);
    }
  }
  return *state;
}

/// Turn-based match host. Thread-safe; commands on one match are applied
/// one at a time in a single order.
class MatchService {
 public:
  explicit MatchService(std::shared_ptr<ScoreStore> store = std::make_shared<ScoreStore>(),
                        ServiceClock clock = steady_seconds(),
                        std::shared_ptr<const TokenCatalog> catalog = default_catalog(),
                        std::shared_ptr<const MatchupMatrix> matrix = default_matrix())
      : store_(std::move(store)),
        clock_(std::move(clock)),
        catalog_(std::move(catalog)),
        matrix_(std::move(matrix)) {
    const MatrixReport report = validate_matrix(*matrix_, *catalog_);
    if (!report.ok()) throw GameError(ErrorCode::invalid_matrix, report.text());
  }

  ~MatchService() { shutdown(); }

  SeatGrant create_match(const CreateMatchRequest& req) {
    req.profile.validate();
    auto session = std::make_shared<Session>();
    session->mode = req.mode;
    Json created{{"mode", to_string(req.mode)}, {"protocol", kProtocolVersion}};
    if (req.mode == MatchMode::Awareness) {
      if (req.options.rounds < 1) throw GameError(ErrorCode::invalid_options, "a hosted match needs at least one round");
      session->state = new_awareness_match(catalog_, matrix_, req.options);
      created["options"] = codec::options_to_json(req.options);
    } else {
      detail::validate_rules(req.rules);
      session->state =
          new_classic_game(standard_topology(req.options.diagonals), Role::Attacker, req.rules);
      created["rules"] = detail::rules_to_json(req.rules, req.options.diagonals);
    }
    if (req.opponent) {
      Policy bot = Policy::parse(req.opponent->policy, req.opponent->seed, req.opponent->depth);
      const Role seat = opponent(req.role);
      const bool ok = req.mode == MatchMode::Classic ? bot.supports_classic() : bot.supports_awareness(seat);
      if (!ok) {
        throw GameError(ErrorCode::invalid_options,
                        bot.name() + " cannot play " + std::string(to_string(seat)) + " in " +
                            std::string(to_string(req.mode)) + " mode");
      }
      session->seats[slot(seat)].kind = Seat::Kind::Bot;
      session->seats[slot(seat)].bot.emplace(std::move(bot));
    }
    Seat& mine = session->seats[slot(req.role)];
    mine.kind = Seat::Kind::Human;
    mine.token = detail::random_hex(16);
    mine.profile = req.profile;
    session->creator = req.role;

    std::lock_guard lock(session->mutex);
    {
      std::unique_lock map_lock(sessions_mutex_);
      do {
        session->id = detail::random_hex(8);
      } while (sessions_.count(session->id));
      sessions_[session->id] = session;
    }
    const double now = clock_();
    session->created_at = now;
    emit(*session, {{"created", created}});
    emit_join(*session, req.role);
    if (req.opponent) emit_join(*session, opponent(req.role));
    if (session->started()) start(*session, now);
    return grant(*session, req.role);
  }

  SeatGrant join_match(const std::string& match_id, const PlayerProfile& profile,
                       std::optional<Role> role = std::nullopt) {
    profile.validate();
    auto session = find(match_id);
    std::lock_guard lock(session->mutex);
    std::optional<Role> open;
    for (Role r : {Role::Attacker, Role::Defender}) {
      if (session->seats[slot(r)].kind == Seat::Kind::Open && (!role || *role == r)) open = r;
    }
    if (!open) throw GameError(ErrorCode::seat_taken, "no open seat in match " + match_id);
    Seat& seat = session->seats[slot(*open)];
    seat.kind = Seat::Kind::Human;
    seat.token = detail::random_hex(16);
    seat.profile = profile;
    emit_join(*session, *open);
    start(*session, clock_());
    return grant(*session, *open);
  }

  /// Applies one command from a seated player, then any bot replies.
  /// Command forms: {"type":"attack","token":"A1","point":"a7"},
  /// {"type":"defend","token":"D5"}, {"type":"move","move":"S:a7-d7"};
  /// each may carry "expectedRevision".
  CommandResult submit_command(const std::string& match_id, const std::string& session_token,
                               const Json& command) {
    auto session = find(match_id);
    std::lock_guard lock(session->mutex);
    const Role role = seat_of(*session, session_token);
    if (session->finished) throw GameError(ErrorCode::game_over, "match is finished");
    if (!session->started()) throw GameError(ErrorCode::awaiting_opponent, "waiting for an opponent");
    if (!command.is_object()) throw GameError(ErrorCode::malformed, "command must be an object");
    if (command.contains("expectedRevision") && !command["expectedRevision"].is_null() &&
        codec::get<std::uint64_t>(command, "expectedRevision") != session->revision) {
      throw GameError(ErrorCode::stale_revision,
                      "match is at revision " + std::to_string(session->revision));
    }
    if (to_move(*session) != role) {
      throw GameError(ErrorCode::out_of_turn, "it is the " + std::string(to_string(opponent(role))) + "'s turn");
    }
    const std::size_t first_event = session->events.size();
    apply_command(*session, command, clock_());
    run_bots(*session);
    return {session->revision,
            filter_events(*session, role, first_event),
            view(*session, role)};
  }

  /// Client view; blind matches hide a committed attack from everyone but
  /// the attacker. An empty or unknown token gives the spectator view.
  Json get_state(const std::string& match_id, const std::string& session_token = {}) const {
    auto session = find(match_id);
    std::lock_guard lock(session->mutex);
    return view(*session, viewer(*session, session_token));
  }

  /// Events after `after_revision` as seen by the token holder; waits up to
  /// `wait` for new ones. Empty on timeout or shutdown.
  std::vector<MatchEvent> events_since(const std::string& match_id, const std::string& session_token,
                                       std::uint64_t after_revision,
                                       std::chrono::milliseconds wait = std::chrono::milliseconds(0)) {
    auto session = find(match_id);
    std::unique_lock lock(session->mutex);
    const std::optional<Role> who = viewer(*session, session_token);
    session->changed.wait_for(lock, wait, [&] {
      return stopping_ || session->revision > after_revision;
    });
    std::size_t from = 0;
    while (from < session->events.size() && session->events[from].revision <= after_revision) ++from;
    return filter_events(*session, who, from);
  }

  /// Full unfiltered log, for audit and replay.
  std::vector<MatchEvent> event_log(const std::string& match_id) const {
    auto session = find(match_id);
    std::lock_guard lock(session->mutex);
    return session->events;
  }

  EngineState engine_state(const std::string& match_id) const {
    auto session = find(match_id);
    std::lock_guard lock(session->mutex);
    return session->state;
  }

  /// Forfeits every awareness turn whose clock has run out. Returns the
  /// number of forfeits. Calling again at the same instant does nothing.
  std::size_t tick() {
    std::vector<std::shared_ptr<Session>> all;
    {
      std::shared_lock lock(sessions_mutex_);
      for (const auto& [id, s] : sessions_) all.push_back(s);
    }
    std::size_t expired = 0;
    for (const auto& session : all) {
      std::lock_guard lock(session->mutex);
      const double now = clock_();
      if (session->finished || !session->started() || session->mode != MatchMode::Awareness) continue;
      const auto& s = std::get<AwarenessState>(session->state);
      if (!s.options().timer_seconds) continue;
      if (now - session->turn_started_at < *s.options().timer_seconds) continue;
      auto [next, record] = expire_timer(s);
      session->state = std::move(next);
      std::vector<std::pair<std::string, Json>> out{{"timeout", round_payload(*session, record)}};
      finish_awareness_if_done(*session, now, out);
      emit(*session, std::move(out));
      session->turn_started_at = now;
      ++expired;
      run_bots(*session);
    }
    return expired;
  }

  /// Seconds left on the current move clock, if the match has one.
  std::optional<double> time_left(const std::string& match_id) const {
    auto session = find(match_id);
    std::lock_guard lock(session->mutex);
    return remaining_time(*session);
  }

  std::vector<std::string> match_ids() const {
    std::shared_lock lock(sessions_mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_) out.push_back(id);
    return out;
  }

  std::vector<ScoreboardEntry> list_scoreboard() const { return store_->list_scoreboard(); }
  void delete_entry(std::uint64_t entry_id) { store_->delete_entry(entry_id); }
  ScoreStore& store() { return *store_; }

  Json matrix_json() const {
    Json entries = Json::array();
    for (const Token& a : catalog_->attack()) {
      for (const Token& d : catalog_->defend()) {
        const Verdict v = judge_verdict(*matrix_, a.id, d.id);
        entries.push_back(Json{{"attack", a.id},
                               {"defend", d.id},
                               {"winner", to_string(v.winner)},
                               {"feedback", v.feedback}});
      }
    }
    std::vector<std::string> attack_ids, defend_ids;
    for (const Token& t : catalog_->attack()) attack_ids.push_back(t.id);
    for (const Token& t : catalog_->defend()) defend_ids.push_back(t.id);
    return Json{{"protocol", kProtocolVersion},
                {"attack", detail::token_list(*catalog_, attack_ids, Role::Attacker)},
                {"defend", detail::token_list(*catalog_, defend_ids, Role::Defender)},
                {"entries", std::move(entries)}};
  }

  /// Wakes all waiting event readers; they return empty from now on.
  void shutdown() {
    std::vector<std::shared_ptr<Session>> all;
    {
      std::unique_lock lock(sessions_mutex_);
      stopping_ = true;
      for (const auto& [id, s] : sessions_) all.push_back(s);
    }
    for (const auto& s : all) {
      std::lock_guard lock(s->mutex);
      s->changed.notify_all();
    }
  }

 private:
  struct Seat {
    enum class Kind { Open, Human, Bot };
    Kind kind = Kind::Open;
    std::string token;
    PlayerProfile profile;
    std::optional<Policy> bot;
  };

  struct Session {
    std::string id;
    MatchMode mode = MatchMode::Awareness;
    EngineState state{new_classic_game(standard_topology(false))};
    std::array<Seat, 2> seats;
    Role creator = Role::Attacker;
    std::uint64_t revision = 0;
    std::vector<MatchEvent> events;
    double created_at = 0.0;
    double started_at = 0.0;
    double turn_started_at = 0.0;
    bool finished = false;
    mutable std::mutex mutex;
    std::condition_variable changed;

    bool started() const {
      return seats[0].kind != Seat::Kind::Open && seats[1].kind != Seat::Kind::Open;
    }
  };

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw GameError(ErrorCode::not_found, "no match '" + id + "'");
    return it->second;
  }

  static Role seat_of(const Session& s, const std::string& token) {
    for (Role r : {Role::Attacker, Role::Defender}) {
      const Seat& seat = s.seats[slot(r)];
      if (seat.kind == Seat::Kind::Human && !token.empty() && seat.token == token) return r;
    }
    throw GameError(ErrorCode::unauthorized, "session token is not seated in this match");
  }

  static std::optional<Role> viewer(const Session& s, const std::string& token) {
    if (token.empty()) return std::nullopt;
    for (Role r : {Role::Attacker, Role::Defender}) {
      const Seat& seat = s.seats[slot(r)];
      if (seat.kind == Seat::Kind::Human && seat.token == token) return r;
    }
    return std::nullopt;
  }

  static std::optional<Role> to_move(const Session& s) {
    if (s.finished) return std::nullopt;
    if (s.mode == MatchMode::Awareness) return std::get<AwarenessState>(s.state).awaiting();
    return std::get<ClassicState>(s.state).to_move();
  }

  /// Appends events at the next revision.
  void emit(Session& s, std::vector<std::pair<std::string, Json>> events, bool bump = true) {
    if (bump) ++s.revision;
    for (auto& [type, payload] : events) s.events.push_back({s.revision, type, std::move(payload)});
    s.changed.notify_all();
  }

  void emit_join(Session& s, Role r) {
    const Seat& seat = s.seats[slot(r)];
    Json p{{"role", to_string(r)}, {"kind", seat.kind == Seat::Kind::Bot ? "bot" : "human"}};
    if (seat.kind == Seat::Kind::Bot) p["policy"] = seat.bot->name();
    else p["nickname"] = seat.profile.nickname;
    emit(s, {{"joined", std::move(p)}});
  }

  void start(Session& s, double now) {
    s.started_at = now;
    s.turn_started_at = now;
    finish_classic_if_done(s);
    run_bots(s);
  }

  std::optional<double> remaining_time(const Session& s) const {
    if (s.mode != MatchMode::Awareness || s.finished || !s.started()) return std::nullopt;
    const auto& timer = std::get<AwarenessState>(s.state).options().timer_seconds;
    if (!timer) return std::nullopt;
    return std::max(0.0, *timer - (clock_() - s.turn_started_at));
  }

  Json round_payload(const Session& s, const RoundRecord& r) const {
    const auto& a = std::get<AwarenessState>(s.state);
    return Json{{"record", codec::round_to_json(r)},
                {"scores", Json{{"attacker", a.attacker_score()}, {"defender", a.defender_score()}}}};
  }

  void apply_command(Session& s, const Json& cmd, double now) {
    const std::string type = codec::get<std::string>(cmd, "type");
    const double elapsed = std::max(0.0, now - s.turn_started_at);
    std::vector<std::pair<std::string, Json>> out;
    if (s.mode == MatchMode::Awareness) {
      auto& a = std::get<AwarenessState>(s.state);
      if (type == "attack") {
        const std::string token = codec::get<std::string>(cmd, "token");
        const std::string point_name = codec::get_or<std::string>(cmd, "point", "");
        std::optional<Point> point =
            point_name.empty() ? a.first_free_point() : std::optional(Point::from_name(point_name));
        if (!point) throw GameError(ErrorCode::occupied_point, "board is full");
        AwarenessState next = submit_attack(a, token, *point, elapsed);
        a = std::move(next);
        out.push_back({"attack", Json{{"token", token}, {"point", point->name()}, {"elapsed", elapsed}}});
      } else if (type == "defend") {
        auto [next, record] = submit_defense(a, codec::get<std::string>(cmd, "token"), elapsed);
        a = std::move(next);
        out.push_back({"round", round_payload(s, record)});
        finish_awareness_if_done(s, now, out);
      } else {
        throw GameError(ErrorCode::malformed, "unknown awareness command '" + type + "'");
      }
    } else {
      if (type != "move") throw GameError(ErrorCode::malformed, "unknown classic command '" + type + "'");
      auto& c = std::get<ClassicState>(s.state);
      const Move m = codec::move_from_json(codec::get<Json>(cmd, "move"));
      const Role mover = c.to_move();
      c = apply_move(c, m);
      out.push_back({"move", Json{{"move", m.notation()}, {"by", to_string(mover)}}});
    }
    s.turn_started_at = now;
    emit(s, std::move(out));
    if (s.mode == MatchMode::Classic) finish_classic_if_done(s);
  }

  void finish_awareness_if_done(Session& s, double now,
                                std::vector<std::pair<std::string, Json>>& out) {
    const auto& a = std::get<AwarenessState>(s.state);
    if (a.phase() != AwarenessPhase::Finished) return;
    s.finished = true;
    Json result = detail::result_to_json(final_result(a));
    result["entryId"] = nullptr;
    const Seat& human = s.seats[slot(s.creator)];
    try {
      const ScoreboardEntry e = store_->record_result(human.profile, a, now - s.started_at, s.id);
      result["entryId"] = e.entry_id;
    } catch (const GameError& e) {
      result["storageError"] = e.what();
    }
    out.push_back({"finished", std::move(result)});
  }

  void finish_classic_if_done(Session& s) {
    if (s.mode != MatchMode::Classic || s.finished) return;
    const auto outcome = terminal(std::get<ClassicState>(s.state));
    if (!outcome) return;
    s.finished = true;
    emit(s,
         {{"finished", Json{{"winner", outcome->winner ? Json(to_string(*outcome->winner)) : Json()},
                            {"reason", to_string(outcome->reason)}}}},
         false);
  }

  void run_bots(Session& s) {
    while (!s.finished && s.started()) {
      const auto mover = to_move(s);
      if (!mover) return;
      Seat& seat = s.seats[slot(*mover)];
      if (seat.kind != Seat::Kind::Bot) return;
      Json cmd;
      if (s.mode == MatchMode::Classic) {
        cmd = {{"type", "move"}, {"move", seat.bot->choose_move(std::get<ClassicState>(s.state)).notation()}};
      } else {
        const auto& a = std::get<AwarenessState>(s.state);
        if (*mover == Role::Attacker) {
          const AttackChoice c = seat.bot->choose_attack(a);
          cmd = {{"type", "attack"}, {"token", c.token}, {"point", c.point.name()}};
        } else {
          cmd = {{"type", "defend"}, {"token", seat.bot->choose_defense(a)}};
        }
      }
      apply_command(s, cmd, clock_());
    }
  }

  static bool hides_attack(const Session& s, std::optional<Role> who) {
    if (s.mode != MatchMode::Awareness || who == Role::Attacker) return false;
    return std::get<AwarenessState>(s.state).options().blind;
  }

  std::vector<MatchEvent> filter_events(const Session& s, std::optional<Role> who,
                                        std::size_t from) const {
    std::vector<MatchEvent> out(s.events.begin() + static_cast<std::ptrdiff_t>(from), s.events.end());
    if (hides_attack(s, who)) {
      for (MatchEvent& e : out) {
        if (e.type == "attack") e.payload["token"] = nullptr;
      }
    }
    return out;
  }

  static Json seat_json(const Seat& seat) {
    switch (seat.kind) {
      case Seat::Kind::Open: return Json{{"kind", "open"}};
      case Seat::Kind::Human: return Json{{"kind", "human"}, {"nickname", seat.profile.nickname}};
      case Seat::Kind::Bot: return Json{{"kind", "bot"}, {"policy", seat.bot->name()}};
    }
    return nullptr;
  }

  SeatGrant grant(const Session& s, Role r) const {
    return {s.id, s.seats[slot(r)].token, r, view(s, r)};
  }

  Json view(const Session& s, std::optional<Role> who) const {
    Json j{{"protocol", kProtocolVersion},
           {"matchId", s.id},
           {"mode", to_string(s.mode)},
           {"revision", s.revision},
           {"status", s.finished ? "finished" : (s.started() ? "active" : "waiting")},
           {"you", who ? Json(to_string(*who)) : Json()},
           {"seats", Json{{"attacker", seat_json(s.seats[0])}, {"defender", seat_json(s.seats[1])}}}};
    const auto mover = to_move(s);
    j["toMove"] = mover ? Json(to_string(*mover)) : Json();
    if (s.mode == MatchMode::Awareness) {
      awareness_view(s, who, j);
    } else {
      classic_view(s, j);
    }
    return j;
  }

  void awareness_view(const Session& s, std::optional<Role> who, Json& j) const {
    const auto& a = std::get<AwarenessState>(s.state);
    const bool hide = hides_attack(s, who);
    j["phase"] = to_string(a.phase());
    j["options"] = codec::options_to_json(a.options());
    j["roundsTotal"] = a.rounds_total();
    j["scores"] = Json{{"attacker", a.attacker_score()}, {"defender", a.defender_score()}};
    Json board = Json::array();
    for (const RoundRecord& r : a.rounds()) {
      if (!r.point) continue;
      board.push_back(Json{{"point", r.point->name()},
                           {"attackToken", r.attack_token},
                           {"defendToken", r.defend_token.empty() ? Json() : Json(r.defend_token)},
                           {"round", r.round},
                           {"winner", to_string(r.winner())}});
    }
    j["board"] = std::move(board);
    std::vector<std::string> attack_left = a.remaining(Role::Attacker);
    if (a.pending()) {
      j["pending"] = Json{{"point", a.pending()->point.name()},
                          {"token", hide ? Json() : Json(a.pending()->token)}};
      if (hide && !a.options().allow_reuse) {
        // Put the hidden token back so the list does not give it away.
        attack_left.push_back(a.pending()->token);
        std::sort(attack_left.begin(), attack_left.end(), [&](const auto& x, const auto& y) {
          return a.catalog().order(x) < a.catalog().order(y);
        });
      }
    } else {
      j["pending"] = nullptr;
    }
    j["remaining"] = Json{{"attacker", detail::token_list(a.catalog(), attack_left, Role::Attacker)},
                          {"defender", detail::token_list(a.catalog(), a.remaining(Role::Defender),
                                                          Role::Defender)}};
    Json rounds = Json::array();
    for (const RoundRecord& r : a.rounds()) rounds.push_back(codec::round_to_json(r));
    j["rounds"] = std::move(rounds);
    const auto left = remaining_time(s);
    j["timer"] = a.options().timer_seconds
                     ? Json{{"seconds", *a.options().timer_seconds},
                            {"remaining", left ? Json(*left) : Json()}}
                     : Json();
    j["result"] = nullptr;
    if (a.phase() == AwarenessPhase::Finished) {
      for (auto it = s.events.rbegin(); it != s.events.rend(); ++it) {
        if (it->type == "finished") {
          j["result"] = it->payload;
          break;
        }
      }
    }
  }

  static void classic_view(const Session& s, Json& j) {
    const auto& c = std::get<ClassicState>(s.state);
    j["phase"] = to_string(c.phase());
    j["rules"] = detail::rules_to_json(c.rules(), c.topology().diagonals());
    j["pendingCapture"] = c.pending_capture();
    Json board = Json::array();
    for (int id = 0; id < kPointCount; ++id) {
      const Point p = Point::from_id(id);
      const auto who = c.occupant(p);
      board.push_back(Json{{"point", p.name()}, {"occupant", who ? Json(to_string(*who)) : Json()}});
    }
    j["board"] = std::move(board);
    j["hands"] = Json{{"attacker", c.hand(Role::Attacker)}, {"defender", c.hand(Role::Defender)}};
    j["onBoard"] = Json{{"attacker", c.on_board(Role::Attacker)}, {"defender", c.on_board(Role::Defender)}};
    Json history = Json::array();
    for (const Move& m : c.history()) history.push_back(m.notation());
    j["history"] = std::move(history);
    Json legal = Json::array();
    const auto outcome = terminal(c);
    if (!outcome) {
      for (const Move& m : legal_moves(c)) legal.push_back(m.notation());
    }
    j["legalMoves"] = std::move(legal);
    j["outcome"] = outcome ? Json{{"winner", outcome->winner ? Json(to_string(*outcome->winner)) : Json()},
                                  {"reason", to_string(outcome->reason)}}
                           : Json();
  }

  std::shared_ptr<ScoreStore> store_;
  ServiceClock clock_;
  std::shared_ptr<const TokenCatalog> catalog_;
  std::shared_ptr<const MatchupMatrix> matrix_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<bool> stopping_{false};
};

}  // namespace cybermoraba
