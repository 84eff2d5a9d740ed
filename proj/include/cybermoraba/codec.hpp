#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "cybermoraba/awareness.hpp"
#include "cybermoraba/classic.hpp"
#include "cybermoraba/error.hpp"

// JSON forms of engine values, shared by the store and the service.

namespace cybermoraba {

using Json = nlohmann::json;

namespace codec {

/// Reads a required member, mapping type or presence errors to malformed.
template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw GameError(ErrorCode::malformed, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw GameError(ErrorCode::malformed, std::string("bad field '") + key + "'");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key);
}

inline Json options_to_json(const AwarenessOptions& o) {
  Json j{{"rounds", o.rounds},
         {"allowReuse", o.allow_reuse},
         {"blind", o.blind},
         {"diagonals", o.diagonals},
         {"timerSeconds", nullptr}};
  if (o.timer_seconds) j["timerSeconds"] = *o.timer_seconds;
  return j;
}

inline AwarenessOptions options_from_json(const Json& j) {
  AwarenessOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw GameError(ErrorCode::malformed, "options must be an object");
  o.rounds = get_or<int>(j, "rounds", o.rounds);
  o.allow_reuse = get_or<bool>(j, "allowReuse", o.allow_reuse);
  o.blind = get_or<bool>(j, "blind", o.blind);
  o.diagonals = get_or<bool>(j, "diagonals", o.diagonals);
  if (j.contains("timerSeconds") && !j.at("timerSeconds").is_null()) {
    o.timer_seconds = get<double>(j, "timerSeconds");
  }
  return o;
}

inline Json round_to_json(const RoundRecord& r) {
  return Json{{"round", r.round},
              {"attackToken", r.attack_token.empty() ? Json() : Json(r.attack_token)},
              {"defendToken", r.defend_token.empty() ? Json() : Json(r.defend_token)},
              {"point", r.point ? Json(r.point->name()) : Json()},
              {"attackerReward", r.attacker_reward},
              {"defenderReward", r.defender_reward},
              {"winner", to_string(r.winner())},
              {"feedback", r.feedback},
              {"attackerElapsed", r.attacker_elapsed},
              {"defenderElapsed", r.defender_elapsed},
              {"timedOut", r.timed_out}};
}

inline RoundRecord round_from_json(const Json& j) {
  RoundRecord r;
  r.round = get<int>(j, "round");
  r.attack_token = get_or<std::string>(j, "attackToken", "");
  r.defend_token = get_or<std::string>(j, "defendToken", "");
  const std::string point = get_or<std::string>(j, "point", "");
  if (!point.empty()) r.point = Point::from_name(point);
  r.attacker_reward = get<int>(j, "attackerReward");
  r.defender_reward = get<int>(j, "defenderReward");
  r.feedback = get<std::string>(j, "feedback");
  r.attacker_elapsed = get<double>(j, "attackerElapsed");
  r.defender_elapsed = get<double>(j, "defenderElapsed");
  r.timed_out = get<bool>(j, "timedOut");
  return r;
}

inline Json move_to_json(const Move& m) { return Json(m.notation()); }

inline Move move_from_json(const Json& j) {
  if (!j.is_string()) throw GameError(ErrorCode::malformed, "move must be a string like \"P:a7\"");
  return Move::parse(j.get<std::string>());
}

}  // namespace codec
}  // namespace cybermoraba
