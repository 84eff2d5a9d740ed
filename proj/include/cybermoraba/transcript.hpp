#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cybermoraba/awareness.hpp"
#include "cybermoraba/error.hpp"

namespace cybermoraba {

// Match transcript, one round per line:
//
//   #cybermoraba-transcript 1
//   reuse=1                     options, before the first round
//   1 A1 D5 a7 0.5 1.25          round attack defense [point [att_sec def_sec]]
//
// "-" stands for a missing token (timeout) or an auto-assigned point.
// Recognised options: rounds, reuse, blind, timer, diagonals. Without a
// rounds option the match length is the number of round lines.

inline constexpr std::string_view kTranscriptHeader = "#cybermoraba-transcript 1";

struct TranscriptRound {
  int line = 0;
  std::string attack;  // empty = attacker timed out
  std::string defend;  // empty = defender timed out
  std::optional<Point> point;
  double attacker_elapsed = 0.0;
  double defender_elapsed = 0.0;
};

struct Transcript {
  AwarenessOptions options;
  bool rounds_given = false;
  std::vector<TranscriptRound> rounds;
};

namespace detail {

inline double parse_seconds(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && v >= 0.0) return v;
  } catch (const std::exception&) {
  }
  throw GameError(ErrorCode::malformed, "line " + std::to_string(line) + ": bad seconds '" + s + "'");
}

inline int parse_int(const std::string& s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw GameError(ErrorCode::malformed, "line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

inline bool parse_flag(const std::string& s, int line) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw GameError(ErrorCode::malformed, "line " + std::to_string(line) + ": bad flag '" + s + "'");
}

/// Shortest text that parses back to the same double.
inline std::string format_seconds(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline Transcript parse_transcript(std::istream& in) {
  Transcript t;
  std::string text;
  int line = 0;
  bool header = false;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!header) {
      if (text != kTranscriptHeader) {
        throw GameError(ErrorCode::malformed,
                        "line 1: expected header '" + std::string(kTranscriptHeader) + "'");
      }
      header = true;
      continue;
    }
    if (text.empty() || text[0] == '#') continue;
    if (const auto eq = text.find('='); eq != std::string::npos) {
      if (!t.rounds.empty()) {
        throw GameError(ErrorCode::malformed,
                        "line " + std::to_string(line) + ": option after first round");
      }
      const std::string key = text.substr(0, eq);
      const std::string value = text.substr(eq + 1);
      if (key == "rounds") {
        t.options.rounds = detail::parse_int(value, line);
        t.rounds_given = true;
      } else if (key == "reuse") {
        t.options.allow_reuse = detail::parse_flag(value, line);
      } else if (key == "blind") {
        t.options.blind = detail::parse_flag(value, line);
      } else if (key == "diagonals") {
        t.options.diagonals = detail::parse_flag(value, line);
      } else if (key == "timer") {
        t.options.timer_seconds = detail::parse_seconds(value, line);
      } else {
        throw GameError(ErrorCode::malformed,
                        "line " + std::to_string(line) + ": unknown option '" + key + "'");
      }
      continue;
    }
    std::istringstream fields(text);
    std::vector<std::string> f;
    for (std::string w; fields >> w;) f.push_back(w);
    if (f.size() != 3 && f.size() != 4 && f.size() != 6) {
      throw GameError(ErrorCode::malformed, "line " + std::to_string(line) +
                                                ": expected 'round attack defense [point [secs secs]]'");
    }
    TranscriptRound r;
    r.line = line;
    if (detail::parse_int(f[0], line) != static_cast<int>(t.rounds.size()) + 1) {
      throw GameError(ErrorCode::malformed,
                      "line " + std::to_string(line) + ": rounds must be numbered consecutively");
    }
    r.attack = f[1] == "-" ? "" : f[1];
    r.defend = f[2] == "-" ? "" : f[2];
    if (f.size() >= 4 && f[3] != "-") {
      try {
        r.point = Point::from_name(f[3]);
      } catch (const GameError&) {
        throw GameError(ErrorCode::malformed,
                        "line " + std::to_string(line) + ": bad point '" + f[3] + "'");
      }
    }
    if (f.size() == 6) {
      r.attacker_elapsed = detail::parse_seconds(f[4], line);
      r.defender_elapsed = detail::parse_seconds(f[5], line);
    }
    t.rounds.push_back(std::move(r));
  }
  if (!header) throw GameError(ErrorCode::malformed, "empty transcript");
  if (!t.rounds_given) t.options.rounds = static_cast<int>(t.rounds.size());
  return t;
}

/// Runs a transcript through the match engine. Errors name the offending line.
inline AwarenessState replay_transcript(const Transcript& t,
                                        std::shared_ptr<const TokenCatalog> catalog = default_catalog(),
                                        std::shared_ptr<const MatchupMatrix> matrix = default_matrix()) {
  AwarenessState state = new_awareness_match(std::move(catalog), std::move(matrix), t.options);
  for (const TranscriptRound& r : t.rounds) {
    try {
      if (r.attack.empty()) {
        if (!r.defend.empty()) {
          throw GameError(ErrorCode::malformed, "defense recorded after attacker timeout");
        }
        state = expire_timer(state).first;
        continue;
      }
      const auto point = r.point ? r.point : state.first_free_point();
      if (!point) throw GameError(ErrorCode::occupied_point, "board is full");
      state = submit_attack(state, r.attack, *point, r.attacker_elapsed);
      if (r.defend.empty()) {
        state = expire_timer(state).first;
      } else {
        state = submit_defense(state, r.defend, r.defender_elapsed).first;
      }
    } catch (const GameError& e) {
      throw GameError(e.code(), "line " + std::to_string(r.line) + ": " + e.what());
    }
  }
  return state;
}

inline void write_transcript(const AwarenessState& state, std::ostream& os) {
  const AwarenessOptions& o = state.options();
  os << kTranscriptHeader << '\n';
  os << "rounds=" << o.rounds << '\n';
  os << "reuse=" << (o.allow_reuse ? 1 : 0) << '\n';
  os << "blind=" << (o.blind ? 1 : 0) << '\n';
  os << "diagonals=" << (o.diagonals ? 1 : 0) << '\n';
  if (o.timer_seconds) os << "timer=" << detail::format_seconds(*o.timer_seconds) << '\n';
  for (const RoundRecord& r : state.rounds()) {
    os << r.round << ' ' << (r.attack_token.empty() ? "-" : r.attack_token) << ' '
       << (r.defend_token.empty() ? "-" : r.defend_token) << ' '
       << (r.point ? r.point->name() : "-") << ' ' << detail::format_seconds(r.attacker_elapsed)
       << ' ' << detail::format_seconds(r.defender_elapsed) << '\n';
  }
}

}  // namespace cybermoraba
