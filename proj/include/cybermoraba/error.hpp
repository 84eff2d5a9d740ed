#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cybermoraba {

/// Machine-readable failure categories. The string forms are part of the
/// service wire protocol and must not change.
enum class ErrorCode {
  invalid_point,
  illegal_move,
  game_over,
  out_of_turn,
  wrong_phase,
  token_exhausted,
  unknown_token,
  occupied_point,
  timer_disabled,
  invalid_matrix,
  malformed,
  invalid_options,
  not_found,
  seat_taken,
  unauthorized,
  awaiting_opponent,
  stale_revision,
  match_unfinished,
  invalid_profile,
  storage,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_point: return "invalid_point";
    case ErrorCode::illegal_move: return "illegal_move";
    case ErrorCode::game_over: return "game_over";
    case ErrorCode::out_of_turn: return "out_of_turn";
    case ErrorCode::wrong_phase: return "wrong_phase";
    case ErrorCode::token_exhausted: return "token_exhausted";
    case ErrorCode::unknown_token: return "unknown_token";
    case ErrorCode::occupied_point: return "occupied_point";
    case ErrorCode::timer_disabled: return "timer_disabled";
    case ErrorCode::invalid_matrix: return "invalid_matrix";
    case ErrorCode::malformed: return "malformed";
    case ErrorCode::invalid_options: return "invalid_options";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::seat_taken: return "seat_taken";
    case ErrorCode::unauthorized: return "unauthorized";
    case ErrorCode::awaiting_opponent: return "awaiting_opponent";
    case ErrorCode::stale_revision: return "stale_revision";
    case ErrorCode::match_unfinished: return "match_unfinished";
    case ErrorCode::invalid_profile: return "invalid_profile";
    case ErrorCode::storage: return "storage";
  }
  return "unknown";
}

class GameError : public std::runtime_error {
 public:
  GameError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cybermoraba
