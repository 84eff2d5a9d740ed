#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"

#include "cybermoraba/board.hpp"
#include "cybermoraba/codec.hpp"
#include "cybermoraba/service.hpp"

// HTTP front end for MatchService.
//
//   POST   /matches                  create; body CreateMatch, returns a seat grant
//   POST   /matches/{id}/join        take the open seat
//   POST   /matches/{id}/commands    seated player's command (Authorization: Bearer <token>)
//   GET    /matches/{id}             client view (token optional)
//   GET    /matches/{id}/events      server-sent events after ?after=N or Last-Event-ID
//   GET    /matches/{id}/log         full event log, once the match is finished
//   GET    /scoreboard               scoreboard entries in insertion order
//   DELETE /scoreboard/{entryId}
//   GET    /matrix                   tokens and the matchup matrix
//   GET    /board                    point coordinates, adjacency and mill lines
//   GET    /health
//
// Every JSON body carries "protocol". Errors are {"protocol":1,"error":{"code","message"}}.

namespace cybermoraba {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::unauthorized: return 401;
    case ErrorCode::out_of_turn:
    case ErrorCode::seat_taken:
    case ErrorCode::stale_revision:
    case ErrorCode::awaiting_opponent:
    case ErrorCode::wrong_phase:
    case ErrorCode::game_over:
    case ErrorCode::match_unfinished:
    case ErrorCode::timer_disabled: return 409;
    case ErrorCode::illegal_move:
    case ErrorCode::token_exhausted:
    case ErrorCode::unknown_token:
    case ErrorCode::occupied_point:
    case ErrorCode::invalid_point: return 422;
    case ErrorCode::invalid_options:
    case ErrorCode::invalid_matrix:
    case ErrorCode::invalid_profile:
    case ErrorCode::malformed: return 400;
    case ErrorCode::storage: return 500;
  }
  return 500;
}

inline Json error_json(ErrorCode code, const std::string& message) {
  return Json{{"protocol", kProtocolVersion},
              {"error", Json{{"code", to_string(code)}, {"message", message}}}};
}

inline Json board_json(const BoardTopology& t) {
  Json points = Json::array(), edges = Json::array(), mills = Json::array();
  for (int id = 0; id < kPointCount; ++id) {
    const Point p = Point::from_id(id);
    points.push_back(Json{{"id", id},
                          {"name", p.name()},
                          {"ring", static_cast<int>(p.ring())},
                          {"index", p.index()},
                          {"col", p.coord().col},
                          {"row", p.coord().row}});
    for (Point q : t.adjacent(p)) {
      if (q.id() > id) edges.push_back(Json::array({p.name(), q.name()}));
    }
  }
  for (const MillLine& l : t.mill_lines()) {
    mills.push_back(Json::array({l[0].name(), l[1].name(), l[2].name()}));
  }
  return Json{{"protocol", kProtocolVersion},
              {"diagonals", t.diagonals()},
              {"points", std::move(points)},
              {"adjacent", std::move(edges)},
              {"mills", std::move(mills)}};
}

/// Parses a POST /matches body.
inline CreateMatchRequest create_request_from_json(const Json& j) {
  if (!j.is_object()) throw GameError(ErrorCode::malformed, "body must be a JSON object");
  CreateMatchRequest req;
  req.mode = mode_from_string(codec::get_or<std::string>(j, "mode", "awareness"));
  req.options = codec::options_from_json(j.value("options", Json()));
  if (req.mode == MatchMode::Classic) req.rules = detail::rules_from_json(j.value("rules", Json()));
  if (j.contains("rules") && j["rules"].is_object() && j["rules"].contains("diagonals")) {
    req.options.diagonals = codec::get<bool>(j["rules"], "diagonals");
  }
  req.profile = codec::profile_from_json(codec::get<Json>(j, "profile"));
  req.role = role_from_string(codec::get_or<std::string>(j, "role", "attacker"));
  if (j.contains("opponent") && !j["opponent"].is_null()) {
    const Json& o = j["opponent"];
    req.opponent = BotSpec{codec::get<std::string>(o, "policy"),
                           codec::get_or<std::uint64_t>(o, "seed", 0),
                           codec::get_or<int>(o, "depth", 3)};
  }
  return req;
}

inline Json grant_json(const SeatGrant& g) {
  return Json{{"protocol", kProtocolVersion},
              {"matchId", g.match_id},
              {"sessionToken", g.session_token},
              {"role", to_string(g.role)},
              {"state", g.state}};
}

struct HttpOptions {
  /// How often move timers are checked.
  std::chrono::milliseconds tick_interval{250};
  /// Idle time before an event stream sends a keep-alive comment.
  std::chrono::milliseconds keepalive{15000};
};

class HttpServer {
 public:
  explicit HttpServer(MatchService& service, HttpOptions options = {})
      : service_(service), options_(options) {
    routes();
  }

  ~HttpServer() { stop(); }

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to host:port; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
      throw GameError(ErrorCode::storage, "cannot listen on " + host + ":" + std::to_string(port));
    }
    port_ = bound;
    return bound;
  }

  /// Serves on background threads until stop().
  void start() {
    ticker_ = std::thread([this] { tick_loop(); });
    listener_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  /// Serves on the calling thread until stop() is called elsewhere.
  void run() {
    ticker_ = std::thread([this] { tick_loop(); });
    server_.listen_after_bind();
  }

  void stop() {
    if (stopping_.exchange(true)) return;
    {
      std::lock_guard lock(tick_mutex_);
      tick_wake_.notify_all();
    }
    service_.shutdown();
    server_.stop();
    if (listener_.joinable()) listener_.join();
    if (ticker_.joinable()) ticker_.join();
  }

  int port() const { return port_; }

 private:
  static void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static Json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    try {
      return Json::parse(req.body);
    } catch (const Json::exception&) {
      throw GameError(ErrorCode::malformed, "body is not valid JSON");
    }
  }

  static std::string session_token(const httplib::Request& req, const Json& body = Json()) {
    const std::string auth = req.get_header_value("Authorization");
    if (auth.rfind("Bearer ", 0) == 0) return auth.substr(7);
    if (req.has_param("token")) return req.get_param_value("token");
    if (body.is_object() && body.contains("sessionToken") && body["sessionToken"].is_string()) {
      return body["sessionToken"].get<std::string>();
    }
    return {};
  }

  template <typename F>
  static void guarded(httplib::Response& res, F&& f) {
    try {
      f();
    } catch (const GameError& e) {
      reply(res, http_status(e.code()), error_json(e.code(), e.what()));
    } catch (const std::exception& e) {
      reply(res, 500, error_json(ErrorCode::storage, e.what()));
    }
  }

  void routes() {
    server_.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                 {"Access-Control-Allow-Headers", "Content-Type, Authorization, Last-Event-ID"},
                                 {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
    server_.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, Json{{"protocol", kProtocolVersion}, {"status", "ok"}});
    });

    server_.Get("/matrix", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, service_.matrix_json());
    });

    server_.Get("/board", [](const httplib::Request& req, httplib::Response& res) {
      const bool diagonals = req.get_param_value("diagonals") == "1" || req.get_param_value("diagonals") == "true";
      reply(res, 200, board_json(standard_topology(diagonals)));
    });

    server_.Post("/matches", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        reply(res, 201, grant_json(service_.create_match(create_request_from_json(parse_body(req)))));
      });
    });

    server_.Post(R"(/matches/([^/]+)/join)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const Json body = parse_body(req);
        std::optional<Role> role;
        if (body.contains("role") && !body["role"].is_null()) {
          role = role_from_string(codec::get<std::string>(body, "role"));
        }
        const PlayerProfile profile = codec::profile_from_json(codec::get<Json>(body, "profile"));
        reply(res, 200, grant_json(service_.join_match(req.matches[1], profile, role)));
      });
    });

    server_.Post(R"(/matches/([^/]+)/commands)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const Json body = parse_body(req);
        const Json command = body.contains("command") ? body["command"] : body;
        const CommandResult r = service_.submit_command(req.matches[1], session_token(req, body), command);
        Json events = Json::array();
        for (const MatchEvent& e : r.events) events.push_back(event_to_json(e));
        reply(res, 200, Json{{"protocol", kProtocolVersion},
                             {"revision", r.revision},
                             {"events", std::move(events)},
                             {"state", r.state}});
      });
    });

    server_.Get(R"(/matches/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { reply(res, 200, service_.get_state(req.matches[1], session_token(req))); });
    });

    server_.Get(R"(/matches/([^/]+)/log)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string id = req.matches[1];
        if (service_.get_state(id)["status"] != "finished") {
          throw GameError(ErrorCode::match_unfinished, "log is available once the match is finished");
        }
        Json events = Json::array();
        for (const MatchEvent& e : service_.event_log(id)) events.push_back(event_to_json(e));
        reply(res, 200, Json{{"protocol", kProtocolVersion}, {"matchId", id}, {"events", std::move(events)}});
      });
    });

    server_.Get(R"(/matches/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { stream_events(req, res); });
    });

    server_.Get("/scoreboard", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        Json entries = Json::array();
        for (const ScoreboardEntry& e : service_.list_scoreboard()) entries.push_back(codec::entry_to_json(e));
        reply(res, 200, Json{{"protocol", kProtocolVersion}, {"entries", std::move(entries)}});
      });
    });

    server_.Delete(R"(/scoreboard/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const std::string raw = req.matches[1];
        std::uint64_t id = 0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), id);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
          throw GameError(ErrorCode::not_found, "no scoreboard entry '" + raw + "'");
        }
        service_.delete_entry(id);
        reply(res, 200, Json{{"protocol", kProtocolVersion}, {"deleted", id}});
      });
    });
  }

  void stream_events(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const std::string token = session_token(req);
    service_.get_state(id);  // 404 before the stream opens
    auto after = std::make_shared<std::uint64_t>(0);
    const std::string resume = req.has_header("Last-Event-ID") ? req.get_header_value("Last-Event-ID")
                                                                 : req.get_param_value("after");
    if (!resume.empty()) {
      const auto [ptr, ec] = std::from_chars(resume.data(), resume.data() + resume.size(), *after);
      if (ec != std::errc{} || ptr != resume.data() + resume.size()) {
        throw GameError(ErrorCode::malformed, "bad resume revision '" + resume + "'");
      }
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, id, token, after](std::size_t, httplib::DataSink& sink) {
          if (stopping_) return false;
          const auto events = service_.events_since(id, token, *after, options_.keepalive);
          if (stopping_) return false;
          std::string chunk;
          if (events.empty()) {
            chunk = ": keepalive\n\n";
          }
          for (const MatchEvent& e : events) {
            chunk += "id: " + std::to_string(e.revision) + "\nevent: " + e.type +
                     "\ndata: " + event_to_json(e).dump() + "\n\n";
            *after = e.revision;
          }
          return sink.write(chunk.data(), chunk.size());
        });
  }

  void tick_loop() {
    std::unique_lock lock(tick_mutex_);
    while (!stopping_) {
      tick_wake_.wait_for(lock, options_.tick_interval, [this] { return stopping_.load(); });
      if (stopping_) break;
      lock.unlock();
      try {
        service_.tick();
      } catch (const std::exception&) {
      }
      lock.lock();
    }
  }

  MatchService& service_;
  HttpOptions options_;
  httplib::Server server_;
  std::thread listener_;
  std::thread ticker_;
  std::mutex tick_mutex_;
  std::condition_variable tick_wake_;
  std::atomic<bool> stopping_{false};
  int port_ = -1;
};

}  // namespace cybermoraba
