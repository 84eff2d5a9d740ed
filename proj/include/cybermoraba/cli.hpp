#pragma once

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cybermoraba/http.hpp"
#include "cybermoraba/persistence.hpp"
#include "cybermoraba/policy.hpp"
#include "cybermoraba/service.hpp"
#include "cybermoraba/transcript.hpp"

// Command-line front end. Exit codes:
//   0  success
//   1  a check failed: incomplete matrix, bad transcript, abandoned match
//   2  usage error: unknown flag, bad value, policy that cannot take the seat
//   3  I/O error: unreadable input, unwritable output, storage failure

namespace cybermoraba {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct CliConfig {
  std::string mode = "awareness";
  int rounds = 13;
  std::string matrix_path;
  std::string attacker_policy;
  std::string defender_policy;
  std::uint64_t seed = 1;
  int games = 1;
  std::string out;
  std::string listen = "127.0.0.1:8080";
  double timer_seconds = 0.0;
  bool timer_given = false;
  bool allow_reuse = false;
  bool blind = false;
  bool diagonals = false;
  int depth = 3;
  std::string role = "attacker";
  std::string nickname = "player";
  std::string data_dir;
  std::string format = "delimited";
  std::string input;
};

namespace cli_detail {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for one seat of one simulated game; side 0 attacker, 1 defender.
inline std::uint64_t game_seed(std::uint64_t seed, int game, int side) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(game) * 2 + static_cast<std::uint64_t>(side)));
}

inline std::string read_file(const std::string& path, std::istream& in) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

inline void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(data.data(), static_cast<std::streamsize>(data.size())) || !f.flush()) {
    throw IoError("cannot write " + path.string());
  }
}

/// Writes to `path`, or to `out` when the path is empty or "-".
inline void emit(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
  } else {
    write_file(path, data);
  }
}

inline void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
}

inline std::shared_ptr<const MatchupMatrix> matrix_for(const CliConfig& c, std::istream& in) {
  if (c.matrix_path.empty()) return default_matrix();
  std::istringstream text(read_file(c.matrix_path, in));
  return std::make_shared<const MatchupMatrix>(load_matrix(text, *default_catalog()));
}

inline AwarenessOptions options_for(const CliConfig& c) {
  AwarenessOptions o;
  o.rounds = c.rounds;
  o.allow_reuse = c.allow_reuse;
  o.blind = c.blind;
  o.diagonals = c.diagonals;
  if (c.timer_given) o.timer_seconds = c.timer_seconds;
  return o;
}

inline Policy seat_policy(const CliConfig& c, Role seat, std::uint64_t seed) {
  const bool classic = c.mode == "classic";
  std::string name = seat == Role::Attacker ? c.attacker_policy : c.defender_policy;
  if (name.empty()) {
    name = classic ? "random" : seat == Role::Attacker ? "expectimax-attacker" : "greedy-defender";
  }
  Policy p = [&] {
    try {
      return Policy::parse(name, seed, c.depth);
    } catch (const GameError& e) {
      throw UsageError(e.what());
    }
  }();
  if (classic ? !p.supports_classic() : !p.supports_awareness(seat)) {
    throw UsageError(name + " cannot play the " + std::string(to_string(seat)) + " seat in " + c.mode +
                     " mode");
  }
  return p;
}

inline std::string percent(int n, int total) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << (total == 0 ? 0.0 : 100.0 * n / total) << '%';
  return os.str();
}

inline std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

inline std::string round_line(const RoundRecord& r) {
  std::ostringstream os;
  os << r.round << ' ' << (r.attack_token.empty() ? "-" : r.attack_token) << ' '
     << (r.defend_token.empty() ? "-" : r.defend_token) << ' ' << (r.point ? r.point->name() : "-") << ' '
     << (r.winner() == Role::Attacker ? "Attacker" : "Defender") << ' ' << r.feedback;
  return os.str();
}

inline void print_result(const AwarenessState& s, std::ostream& out) {
  const AwarenessResult r = final_result(s);
  out << "totals attacker " << r.attacker_score << " defender " << r.defender_score << '\n';
  out << r.summary() << '\n';
}

inline int simulate_awareness(const CliConfig& c, std::istream& in, std::ostream& out) {
  const auto matrix = matrix_for(c, in);
  const AwarenessOptions options = options_for(c);
  new_awareness_match(default_catalog(), matrix, options);  // reject bad options before any game
  seat_policy(c, Role::Attacker, 0);
  seat_policy(c, Role::Defender, 0);
  if (!c.out.empty()) make_dir(c.out);

  ScoreStore store;
  int att_wins = 0, def_wins = 0, draws = 0;
  double att_total = 0, def_total = 0, playtime = 0;
  std::string att_name, def_name;
  for (int g = 0; g < c.games; ++g) {
    Policy att = seat_policy(c, Role::Attacker, game_seed(c.seed, g, 0));
    Policy def = seat_policy(c, Role::Defender, game_seed(c.seed, g, 1));
    att_name = att.name();
    def_name = def.name();
    const AwarenessState s = play_out(new_awareness_match(default_catalog(), matrix, options), att, def);
    const AwarenessResult r = final_result(s);
    switch (r.outcome) {
      case AwarenessOutcome::AttackerWins: ++att_wins; break;
      case AwarenessOutcome::DefenderWins: ++def_wins; break;
      case AwarenessOutcome::Draw: ++draws; break;
    }
    att_total += r.attacker_score;
    def_total += r.defender_score;
    for (const RoundRecord& rr : s.rounds()) playtime += rr.attacker_elapsed + rr.defender_elapsed;
    if (!c.out.empty()) {
      std::ostringstream t;
      write_transcript(s, t);
      std::ostringstream name;
      name << "game-" << std::setw(4) << std::setfill('0') << g + 1 << ".transcript";
      write_file(std::filesystem::path(c.out) / name.str(), t.str());
      store.record_result(PlayerProfile{"simulate", {}, {}, {}}, s, std::nullopt, "sim-" + std::to_string(g + 1));
    }
  }
  if (!c.out.empty()) {
    std::ostringstream d;
    store.export_dataset(d, DatasetFormat::Delimited);
    write_file(std::filesystem::path(c.out) / "dataset.csv", d.str());
  }
  const double n = c.games;
  out << "mode awareness\n"
      << "games " << c.games << '\n'
      << "attacker " << att_name << '\n'
      << "defender " << def_name << '\n'
      << "attacker wins " << att_wins << " (" << percent(att_wins, c.games) << ")\n"
      << "defender wins " << def_wins << " (" << percent(def_wins, c.games) << ")\n"
      << "draws " << draws << " (" << percent(draws, c.games) << ")\n"
      << "mean attacker total " << fixed3(att_total / n) << '\n'
      << "mean defender total " << fixed3(def_total / n) << '\n'
      << "mean playtime " << fixed3(playtime / n) << " s\n";
  return kExitOk;
}

inline int simulate_classic(const CliConfig& c, std::ostream& out) {
  seat_policy(c, Role::Attacker, 0);
  seat_policy(c, Role::Defender, 0);
  if (!c.out.empty()) make_dir(c.out);
  const BoardTopology& topology = standard_topology(c.diagonals);
  int att_wins = 0, def_wins = 0, draws = 0, unfinished = 0;
  double plies = 0, att_left = 0, def_left = 0;
  std::string att_name, def_name;
  for (int g = 0; g < c.games; ++g) {
    Policy att = seat_policy(c, Role::Attacker, game_seed(c.seed, g, 0));
    Policy def = seat_policy(c, Role::Defender, game_seed(c.seed, g, 1));
    att_name = att.name();
    def_name = def.name();
    const ClassicPlayout p = play_out(new_classic_game(topology, Role::Attacker), att, def);
    if (!p.outcome) {
      ++unfinished;
    } else if (p.outcome->is_draw()) {
      ++draws;
    } else if (*p.outcome->winner == Role::Attacker) {
      ++att_wins;
    } else {
      ++def_wins;
    }
    plies += static_cast<double>(p.state.history().size());
    att_left += p.state.total(Role::Attacker);
    def_left += p.state.total(Role::Defender);
    if (!c.out.empty()) {
      std::ostringstream m;
      for (const Move& mv : p.state.history()) m << mv.notation() << '\n';
      m << "# result ";
      if (!p.outcome) {
        m << "unfinished";
      } else {
        m << (p.outcome->winner ? std::string(to_string(*p.outcome->winner)) : "draw") << ' '
          << to_string(p.outcome->reason);
      }
      m << '\n';
      std::ostringstream name;
      name << "game-" << std::setw(4) << std::setfill('0') << g + 1 << ".moves";
      write_file(std::filesystem::path(c.out) / name.str(), m.str());
    }
  }
  const double n = c.games;
  out << "mode classic\n"
      << "games " << c.games << '\n'
      << "attacker " << att_name << " (moves first)\n"
      << "defender " << def_name << '\n'
      << "attacker wins " << att_wins << " (" << percent(att_wins, c.games) << ")\n"
      << "defender wins " << def_wins << " (" << percent(def_wins, c.games) << ")\n"
      << "draws " << draws << " (" << percent(draws, c.games) << ")\n"
      << "unfinished " << unfinished << '\n'
      << "mean plies " << fixed3(plies / n) << '\n'
      << "mean attacker pieces " << fixed3(att_left / n) << '\n'
      << "mean defender pieces " << fixed3(def_left / n) << '\n';
  return kExitOk;
}

inline int validate_matrix_file(const CliConfig& c, std::istream& in, std::ostream& out) {
  const std::string path = c.input.empty() ? c.matrix_path : c.input;
  if (path.empty()) throw UsageError("validate-matrix needs a file");
  std::istringstream text(read_file(path, in));
  const auto rows = parse_matrix_rows(text);
  const MatrixReport report = validate_matrix_rows(rows, *default_catalog());
  out << report.text();
  const MatchupMatrix m = matrix_from_rows(rows);
  int verbatim = 0;
  for (const auto& [pair, v] : published_verdicts()) {
    const Verdict* got = m.find(pair.first, pair.second);
    if (got != nullptr && got->winner == v.winner && got->feedback == v.feedback) {
      ++verbatim;
    } else {
      out << "published pair differs: " << pair.first << ' ' << pair.second << '\n';
    }
  }
  out << "published pairs " << verbatim << '/' << published_verdicts().size() << " verbatim\n";
  return report.ok() ? kExitOk : kExitCheckFailed;
}

inline int replay_file(const CliConfig& c, std::istream& in, std::ostream& out) {
  if (c.input.empty()) throw UsageError("replay needs a transcript file");
  std::istringstream text(read_file(c.input, in));
  const Transcript t = parse_transcript(text);
  const AwarenessState s = replay_transcript(t, default_catalog(), matrix_for(c, in));
  out << "round attack defense point winner feedback\n";
  for (const RoundRecord& r : s.rounds()) out << round_line(r) << '\n';
  print_result(s, out);
  return kExitOk;
}

/// Reads one non-empty line; false on end of input.
inline bool prompt(std::istream& in, std::ostream& out, const std::string& label, std::string& line) {
  while (true) {
    out << label << "> " << std::flush;
    if (!std::getline(in, line)) return false;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    return true;
  }
}

inline std::string token_menu(const AwarenessState& s, Role r) {
  std::string menu;
  for (const std::string& id : s.remaining(r)) {
    if (!menu.empty()) menu += ", ";
    menu += id + " " + s.catalog().at(id, r).label;
  }
  return menu;
}

inline int play_awareness(const CliConfig& c, std::istream& in, std::ostream& out) {
  const Role human = role_from_string(c.role);
  const auto matrix = matrix_for(c, in);
  AwarenessState s = new_awareness_match(default_catalog(), matrix, options_for(c));
  Policy bot = seat_policy(c, opponent(human), c.seed);
  const PlayerProfile profile{c.nickname, {}, {}, {}};
  profile.validate();
  out << "you play " << to_string(human) << " against " << bot.name() << "; 'quit' leaves\n";
  std::string line;
  while (s.phase() != AwarenessPhase::Finished) {
    const std::size_t before = s.rounds().size();
    out << "round " << before + 1 << '/' << s.rounds_total() << "  attacker " << s.attacker_score()
        << " defender " << s.defender_score() << '\n';
    try {
      if (s.phase() == AwarenessPhase::AwaitAttack) {
        if (human == Role::Attacker) {
          out << "tokens: " << token_menu(s, Role::Attacker) << '\n';
          if (!prompt(in, out, "attack", line) || line == "quit") break;
          std::istringstream words(line);
          std::string token, point;
          words >> token >> point;
          const auto at = point.empty() ? s.first_free_point() : std::optional(Point::from_name(point));
          if (!at) throw GameError(ErrorCode::occupied_point, "board is full");
          s = submit_attack(s, token, *at);
        } else {
          const AttackChoice a = bot.choose_attack(s);
          s = submit_attack(s, a.token, a.point);
        }
        continue;
      }
      if (human == Role::Defender) {
        if (!c.blind) {
          const std::string& a = s.pending()->token;
          out << "incoming " << a << " " << s.catalog().at(a, Role::Attacker).label << " at "
              << s.pending()->point.name() << '\n';
        }
        out << "tokens: " << token_menu(s, Role::Defender) << '\n';
        if (!prompt(in, out, "defend", line) || line == "quit") break;
        s = submit_defense(s, line).first;
      } else {
        s = submit_defense(s, bot.choose_defense(s)).first;
      }
      out << "round " << round_line(s.rounds().back()) << '\n';
    } catch (const GameError& e) {
      out << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    }
  }
  if (s.phase() != AwarenessPhase::Finished) {
    out << "match abandoned\n";
    return kExitCheckFailed;
  }
  print_result(s, out);
  if (!c.data_dir.empty()) {
    ScoreStore store(c.data_dir);
    const ScoreboardEntry e = store.record_result(profile, s);
    out << "saved scoreboard entry " << e.entry_id << '\n';
  }
  return kExitOk;
}

/// 7x7 drawing: X for the attacker, O for the defender, + for empty points.
inline std::string render_board(const ClassicState& s) {
  std::vector<std::string> grid(7, std::string(13, ' '));
  for (int id = 0; id < kPointCount; ++id) {
    const Point p = Point::from_id(id);
    const auto occ = s.occupant(p);
    grid[static_cast<std::size_t>(p.coord().row)][static_cast<std::size_t>(p.coord().col * 2)] =
        !occ ? '+' : *occ == Role::Attacker ? 'X' : 'O';
  }
  std::string text;
  for (int row = 0; row < 7; ++row) {
    text += std::to_string(7 - row) + "  " + grid[static_cast<std::size_t>(row)] + "\n";
  }
  text += "   a b c d e f g\n";
  return text;
}

inline int play_classic(const CliConfig& c, std::istream& in, std::ostream& out) {
  const Role human = role_from_string(c.role);
  CliConfig bots = c;
  if (human == Role::Attacker && bots.defender_policy.empty()) bots.defender_policy = "minimax";
  if (human == Role::Defender && bots.attacker_policy.empty()) bots.attacker_policy = "minimax";
  Policy bot = seat_policy(bots, opponent(human), c.seed);
  ClassicState s = new_classic_game(standard_topology(c.diagonals), Role::Attacker);
  out << "you play " << (human == Role::Attacker ? "X (first)" : "O") << " against " << bot.name()
      << "; moves look like P:a7, S:a7-d7, C:g1; '?' lists legal moves, 'quit' leaves\n";
  std::string line;
  std::optional<ClassicOutcome> outcome;
  while (!(outcome = terminal(s))) {
    if (s.to_move() != human) {
      const Move m = bot.choose_move(s);
      out << "bot " << m.notation() << '\n';
      s = apply_move(s, m);
      continue;
    }
    out << render_board(s) << "hand X " << s.hand(Role::Attacker) << " O " << s.hand(Role::Defender)
        << (s.pending_capture() ? "  capture pending" : "") << '\n';
    if (!prompt(in, out, "move", line) || line == "quit") {
      out << "match abandoned\n";
      return kExitCheckFailed;
    }
    if (line == "?") {
      for (const Move& m : legal_moves(s)) out << m.notation() << ' ';
      out << '\n';
      continue;
    }
    try {
      s = apply_move(s, Move::parse(line));
    } catch (const GameError& e) {
      out << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    }
  }
  out << render_board(s);
  if (outcome->winner) {
    out << to_string(*outcome->winner) << " wins (" << to_string(outcome->reason) << ")\n";
  } else {
    out << "draw (" << to_string(outcome->reason) << ")\n";
  }
  return kExitOk;
}

inline std::atomic<bool>& serve_stop_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

inline int serve(const CliConfig& c, std::istream& in, std::ostream& out) {
  const auto colon = c.listen.rfind(':');
  int port = -1;
  if (colon != std::string::npos) {
    const std::string digits = c.listen.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) port = -1;
  }
  if (colon == std::string::npos || colon == 0 || port < 0 || port > 65535) {
    throw UsageError("--listen wants host:port, got '" + c.listen + "'");
  }
  const std::string host = c.listen.substr(0, colon);
  auto store = c.data_dir.empty() ? std::make_shared<ScoreStore>() : std::make_shared<ScoreStore>(c.data_dir);
  MatchService service(store, steady_seconds(), default_catalog(), matrix_for(c, in));
  HttpServer server(service);
  const int bound = server.bind(host, port);
  serve_stop_flag() = false;
  std::signal(SIGINT, [](int) { serve_stop_flag() = true; });
  std::signal(SIGTERM, [](int) { serve_stop_flag() = true; });
  server.start();
  out << "listening on http://" << host << ':' << bound << std::endl;
  while (!serve_stop_flag()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  out << "stopped\n";
  return kExitOk;
}

inline int export_dataset(const CliConfig& c, std::ostream& out) {
  if (c.data_dir.empty()) throw UsageError("export-dataset needs --data");
  if (!std::filesystem::is_directory(c.data_dir)) throw IoError("no store at " + c.data_dir);
  const DatasetFormat format =
      c.format == "record-per-line" ? DatasetFormat::RecordPerLine : DatasetFormat::Delimited;
  ScoreStore store(c.data_dir);
  std::ostringstream os;
  store.export_dataset(os, format);
  emit(c.out, os.str(), out);
  return kExitOk;
}

inline int export_matrix(const CliConfig& c, std::istream& in, std::ostream& out) {
  std::ostringstream os;
  write_matrix(*matrix_for(c, in), *default_catalog(), os);
  emit(c.out, os.str(), out);
  return kExitOk;
}

}  // namespace cli_detail

/// Runs one command. `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  CliConfig c;
  CLI::App app{"Morabaraba board game and the cyber-awareness variant"};
  app.name("cybermoraba");
  app.require_subcommand(1);

  auto mode = [&](CLI::App* s) {
    s->add_option("--mode", c.mode, "awareness or classic")->check(CLI::IsMember({"awareness", "classic"}));
  };
  auto match_flags = [&](CLI::App* s) {
    s->add_option("--rounds", c.rounds, "rounds per awareness match");
    s->add_option("--matrix", c.matrix_path, "matchup matrix file (default: built-in)");
    s->add_flag("--allow-reuse", c.allow_reuse, "tokens return to the hand after use");
    s->add_flag("--blind", c.blind, "defender does not see the committed attack");
    s->add_flag("--diagonals", c.diagonals, "board with corner diagonals");
    s->add_option("--timer-seconds", c.timer_seconds, "move timer")->check(CLI::PositiveNumber);
  };
  auto policy_flags = [&](CLI::App* s) {
    s->add_option("--attacker-policy", c.attacker_policy,
                  "random, expectimax-attacker or minimax");
    s->add_option("--defender-policy", c.defender_policy, "random, greedy-defender or minimax");
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--depth", c.depth, "minimax depth")->check(CLI::Range(1, 12));
  };

  CLI::App* sim = app.add_subcommand("simulate", "bot-versus-bot games with a summary");
  mode(sim);
  match_flags(sim);
  policy_flags(sim);
  sim->add_option("--games", c.games, "number of games")->check(CLI::Range(1, 10000000));
  sim->add_option("--out", c.out, "directory for transcripts and the dataset");

  CLI::App* val = app.add_subcommand("validate-matrix", "check a matrix file for 13x13 coverage");
  val->add_option("file", c.input, "matrix file, '-' for stdin");
  val->add_option("--matrix", c.matrix_path, "same as the positional file");

  CLI::App* rep = app.add_subcommand("replay", "judge a transcript and print the verdicts");
  rep->add_option("file", c.input, "transcript file, '-' for stdin")->required();
  rep->add_option("--matrix", c.matrix_path, "matchup matrix file");

  CLI::App* play = app.add_subcommand("play", "play against a bot on the terminal");
  mode(play);
  match_flags(play);
  policy_flags(play);
  play->add_option("--role", c.role, "your seat")->check(CLI::IsMember({"attacker", "defender"}));
  play->add_option("--nickname", c.nickname, "name for the scoreboard");
  play->add_option("--data", c.data_dir, "store directory; records the result");

  CLI::App* srv = app.add_subcommand("serve", "run the HTTP match service");
  srv->add_option("--listen", c.listen, "host:port");
  srv->add_option("--data", c.data_dir, "store directory (default: in memory)");
  srv->add_option("--matrix", c.matrix_path, "matchup matrix file");

  CLI::App* exd = app.add_subcommand("export-dataset", "dump the per-round game logs");
  exd->add_option("--data", c.data_dir, "store directory")->required();
  exd->add_option("--format", c.format, "delimited or record-per-line")
      ->check(CLI::IsMember({"delimited", "record-per-line"}));
  exd->add_option("--out", c.out, "output file (default: stdout)");

  CLI::App* exm = app.add_subcommand("export-matrix", "write the matchup matrix file");
  exm->add_option("--matrix", c.matrix_path, "re-emit this file instead of the built-in matrix");
  exm->add_option("--out", c.out, "output file (default: stdout)");

  CLI::App* brd = app.add_subcommand("board", "dump points, adjacency and mill lines");
  brd->add_flag("--diagonals", c.diagonals, "board with corner diagonals");

  std::vector<std::string> storage{"cybermoraba"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  for (CLI::App* s : {sim, play}) {
    if (*s && s->count("--timer-seconds") > 0) c.timer_given = true;
  }

  try {
    if (*sim) {
      if (c.mode == "classic") return simulate_classic(c, out);
      return simulate_awareness(c, in, out);
    }
    if (*val) return validate_matrix_file(c, in, out);
    if (*rep) return replay_file(c, in, out);
    if (*play) return c.mode == "classic" ? play_classic(c, in, out) : play_awareness(c, in, out);
    if (*srv) return serve(c, in, out);
    if (*exd) return export_dataset(c, out);
    if (*exm) return export_matrix(c, in, out);
    if (*brd) {
      dump_topology(standard_topology(c.diagonals), out);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GameError& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    if (e.code() == ErrorCode::storage) return kExitIo;
    if (e.code() == ErrorCode::invalid_options) return kExitUsage;
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace cybermoraba
