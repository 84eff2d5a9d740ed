// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "cybermoraba/cli.hpp"
#include "geometry_oracle.hpp"
#include "playout.hpp"
#include "search_oracle.hpp"

using namespace cybermoraba;

namespace {

// Time budgets in seconds.
constexpr double kSampleGameBudget = 1.0;
constexpr double kForcedBudget = 5.0;
constexpr double kFuzzBudget = 30.0;
constexpr double kSearchBudget = 60.0;

constexpr int kForcedGames = 100;
constexpr int kFuzzPlayouts = 1000;
constexpr int kFuzzMaxPlies = 1000;
constexpr int kSearchPositions = 100;
constexpr int kEventMatches = 30;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fixture(const std::string& name) { return std::string(CYBERMORABA_FIXTURE_DIR) + "/" + name; }

AwarenessState replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return replay_transcript(parse_transcript(in));
}

struct Expected {
  const char* attack;
  const char* defend;
  Role winner;
  const char* feedback;
};

// The published sample game.
const Expected kSampleGame[] = {
    {"A1", "D5", Role::Defender, "Never trust malicious emails"},
    {"A11", "D1", Role::Defender, "Keep denying malicious links"},
    {"A3", "D4", Role::Defender, "Identification of malicious chats"},
    {"A2", "D7", Role::Attacker, "The defender trusted a malicious call"},
    {"A7", "D12", Role::Defender, "Secured connection suggested"},
    {"A8", "D4", Role::Defender, "Malicious access identified"},
    {"A10", "D6", Role::Attacker, "Data loss occurred"},
    {"A11", "D8", Role::Attacker, "Malicious link used"},
};

Check sample_game_replay() {
  Check c;
  const AwarenessState s = replay_file(fixture("sample_game.transcript"));
  const auto& rounds = s.rounds();
  c.expect(rounds.size() == 8, "expected 8 rounds, got " + std::to_string(rounds.size()));
  for (std::size_t i = 0; i < rounds.size() && i < 8; ++i) {
    const Expected& e = kSampleGame[i];
    const RoundRecord& r = rounds[i];
    c.expect(r.attack_token == e.attack && r.defend_token == e.defend, "round " + std::to_string(i + 1) + " tokens");
    c.expect(r.winner() == e.winner, "round " + std::to_string(i + 1) + " winner");
    c.expect(r.feedback == e.feedback, "round " + std::to_string(i + 1) + " feedback '" + r.feedback + "'");
  }
  const AwarenessResult res = final_result(s);
  c.expect(res.attacker_score == 3 && res.defender_score == 5,
           "totals " + std::to_string(res.attacker_score) + "/" + std::to_string(res.defender_score));
  c.expect(res.outcome == AwarenessOutcome::DefenderWins, "outcome");
  c.expect(res.summary() == "Defender wins with 5%", "summary '" + res.summary() + "'");
  if (c.ok) c.detail = "8/8 rounds, (3, 5), \"" + res.summary() + "\"";
  return c;
}

Check draw_rule() {
  Check c;
  for (const char* name : {"draw_6_6.transcript", "draw_6_6_single_use.transcript"}) {
    const AwarenessResult r = final_result(replay_file(fixture(name)));
    c.expect(r.attacker_score == 6 && r.defender_score == 6, std::string(name) + " totals");
    c.expect(r.outcome == AwarenessOutcome::Draw, std::string(name) + " outcome");
  }
  // every completed random match with level totals is a draw
  int level = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    AwarenessOptions o;
    o.rounds = 12;
    o.allow_reuse = seed % 2 == 0;
    Policy a = Policy::random(seed), d = Policy::random(seed + 7919);
    const AwarenessResult r = final_result(play_out(new_awareness_match(default_catalog(), default_matrix(), o), a, d));
    const bool even = r.attacker_score == r.defender_score;
    level += even ? 1 : 0;
    c.expect(even == (r.outcome == AwarenessOutcome::Draw), "seed " + std::to_string(seed));
  }
  if (c.ok) c.detail = "two 6-6 transcripts, " + std::to_string(level) + " level random matches";
  return c;
}

Check published_scoreboard() {
  struct Row {
    const char* name;
    int defender, attacker, seconds;
    const char* winner;
  };
  const Row rows[] = {
      {"John", 4, 8, 152, "Attacker"},    {"Arthur", 6, 6, 127, "Draw"},     {"Tristin", 5, 7, 145, "Attacker"},
      {"Jess", 6, 6, 82, "Draw"},         {"Steve", 7, 5, 110, "Defender"},  {"JP", 7, 5, 118, "Defender"},
      {"Kenny", 5, 7, 144, "Attacker"},   {"TIm", 7, 5, 89, "Defender"},     {"Melissa", 2, 10, 102, "Attacker"},
  };
  Check c;
  ScoreStore store;
  for (const Row& r : rows) store.record_scores(PlayerProfile{r.name, {}, {}, {}}, r.defender, r.attacker, r.seconds);
  const auto entries = store.list_scoreboard();
  c.expect(entries.size() == 9, "entry count");
  for (std::size_t i = 0; i < entries.size() && i < 9; ++i) {
    c.expect(entries[i].nickname == rows[i].name, "row " + std::to_string(i + 1) + " name");
    c.expect(winner_label(entries[i].winner) == rows[i].winner,
             std::string(rows[i].name) + " stored " + std::string(winner_label(entries[i].winner)));
  }
  if (c.ok) c.detail = "9/9 winners";
  return c;
}

Check matrix_completeness() {
  Check c;
  std::istringstream in;
  std::ostringstream out, err;
  const int code = run_cli({"validate-matrix", std::string(CYBERMORABA_ASSET_DIR) + "/default_matrix.tsv"}, in, out, err);
  c.expect(code == kExitOk, "validate-matrix exit " + std::to_string(code));
  std::istringstream report(out.str());
  std::string first;
  std::getline(report, first);
  c.expect(first == "169/169 pairs", "report '" + first + "'");
  c.expect(out.str().find("missing pair") == std::string::npos, "missing pairs reported");
  std::ifstream file(std::string(CYBERMORABA_ASSET_DIR) + "/default_matrix.tsv");
  const MatchupMatrix m = load_matrix(file, *default_catalog());
  int verbatim = 0;
  for (const Expected& e : kSampleGame) {
    const Verdict* v = m.find(e.attack, e.defend);
    if (v != nullptr && v->winner == e.winner && v->feedback == e.feedback) ++verbatim;
  }
  c.expect(verbatim == 8, "published pairs verbatim " + std::to_string(verbatim) + "/8");
  if (c.ok) c.detail = first + ", 0 missing, 8/8 published pairs verbatim";
  return c;
}

Check forced_outcome() {
  Check c;
  for (int g = 0; g < kForcedGames; ++g) {
    Policy a = Policy::expectimax_attacker(), d = Policy::greedy_defender();
    const AwarenessResult r = final_result(play_out(new_awareness_match(), a, d));
    c.expect(r.attacker_score == 4 && r.defender_score == 9 && r.outcome == AwarenessOutcome::DefenderWins,
             "game " + std::to_string(g) + " ended " + std::to_string(r.attacker_score) + "/" +
                 std::to_string(r.defender_score));
  }
  std::istringstream in;
  std::ostringstream out, err;
  run_cli({"simulate", "--games", std::to_string(kForcedGames), "--seed", "1"}, in, out, err);
  c.expect(out.str().find("defender wins 100 (100.0%)") != std::string::npos, "simulate summary");
  if (c.ok) c.detail = "100/100 games (4, 9), defender wins";
  return c;
}

Check board_oracle() {
  Check c;
  for (bool diagonals : {false, true}) {
    const BoardTopology& t = standard_topology(diagonals);
    std::set<std::array<int, 3>> lines;
    for (const MillLine& l : t.mill_lines()) {
      std::array<int, 3> ids{l[0].id(), l[1].id(), l[2].id()};
      std::sort(ids.begin(), ids.end());
      lines.insert(ids);
    }
    const auto want = oracle::mill_triples(diagonals);
    c.expect(lines == want && t.mill_lines().size() == want.size(), "mill lines differ");
    c.expect(want.size() == (diagonals ? 20u : 16u), "oracle found " + std::to_string(want.size()) + " lines");
    for (int id = 0; id < kPointCount; ++id) {
      std::set<int> got;
      for (Point q : t.adjacent(Point::from_id(id))) got.insert(q.id());
      c.expect(got == oracle::neighbours(id, diagonals), "adjacency of " + Point::from_id(id).name());
    }
  }
  if (c.ok) c.detail = "16/20 lines, 24/24 neighbour sets on both boards";
  return c;
}

Check fuzz() {
  Check c;
  long mills = 0, plies = 0;
  for (int seed = 1; seed <= kFuzzPlayouts; ++seed) {
    const playout::Report r = playout::run(static_cast<std::uint64_t>(seed), kFuzzMaxPlies);
    c.expect(r.violations.empty(), r.violations.empty() ? "" : r.violations.front());
    c.expect(r.terminated && r.plies <= kFuzzMaxPlies, "seed " + std::to_string(seed) + " did not end");
    mills += r.mills;
    plies += r.plies;
  }
  if (c.ok) c.detail = "0 violations, " + std::to_string(plies) + " plies, " + std::to_string(mills) + " mills";
  return c;
}

Check search_oracle() {
  Check c;
  for (int seed = 1; seed <= kSearchPositions; ++seed) {
    const ClassicState s = oracle::random_position(static_cast<std::uint64_t>(seed));
    for (int depth = 1; depth <= 3; ++depth) {
      SearchConfig cfg;
      cfg.max_depth = depth;
      const double got = search(s, cfg).value;
      const double want = oracle::best_root(s, depth).value;
      c.expect(got == want, "seed " + std::to_string(seed) + " depth " + std::to_string(depth));
    }
  }
  if (c.ok) c.detail = "300/300 root values";
  return c;
}

Check event_sourcing() {
  Check c;
  MatchService svc;
  std::mt19937_64 rng(2024);
  for (int game = 0; game < kEventMatches; ++game) {
    CreateMatchRequest req;
    req.profile = PlayerProfile{"p" + std::to_string(game), {}, {}, {}};
    req.mode = game % 3 == 0 ? MatchMode::Classic : MatchMode::Awareness;
    req.role = game % 2 ? Role::Defender : Role::Attacker;
    req.options.allow_reuse = game % 4 == 1;
    req.options.blind = game % 5 == 2;
    req.opponent = BotSpec{"random", static_cast<std::uint64_t>(game), 1};
    const SeatGrant g = svc.create_match(req);
    while (svc.get_state(g.match_id)["status"] != "finished") {
      const Json st = svc.get_state(g.match_id, g.session_token);
      Json cmd;
      if (req.mode == MatchMode::Classic) {
        const auto& legal = st["legalMoves"];
        cmd = {{"type", "move"}, {"move", legal[rng() % legal.size()]}};
      } else {
        const auto& mine = st["remaining"][std::string(to_string(g.role))];
        cmd = {{"type", g.role == Role::Attacker ? "attack" : "defend"}, {"token", mine[rng() % mine.size()]["id"]}};
      }
      svc.submit_command(g.match_id, g.session_token, cmd);
    }
    std::vector<MatchEvent> wire;
    for (const MatchEvent& e : svc.event_log(g.match_id)) {
      wire.push_back(event_from_json(Json::parse(event_to_json(e).dump())));
    }
    const EngineState rebuilt = replay_event_log(wire);
    const EngineState live = svc.engine_state(g.match_id);
    c.expect(rebuilt == live, "match " + std::to_string(game) + " state differs");
    if (const auto* aw = std::get_if<AwarenessState>(&rebuilt)) {
      const Json result = svc.get_state(g.match_id)["result"];
      c.expect(result["attackerScore"] == aw->attacker_score() && result["defenderScore"] == aw->defender_score(),
               "match " + std::to_string(game) + " totals differ");
    }
  }
  if (c.ok) c.detail = std::to_string(kEventMatches) + "/" + std::to_string(kEventMatches) + " logs rebuild state";
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
    double budget;  // seconds, 0 = untimed
  };
  const Criterion criteria[] = {
      {"sample-game-replay", sample_game_replay, kSampleGameBudget},
      {"draw-rule", draw_rule, 0},
      {"scoreboard-fixtures", published_scoreboard, 0},
      {"matrix-completeness", matrix_completeness, 0},
      {"forced-outcome", forced_outcome, kForcedBudget},
      {"board-oracle", board_oracle, 0},
      {"classic-fuzz", fuzz, kFuzzBudget},
      {"search-oracle", search_oracle, kSearchBudget},
      {"event-sourcing", event_sourcing, 0},
  };
  int passed = 0;
  for (const Criterion& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget > 0 && secs >= cr.budget) {
      c.ok = false;
      c.detail += " (over the " + std::to_string(static_cast<int>(cr.budget)) + " s budget)";
    }
    passed += c.ok ? 1 : 0;
    std::cout << (c.ok ? "PASS " : "FAIL ") << cr.name << ": " << c.detail << " [" << std::fixed
              << std::setprecision(3) << secs << " s]\n";
  }
  const int total = static_cast<int>(std::size(criteria));
  std::cout << passed << '/' << total << " criteria passed\n";
  return passed == total ? 0 : 1;
}
