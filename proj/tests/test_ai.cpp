#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "cybermoraba/ai.hpp"
#include "cybermoraba/policy.hpp"
#include "cybermoraba/transcript.hpp"
#include "search_oracle.hpp"

using namespace cybermoraba;

namespace {

Point P(const char* name) { return Point::from_name(name); }

std::vector<Point> pts(std::initializer_list<const char*> names) {
  std::vector<Point> out;
  for (const char* n : names) out.push_back(P(n));
  return out;
}

ClassicState position(std::initializer_list<const char*> attacker,
                      std::initializer_list<const char*> defender, int attacker_hand,
                      int defender_hand, Role to_move = Role::Attacker) {
  ClassicSetup setup;
  setup.attacker = pts(attacker);
  setup.defender = pts(defender);
  setup.attacker_hand = attacker_hand;
  setup.defender_hand = defender_hand;
  setup.to_move = to_move;
  return ClassicState::from_setup(standard_topology(false), setup);
}

SearchConfig depth(int d) {
  SearchConfig cfg;
  cfg.max_depth = d;
  return cfg;
}

}  // namespace

TEST(Evaluate, MatchesIndependentCount) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const ClassicState s = oracle::random_position(seed);
    for (Role r : {Role::Attacker, Role::Defender}) {
      EXPECT_EQ(slide_count(s, r), oracle::count_slides(s, r)) << seed;
      EXPECT_EQ(open_twos(s, r), oracle::count_open_twos(s, r)) << seed;
      EXPECT_EQ(evaluate(s, r, {}), oracle::static_value(s, r, {})) << seed;
    }
    EXPECT_EQ(evaluate(s, Role::Attacker, {}), -evaluate(s, Role::Defender, {}));
  }
}

TEST(Search, AgreesWithPlainMinimax) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ClassicState s = oracle::random_position(seed);
    for (int d = 1; d <= 3; ++d) {
      const SearchResult got = search(s, depth(d));
      const oracle::RootAnswer want = oracle::best_root(s, d);
      EXPECT_EQ(got.value, want.value) << "seed " << seed << " depth " << d;
      EXPECT_EQ(got.move, want.move) << "seed " << seed << " depth " << d << ": "
                                     << got.move.notation() << " vs " << want.move.notation();
    }
  }
}

TEST(Search, PruningVisitsFewerNodes) {
  const ClassicState s = oracle::random_position(11);
  const SearchResult r = search(s, depth(3));
  std::uint64_t full = 0;
  std::function<void(const ClassicState&, int)> count = [&](const ClassicState& n, int d) {
    ++full;
    if (terminal(n) || (d <= 0 && !n.pending_capture())) return;
    for (const Move& m : legal_moves(n)) count(apply_move(n, m), d - depth_cost(m));
  };
  for (const Move& m : legal_moves(s)) count(apply_move(s, m), 3 - depth_cost(m));
  EXPECT_LT(r.nodes, full);
}

TEST(Search, DepthOneCompletesAMill) {
  const ClassicState s = position({"a7", "d7"}, {"b2", "f2"}, 10, 10);
  const SearchResult r = search(s, depth(1));
  EXPECT_EQ(r.move, Move::place(P("g7")));
  EXPECT_EQ(r.value, oracle::best_root(s, 1).value);
}

TEST(Search, DepthTwoBlocksAnOpposingMill) {
  const ClassicState s = position({"d6", "f4"}, {"a1", "d1"}, 10, 10);
  const SearchResult r = search(s, depth(2));
  EXPECT_EQ(r.move, Move::place(P("g1")));
}

TEST(Search, CapturePicksFromEligiblePieces) {
  // After closing a7-d7-g7 the attacker must take a piece outside the
  // defender's b6-d6-f6 mill.
  ClassicState s = position({"a7", "d7"}, {"b6", "d6", "f6", "c3"}, 5, 5);
  s = apply_move(s, Move::place(P("g7")));
  ASSERT_TRUE(s.pending_capture());
  EXPECT_EQ(search(s, depth(1)).move, Move::capture(P("c3")));
}

TEST(Search, FindsImmediateWin) {
  // Slide g4-g7 closes a mill; the capture leaves the defender with two.
  const ClassicState s = position({"a7", "d7", "g4"}, {"c5", "e3", "b2"}, 0, 0);
  for (int d = 1; d <= 4; ++d) {
    const SearchResult r = search(s, depth(d));
    EXPECT_EQ(r.move, Move::slide(P("g4"), P("g7"))) << d;
    EXPECT_EQ(r.value, kWinScore - 2) << d;
  }
}

TEST(Search, LosingSideDelaysTheLoss) {
  // The defender to move cannot stop g4-g7 next turn; every reply loses at
  // ply 3, and the search reports exactly that.
  const ClassicState s = position({"a7", "d7", "g4"}, {"c5", "e3", "b2"}, 0, 0, Role::Defender);
  const SearchResult r = search(s, depth(2));
  EXPECT_EQ(r.value, oracle::best_root(s, 2).value);
  EXPECT_EQ(r.value, -(kWinScore - 3));
}

TEST(Search, ScalingWeightsKeepsTheMove) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const ClassicState s = oracle::random_position(seed);
    SearchConfig base = depth(2);
    SearchConfig scaled = base;
    scaled.weights = {base.weights.material * 4, base.weights.mobility * 4,
                      base.weights.mill_potential * 4};
    const SearchResult a = search(s, base);
    const SearchResult b = search(s, scaled);
    EXPECT_EQ(a.move, b.move) << seed;
    if (std::abs(a.value) < kWinScore / 2) {
      EXPECT_EQ(b.value, 4 * a.value) << seed;
    }
  }
}

TEST(Search, RejectsBadInput) {
  EXPECT_THROW(search(new_classic_game(standard_topology(false)), depth(0)), GameError);
  const ClassicState lost = position({"a7", "d7", "g7"}, {"c5", "e3"}, 0, 0);
  try {
    search(lost, depth(2));
    FAIL();
  } catch (const GameError& e) {
    EXPECT_EQ(e.code(), ErrorCode::game_over);
  }
}

TEST(Policies, GreedyDefenderTakesFirstWinningDefense) {
  AwarenessState s = submit_attack(new_awareness_match(), "A2", P("a7"));
  EXPECT_EQ(defender_policy_greedy(s), "D1");
  s = submit_defense(s, "D1").first;
  s = submit_attack(s, "A3", P("d7"));
  EXPECT_EQ(defender_policy_greedy(s), "D2");
  EXPECT_THROW(defender_policy_greedy(new_awareness_match()), GameError);
}

TEST(Policies, GreedyFallsBackToFirstRemainingToken) {
  // Only risky defenses remain: D6, D7, D8, D11.
  AwarenessOptions o;
  o.rounds = 13;
  AwarenessState s = new_awareness_match(default_catalog(), default_matrix(), o);
  const char* safe[] = {"D1", "D2", "D3", "D4", "D5", "D9", "D10", "D12", "D13"};
  int round = 0;
  for (const char* d : safe) {
    s = submit_attack(s, "A" + std::to_string(++round), *s.first_free_point());
    s = submit_defense(s, d).first;
  }
  s = submit_attack(s, "A10", *s.first_free_point());
  EXPECT_EQ(defender_policy_greedy(s), "D6");
}

TEST(Policies, ExpectimaxTiesResolveToCatalogOrder) {
  const AwarenessState s = new_awareness_match();
  for (const auto& a : s.remaining(Role::Attacker)) {
    EXPECT_DOUBLE_EQ(expected_attack_reward(s, a), 4.0 / 13.0);
  }
  EXPECT_EQ(attacker_policy_expectimax(s), "A1");
}

TEST(Policies, ToyMatrixExercisesBothPolicies) {
  auto catalog = std::make_shared<const TokenCatalog>(
      std::vector<Token>{{"A1", Role::Attacker, "Weak", "weak"},
                         {"A2", Role::Attacker, "Strong", "strong"}},
      std::vector<Token>{{"D1", Role::Defender, "Soft", "soft"},
                         {"D2", Role::Defender, "Hard", "hard"}});
  MatchupMatrix m;
  m.set("A1", "D1", {Role::Defender, "held"});
  m.set("A1", "D2", {Role::Defender, "held"});
  m.set("A2", "D1", {Role::Attacker, "broke through"});
  m.set("A2", "D2", {Role::Defender, "held"});
  AwarenessOptions o;
  o.rounds = 2;
  AwarenessState s =
      new_awareness_match(catalog, std::make_shared<const MatchupMatrix>(m), o);
  EXPECT_EQ(attacker_policy_expectimax(s), "A2");
  EXPECT_DOUBLE_EQ(expected_attack_reward(s, "A2"), 0.5);
  s = submit_attack(s, "A2", P("a7"));
  EXPECT_EQ(defender_policy_greedy(s), "D2");
  s = submit_defense(s, "D2").first;
  EXPECT_EQ(attacker_policy_expectimax(s), "A1");
}

TEST(Policies, BlindGreedyCountsUnseenAttacks) {
  AwarenessOptions o;
  o.blind = true;
  const AwarenessState s =
      submit_attack(new_awareness_match(default_catalog(), default_matrix(), o), "A1", P("a7"));
  EXPECT_EQ(defender_policy_greedy(s), "D1");
}

TEST(Policies, GreedyVersusExpectimaxIsForced) {
  Policy attacker = Policy::expectimax_attacker();
  Policy defender = Policy::greedy_defender();
  AwarenessState s = new_awareness_match();
  while (s.phase() != AwarenessPhase::Finished) {
    const AttackChoice c = attacker.choose_attack(s);
    s = submit_attack(s, c.token, c.point);
    s = submit_defense(s, defender.choose_defense(s)).first;
  }
  EXPECT_EQ(s.attacker_score(), 4);
  EXPECT_EQ(s.defender_score(), 9);
}

TEST(Policies, RandomIsReproducible) {
  auto play = [](std::uint64_t seed) {
    Policy a = Policy::random(seed), d = Policy::random(seed + 1);
    AwarenessState s = new_awareness_match();
    while (s.phase() != AwarenessPhase::Finished) {
      const AttackChoice c = a.choose_attack(s);
      s = submit_attack(s, c.token, c.point);
      s = submit_defense(s, d.choose_defense(s)).first;
    }
    return s;
  };
  EXPECT_EQ(play(42), play(42));
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::ostringstream os;
    write_transcript(play(seed), os);
    distinct.insert(os.str());
  }
  EXPECT_GT(distinct.size(), 1u);

  Policy p = Policy::random(9), q = Policy::random(9);
  ClassicState s = new_classic_game(standard_topology(false));
  for (int i = 0; i < 20; ++i) {
    const Move m = p.choose_move(s);
    EXPECT_EQ(m, q.choose_move(s));
    s = apply_move(s, m);
  }
}

TEST(Policies, ParseAndSeatSupport) {
  EXPECT_EQ(Policy::parse("minimax", 0, 2).name(), "minimax");
  EXPECT_EQ(Policy::parse("greedy-defender").name(), "greedy-defender");
  EXPECT_THROW(Policy::parse("oracle"), GameError);
  EXPECT_THROW(Policy::parse("minimax", 0, 0), GameError);
  EXPECT_TRUE(Policy::random(1).supports_awareness(Role::Attacker));
  EXPECT_TRUE(Policy::random(1).supports_classic());
  EXPECT_FALSE(Policy::greedy_defender().supports_awareness(Role::Attacker));
  EXPECT_FALSE(Policy::expectimax_attacker().supports_classic());
  EXPECT_FALSE(Policy::minimax().supports_awareness(Role::Defender));
  Policy g = Policy::greedy_defender();
  EXPECT_THROW(g.choose_attack(new_awareness_match()), GameError);
  Policy mm = Policy::minimax(depth(1));
  EXPECT_EQ(mm.choose_move(position({"a7", "d7"}, {"b2", "f2"}, 10, 10)), Move::place(P("g7")));
}
