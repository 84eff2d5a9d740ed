#include <algorithm>

#include <gtest/gtest.h>

#include "cybermoraba/classic.hpp"
#include "playout.hpp"

using namespace cybermoraba;

namespace {

Point P(const char* name) { return Point::from_name(name); }

bool contains(const std::vector<Move>& moves, const Move& m) {
  return std::find(moves.begin(), moves.end(), m) != moves.end();
}

const BoardTopology& board() { return standard_topology(false); }

}  // namespace

TEST(Role, OpponentIsAnInvolution) {
  for (Role r : {Role::Attacker, Role::Defender}) {
    EXPECT_NE(opponent(r), r);
    EXPECT_EQ(opponent(opponent(r)), r);
    EXPECT_EQ(role_from_string(to_string(r)), r);
  }
}

TEST(MoveNotation, RoundTrips) {
  for (const char* text : {"P:a7", "S:a7-d7", "C:g1", "S:c4-c3"}) {
    EXPECT_EQ(Move::parse(text).notation(), text);
  }
  EXPECT_EQ(Move::parse("S:a7-d7"), Move::slide(P("a7"), P("d7")));
  for (const char* bad : {"", "P:", "X:a7", "S:a7d7", "P:d4", "S:a7-z9", "Pa7"}) {
    EXPECT_THROW(Move::parse(bad), GameError) << bad;
  }
}

TEST(NewGame, InitialState) {
  const ClassicState s = new_classic_game(board(), Role::Attacker);
  EXPECT_EQ(s.hand(Role::Attacker), 12);
  EXPECT_EQ(s.hand(Role::Defender), 12);
  EXPECT_EQ(s.on_board(Role::Attacker) + s.on_board(Role::Defender), 0);
  EXPECT_EQ(s.phase(), Phase::Placement);
  EXPECT_EQ(s.to_move(), Role::Attacker);
  EXPECT_FALSE(s.pending_capture());
  EXPECT_EQ(legal_moves(s).size(), 24u);
  EXPECT_FALSE(terminal(s).has_value());
  for (int id = 0; id < kPointCount; ++id) EXPECT_FALSE(s.occupant(Point::from_id(id)));
}

TEST(NewGame, FirstMoverIsConfigurable) {
  EXPECT_EQ(new_classic_game(board(), Role::Defender).to_move(), Role::Defender);
}

TEST(ApplyMove, PlacementDecrementsHandAndPassesTurn) {
  const ClassicState s0 = new_classic_game(board());
  const ClassicState s1 = apply_move(s0, Move::place(P("a7")));
  EXPECT_EQ(s1.hand(Role::Attacker), 11);
  EXPECT_EQ(s1.occupant(P("a7")), Role::Attacker);
  EXPECT_EQ(s1.to_move(), Role::Defender);
  EXPECT_EQ(legal_moves(s1).size(), 23u);
  EXPECT_FALSE(contains(legal_moves(s1), Move::place(P("a7"))));
  EXPECT_EQ(s1.history().size(), 1u);
}

TEST(ApplyMove, IllegalMoveLeavesStateUntouched) {
  const ClassicState s0 = apply_move(new_classic_game(board()), Move::place(P("a7")));
  const ClassicState copy = s0;
  try {
    apply_move(s0, Move::place(P("a7")));
    FAIL() << "expected illegal_move";
  } catch (const GameError& e) {
    EXPECT_EQ(e.code(), ErrorCode::illegal_move);
  }
  EXPECT_THROW(apply_move(s0, Move::slide(P("d7"), P("a7"))), GameError);
  EXPECT_THROW(apply_move(s0, Move::capture(P("a7"))), GameError);
  EXPECT_EQ(s0, copy);
}

TEST(ApplyMove, CompletingAMillGrantsACapture) {
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("d7")};
  setup.defender = {P("b6"), P("f6")};
  setup.attacker_hand = 10;
  setup.defender_hand = 10;
  const ClassicState s = ClassicState::from_setup(board(), setup);
  const ClassicState after = apply_move(s, Move::place(P("g7")));
  EXPECT_TRUE(after.pending_capture());
  EXPECT_EQ(after.to_move(), Role::Attacker);
  const auto moves = legal_moves(after);
  ASSERT_EQ(moves.size(), 2u);
  EXPECT_TRUE(contains(moves, Move::capture(P("b6"))));
  EXPECT_TRUE(contains(moves, Move::capture(P("f6"))));
  EXPECT_FALSE(terminal(after).has_value());

  const ClassicState captured = apply_move(after, Move::capture(P("f6")));
  EXPECT_FALSE(captured.pending_capture());
  EXPECT_EQ(captured.to_move(), Role::Defender);
  EXPECT_EQ(captured.on_board(Role::Defender), 1);
  EXPECT_EQ(captured.captured(Role::Defender), 1);
  EXPECT_TRUE(playout::conserved(captured));
}

TEST(ApplyMove, DoubleMillStillCapturesOnce) {
  // g7 closes a7-d7-g7 and g7-g4-g1 at once.
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("d7"), P("g4"), P("g1")};
  setup.defender = {P("b6"), P("f6"), P("b2"), P("f2")};
  setup.attacker_hand = 8;
  setup.defender_hand = 8;
  const ClassicState s = ClassicState::from_setup(board(), setup);
  ClassicState after = apply_move(s, Move::place(P("g7")));
  ASSERT_TRUE(after.pending_capture());
  after = apply_move(after, Move::capture(P("b6")));
  EXPECT_FALSE(after.pending_capture());
  EXPECT_EQ(after.to_move(), Role::Defender);
  EXPECT_EQ(after.on_board(Role::Defender), 3);
}

TEST(Capture, PiecesInMillsAreProtected) {
  ClassicSetup setup;
  setup.attacker = {P("a1"), P("d1")};
  setup.defender = {P("a7"), P("d7"), P("g7"), P("b4")};
  setup.attacker_hand = 5;
  setup.defender_hand = 4;
  const ClassicState s = ClassicState::from_setup(board(), setup);
  const ClassicState after = apply_move(s, Move::place(P("g1")));
  ASSERT_TRUE(after.pending_capture());
  EXPECT_EQ(legal_moves(after), std::vector<Move>{Move::capture(P("b4"))});
}

TEST(Capture, AllInMillsMakesAllCapturable) {
  ClassicSetup setup;
  setup.attacker = {P("a1"), P("d1")};
  setup.defender = {P("a7"), P("d7"), P("g7")};
  setup.attacker_hand = 5;
  setup.defender_hand = 5;
  const ClassicState after =
      apply_move(ClassicState::from_setup(board(), setup), Move::place(P("g1")));
  EXPECT_EQ(legal_moves(after).size(), 3u);
}

TEST(Capture, ThreePieceSideIsFreelyCapturable) {
  ClassicSetup setup;
  setup.attacker = {P("a1"), P("d1")};
  setup.defender = {P("a7"), P("d7"), P("g7")};
  setup.attacker_hand = 1;
  const ClassicState after =
      apply_move(ClassicState::from_setup(board(), setup), Move::place(P("g1")));
  ASSERT_TRUE(after.pending_capture());
  EXPECT_EQ(after.total(Role::Defender), 3);
  EXPECT_EQ(legal_moves(after).size(), 3u);
  const ClassicState done = apply_move(after, Move::capture(P("d7")));
  EXPECT_EQ(terminal(done)->winner, Role::Attacker);
}

TEST(Terminal, TooFewPiecesLoses) {
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("d7"), P("g7"), P("a1")};
  setup.defender = {P("b6"), P("f2")};
  setup.to_move = Role::Attacker;
  const auto out = terminal(ClassicState::from_setup(board(), setup));
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->winner, Role::Attacker);
  EXPECT_EQ(out->reason, ClassicOutcome::Reason::TooFewPieces);
}

TEST(Terminal, ExactlyThreePiecesIsNotALoss) {
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("d6"), P("g7"), P("a1")};
  setup.defender = {P("b6"), P("f2"), P("c3")};
  setup.to_move = Role::Defender;
  EXPECT_FALSE(terminal(ClassicState::from_setup(board(), setup)).has_value());
}

TEST(Terminal, ImmobilizedPlayerLoses) {
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("g7"), P("a1")};
  setup.defender = {P("d7"), P("a4"), P("g4"), P("d1")};
  setup.to_move = Role::Attacker;
  const ClassicState s = ClassicState::from_setup(board(), setup);
  EXPECT_EQ(s.phase(), Phase::Movement);
  EXPECT_TRUE(legal_moves(s).empty());
  const auto out = terminal(s);
  ASSERT_TRUE(out.has_value());
  EXPECT_EQ(out->winner, Role::Defender);
  EXPECT_EQ(out->reason, ClassicOutcome::Reason::Immobilized);
  EXPECT_THROW(apply_move(s, Move::slide(P("a7"), P("d7"))), GameError);
}

TEST(Terminal, MidPlacementIsOpen) {
  ClassicState s = new_classic_game(board());
  for (const char* p : {"a7", "b6", "c5", "d6"}) s = apply_move(s, Move::place(P(p)));
  EXPECT_FALSE(terminal(s).has_value());
}

TEST(Terminal, ThreefoldRepetitionDraws) {
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("b4"), P("c3")};
  setup.defender = {P("g1"), P("f4"), P("e5")};
  ClassicState s = ClassicState::from_setup(board(), setup);
  const std::vector<Move> cycle{Move::slide(P("a7"), P("d7")), Move::slide(P("g1"), P("d1")),
                                Move::slide(P("d7"), P("a7")), Move::slide(P("d1"), P("g1"))};
  int plies = 0;
  while (!terminal(s)) {
    s = apply_move(s, cycle[plies % 4]);
    ++plies;
    ASSERT_LT(plies, 20);
  }
  EXPECT_EQ(plies, 8);  // start position seen at plies 0, 4, 8
  EXPECT_TRUE(terminal(s)->is_draw());
  EXPECT_EQ(terminal(s)->reason, ClassicOutcome::Reason::Repetition);
}

TEST(Terminal, QuietMoveLimitDraws) {
  ClassicRules rules;
  rules.repetition_limit = 1000;
  rules.no_capture_draw_plies = 6;
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("b4"), P("c3")};
  setup.defender = {P("g1"), P("f4"), P("e5")};
  ClassicState s = ClassicState::from_setup(board(), setup, rules);
  const std::vector<Move> cycle{Move::slide(P("a7"), P("d7")), Move::slide(P("g1"), P("d1")),
                                Move::slide(P("d7"), P("a7")), Move::slide(P("d1"), P("g1"))};
  int plies = 0;
  while (!terminal(s)) s = apply_move(s, cycle[plies++ % 4]);
  EXPECT_EQ(plies, 6);
  EXPECT_EQ(terminal(s)->reason, ClassicOutcome::Reason::NoCaptureLimit);
}

TEST(Flying, OffByDefaultOnWhenRequested) {
  ClassicSetup setup;
  setup.attacker = {P("a7"), P("b4"), P("c3")};
  setup.defender = {P("g1"), P("f4"), P("e5"), P("d6")};
  const auto walking = legal_moves(ClassicState::from_setup(board(), setup));
  ClassicRules rules;
  rules.flying = true;
  const auto flying = legal_moves(ClassicState::from_setup(board(), setup, rules));
  EXPECT_FALSE(contains(walking, Move::slide(P("a7"), P("g7"))));
  EXPECT_TRUE(contains(flying, Move::slide(P("a7"), P("g7"))));
  EXPECT_EQ(flying.size(), 3u * 17u);
}

TEST(Setup, RejectsInconsistentPositions) {
  ClassicSetup setup;
  setup.attacker = {P("a7")};
  setup.defender = {P("a7")};
  EXPECT_THROW(ClassicState::from_setup(board(), setup), GameError);
  ClassicSetup too_many;
  too_many.attacker = {P("a7")};
  too_many.attacker_hand = 12;
  EXPECT_THROW(ClassicState::from_setup(board(), too_many), GameError);
}

TEST(Playout, RandomGamesKeepInvariants) {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const auto rep = playout::run(seed);
    for (const auto& v : rep.violations) ADD_FAILURE() << v;
    EXPECT_TRUE(rep.terminated);
  }
}

TEST(Playout, DiagonalBoardKeepsInvariants) {
  for (std::uint64_t seed = 500; seed < 550; ++seed) {
    const auto rep = playout::run(seed, 1000, true);
    for (const auto& v : rep.violations) ADD_FAILURE() << v;
  }
}
