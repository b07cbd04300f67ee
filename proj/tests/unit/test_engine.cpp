#include <set>

#include "bmn/engine.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace bmn;
using fixtures::state;

// MINI-1 deck throughout: P has penalty 1; N0, N1 are the ordinary copies.

TEST_CASE("rollout: penalty paid, starter takes the trick") {
  RuleSpec rules = fixtures::mini1();
  TrickResult t = rollout(rules, state(rules, "L:P0,N0|R:N1"), 1);
  CHECK(t.kind == TrickKind::kTaken);
  CHECK(t.winner_or_loser == 1);
  CHECK(encode_pile(rules.deck, t.table) == "N1,P0");  // most-recent-first
  CHECK(encode_pile(rules.deck, t.left_rem) == "N0");
  CHECK(t.right_rem.empty());
  CHECK(t.moves == 2);
}

TEST_CASE("rollout: opponent cannot pay, game over mid-trick") {
  RuleSpec rules = fixtures::mini1();
  TrickResult t = rollout(rules, state(rules, "L:N0,P0|R:N1"), 1);
  CHECK(t.kind == TrickKind::kGameOver);
  CHECK(t.winner_or_loser == 2);  // loser
  CHECK(t.moves == 3);
}

TEST_CASE("rollout: starter two, alternation exhausts player two") {
  RuleSpec rules = fixtures::mini1();
  TrickResult t = rollout(rules, state(rules, "L:N0,P0|R:N1"), 2);
  CHECK(t.kind == TrickKind::kGameOver);
  CHECK(t.winner_or_loser == 2);
  CHECK(t.moves == 2);
}

TEST_CASE("rollout: refuses absorbing states") {
  RuleSpec rules = fixtures::mini1();
  CHECK_THROWS_AS(rollout(rules, state(rules, "L:N0,N1,P0|R:"), 1),
                  std::invalid_argument);
}

TEST_CASE("rollout conserves the deck and produces consistent piles") {
  RuleSpec rules = fixtures::jq5();
  Rng rng(SeedSpec{4, 0});
  for (int trial = 0; trial < 100; ++trial) {
    Split s = deal(rules.deck, 1 + (int)rng.next_below(4), rng);
    for (int starter = 1; starter <= 2; ++starter) {
      TrickResult t = rollout(rules, s, starter);
      Split rem{t.left_rem, t.right_rem};
      CHECK(conserves_deck(rules.deck, rem, &t.table.cards));
      CHECK(t.moves == (int)t.table.size());
      if (t.kind == TrickKind::kTaken) {
        // Every proper oldest-first prefix continues; the pile finishes.
        for (std::size_t keep = 1; keep < t.table.size(); ++keep) {
          OrderedPile prefix;
          prefix.cards.assign(t.table.cards.end() - keep,
                              t.table.cards.end());
          CHECK(evaluate(rules, prefix).verdict == Verdict::kContinue);
        }
        RuleDecision full = evaluate(rules, t.table);
        CHECK(full.verdict == Verdict::kFinish);
        CHECK(to_absolute(full.who, starter) == t.winner_or_loser);
      }
    }
  }
}

TEST_CASE("rollout: mirror symmetry of relative rules") {
  RuleSpec rules = fixtures::mini1();
  for (const Split& s : enumerate_splits(rules.deck)) {
    if (s.absorbing()) continue;
    for (int starter = 1; starter <= 2; ++starter) {
      TrickResult a = rollout(rules, s, starter);
      TrickResult b = rollout(rules, s.mirrored(), other_player(starter));
      CHECK(a.kind == b.kind);
      CHECK(a.winner_or_loser == other_player(b.winner_or_loser));
      CHECK(a.moves == b.moves);
      CHECK(a.table == b.table);
      CHECK(a.left_rem == b.right_rem);
      CHECK(a.right_rem == b.left_rem);
    }
  }
}

TEST_CASE("canonical_successor: unshuffled pickup, first played at the bottom") {
  RuleSpec rules = fixtures::mini1();
  StepTarget t = canonical_successor(rules, state(rules, "L:P0,N0|R:N1"), 1);
  REQUIRE(std::holds_alternative<Split>(t));
  CHECK(encode_state(rules.deck, std::get<Split>(t)) == "L:N0,N1,P0|R:");

  StepTarget sink = canonical_successor(rules, state(rules, "L:N0,P0|R:N1"), 1);
  REQUIRE(std::holds_alternative<SinkId>(sink));
  CHECK(std::get<SinkId>(sink).loser == 2);
}

TEST_CASE("canonical_successor: court-free tricks only reach sinks") {
  RuleSpec rules = fixtures::court_free(2);
  Split s = state(rules, "L:N0|R:N1");
  for (int starter = 1; starter <= 2; ++starter) {
    StepTarget t = canonical_successor(rules, s, starter);
    CHECK(std::holds_alternative<SinkId>(t));
  }
}

TEST_CASE("step_stochastic: both branches of a doomed state hit the sink") {
  RuleSpec rules = fixtures::mini1();
  Split s = state(rules, "L:N0,P0|R:N1");
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    auto [target, moves] = step_stochastic(rules, s, 0.5, SeedSpec{seed, 0});
    REQUIRE(std::holds_alternative<SinkId>(target));
    CHECK(std::get<SinkId>(target).loser == 2);
    CHECK((moves == 2 || moves == 3));
  }
}

TEST_CASE("step_stochastic: two-card deck absorbs in one step of two moves") {
  RuleSpec rules = fixtures::pn2();
  Split s = state(rules, "L:P0|R:N0");
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    auto [target, moves] = step_stochastic(rules, s, 0.5, SeedSpec{seed, 3});
    CHECK(moves == 2);
    if (const Split* split = std::get_if<Split>(&target)) {
      CHECK(split->absorbing());
    }
  }
}

TEST_CASE("step_stochastic: agrees with the canonical successor's multiset "
          "and hits it with the identity permutation") {
  RuleSpec rules = fixtures::mini1();
  Split s = state(rules, "L:P0,N0|R:N1");
  StepTarget canonical = canonical_successor(rules, s, 1);
  const Split& canon = std::get<Split>(canonical);

  bool exact_hit = false;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    auto [target, moves] = step_stochastic(rules, s, 0.999, SeedSpec{seed, 9});
    if (!std::holds_alternative<Split>(target)) continue;  // rare starter 2
    const Split& got = std::get<Split>(target);
    CHECK(conserves_deck(rules.deck, got));
    CHECK(got.left.size() == canon.left.size());
    exact_hit |= got == canon;
  }
  CHECK(exact_hit);
}

TEST_CASE("step_stochastic: rejects p outside (0,1)") {
  RuleSpec rules = fixtures::pn2();
  Split s = state(rules, "L:P0|R:N0");
  CHECK_THROWS_AS(step_stochastic(rules, s, 0.0, SeedSpec{1, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(step_stochastic(rules, s, 1.0, SeedSpec{1, 1}),
                  std::invalid_argument);
}

TEST_CASE("play_game: two-card games always end after two moves") {
  RuleSpec rules = fixtures::pn2();
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    for (double p : {0.3, 0.5, 0.7}) {
      GameRecord r = play_game(rules, state(rules, "L:P0|R:N0"), p,
                               SeedSpec{seed, 0}, 1000);
      CHECK_FALSE(r.capped);
      CHECK(r.moves == 2);
      CHECK((r.winner == 1 || r.winner == 2));
    }
  }
}

TEST_CASE("play_game: empty left deal loses immediately") {
  RuleSpec rules = fixtures::pn2();
  GameRecord r = play_game(rules, state(rules, "L:|R:N0,P0"), 0.5,
                           SeedSpec{0, 0}, 1000);
  CHECK(r.winner == 2);
  CHECK(r.moves == 0);
  CHECK(r.tricks == 0);
}

TEST_CASE("play_game equals iterating single stochastic steps on one stream") {
  RuleSpec rules = fixtures::jq5();
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    Rng game_rng(SeedSpec{seed, 5});
    Split start = deal(rules.deck, 2, game_rng);
    GameRecord whole = play_game(rules, start, 0.5, game_rng, 100000);

    Rng step_rng(SeedSpec{seed, 5});
    Split replay = deal(rules.deck, 2, step_rng);
    std::uint64_t moves = 0;
    std::uint64_t tricks = 0;
    int winner = 0;
    Split current = replay;
    for (;;) {
      if (current.left.empty() || current.right.empty()) {
        winner = current.left.empty() ? 2 : 1;
        break;
      }
      auto [target, trick_moves] = step_stochastic(rules, current, 0.5,
                                                   step_rng);
      moves += (std::uint64_t)trick_moves;
      ++tricks;
      if (const SinkId* sink = std::get_if<SinkId>(&target)) {
        winner = other_player(sink->loser);
        break;
      }
      current = std::get<Split>(target);
    }
    CHECK(whole.winner == winner);
    CHECK(whole.moves == moves);
    CHECK(whole.tricks == tricks);
  }
}

TEST_CASE("play_game: capped games clamp the move count to the cap") {
  RuleSpec rules = fixtures::jq5();
  bool saw_capped = false;
  for (std::uint64_t seed = 0; seed < 200 && !saw_capped; ++seed) {
    Rng rng(SeedSpec{seed, 8});
    Split start = deal(rules.deck, 2, rng);
    GameRecord r = play_game(rules, start, 0.5, rng, 1);
    if (r.capped) {
      saw_capped = true;
      CHECK(r.moves == 1);
      CHECK(r.winner == 0);
    }
  }
  CHECK(saw_capped);
}
