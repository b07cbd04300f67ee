#include "bmn/engine.hpp"

#include <algorithm>
#include <cassert>

namespace bmn {

TrickOutcome run_trick(const RuleSpec& rules, OrderedPile& left,
                       OrderedPile& right, int starter,
                       std::vector<Card>& table_played) {
  if (left.empty() || right.empty()) {
    throw std::invalid_argument("run_trick: state is absorbing");
  }
  const std::size_t total = left.size() + right.size() + table_played.size();

  RuleCursor cursor(rules);
  int actor = starter;
  TrickOutcome out;
  for (;;) {
    OrderedPile& deck = actor == 1 ? left : right;
    if (deck.empty()) {
      out.kind = TrickKind::kGameOver;
      out.winner_or_loser = actor;
      break;
    }
    table_played.push_back(deck.pop_top());
    ++out.moves;
    RuleDecision decision = cursor.feed(table_played.back());
    if (decision.verdict == Verdict::kFinish) {
      out.kind = TrickKind::kTaken;
      out.winner_or_loser = to_absolute(decision.who, starter);
      break;
    }
    actor = to_absolute(decision.who, starter);
  }
  assert(left.size() + right.size() + table_played.size() == total);
  (void)total;
  return out;
}

TrickResult rollout(const RuleSpec& rules, const Split& state, int starter) {
  TrickResult result;
  result.left_rem = state.left;
  result.right_rem = state.right;
  std::vector<Card> played;
  TrickOutcome out =
      run_trick(rules, result.left_rem, result.right_rem, starter, played);
  result.kind = out.kind;
  result.winner_or_loser = out.winner_or_loser;
  result.moves = out.moves;
  result.table.cards.assign(played.rbegin(), played.rend());
  return result;
}

Split successor_from_taken(const TrickResult& trick) {
  Split next{trick.left_rem, trick.right_rem};
  OrderedPile& winner = trick.winner_or_loser == 1 ? next.left : next.right;
  winner.append_bottom(trick.table.cards);
  return next;
}

StepTarget canonical_successor(const RuleSpec& rules, const Split& state,
                               int starter) {
  TrickResult trick = rollout(rules, state, starter);
  if (trick.kind == TrickKind::kGameOver) {
    return SinkId{trick.winner_or_loser};
  }
  return successor_from_taken(trick);
}

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("p must lie strictly inside (0,1)");
  }
}

}  // namespace

std::pair<StepTarget, int> step_stochastic(const RuleSpec& rules,
                                           const Split& state, double p,
                                           Rng& rng) {
  require_probability(p);
  const int starter = rng.bernoulli(p) ? 1 : 2;
  TrickResult trick = rollout(rules, state, starter);
  if (trick.kind == TrickKind::kGameOver) {
    return {SinkId{trick.winner_or_loser}, trick.moves};
  }
  shuffle_cards(trick.table.cards, rng);
  return {successor_from_taken(trick), trick.moves};
}

std::pair<StepTarget, int> step_stochastic(const RuleSpec& rules,
                                           const Split& state, double p,
                                           SeedSpec seed) {
  Rng rng(seed);
  return step_stochastic(rules, state, p, rng);
}

GameRecord play_game(const RuleSpec& rules, const Split& deal, double p,
                     Rng& rng, std::uint64_t move_cap) {
  require_probability(p);
  if (move_cap == 0) {
    throw std::invalid_argument("play_game: move_cap must be positive");
  }

  OrderedPile left = deal.left;
  OrderedPile right = deal.right;
  std::vector<Card> table;
  GameRecord record;
  for (;;) {
    if (left.empty() || right.empty()) {
      record.winner = left.empty() ? 2 : 1;
      return record;
    }
    if (record.moves >= move_cap) {
      record.capped = true;
      record.winner = 0;
      record.moves = move_cap;
      return record;
    }
    const int starter = rng.bernoulli(p) ? 1 : 2;
    table.clear();
    TrickOutcome out = run_trick(rules, left, right, starter, table);
    record.moves += static_cast<std::uint64_t>(out.moves);
    ++record.tricks;
    if (out.kind == TrickKind::kGameOver) {
      record.winner = other_player(out.winner_or_loser);
      return record;
    }
    // Same shuffle basis as step_stochastic (most-recent-first), so a game
    // equals iterating single steps on one stream.
    std::reverse(table.begin(), table.end());
    shuffle_cards(table, rng);
    OrderedPile& winner = out.winner_or_loser == 1 ? left : right;
    winner.append_bottom(table);
  }
}

GameRecord play_game(const RuleSpec& rules, const Split& deal, double p,
                     SeedSpec seed, std::uint64_t move_cap) {
  Rng rng(seed);
  return play_game(rules, deal, p, rng, move_cap);
}

}  // namespace bmn
