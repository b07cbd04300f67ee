// Trick rollout and game simulation. One "move" is one card placed on the
// table; game length is counted in moves. A trick starts with the starter's
// top card and follows the rule function until it finishes (the winner takes
// the pile) or the player required to act has no cards (that player loses
// immediately).

#pragma once

#include <cstdint>
#include <utility>
#include <variant>

#include "bmn/core.hpp"
#include "bmn/rules.hpp"

namespace bmn {

enum class TrickKind { kTaken, kGameOver };

struct TrickResult {
  TrickKind kind = TrickKind::kTaken;
  int winner_or_loser = 0;  // absolute player: winner if taken, loser if over
  OrderedPile left_rem;
  OrderedPile right_rem;
  OrderedPile table;  // most-recent-first
  int moves = 0;      // cards placed this trick
};

// Successor of a non-absorbing state: either the next split or a loser sink.
using StepTarget = std::variant<Split, SinkId>;

struct GameRecord {
  int winner = 0;  // 1 or 2; 0 when capped
  bool capped = false;
  std::uint64_t moves = 0;
  std::uint64_t tricks = 0;
};

// Allocation-light core used by every simulation loop: plays one trick in
// place, moving cards from the decks onto `table_played` (appended in play
// order). The caller applies the pickup convention afterwards.
struct TrickOutcome {
  TrickKind kind = TrickKind::kTaken;
  int winner_or_loser = 0;
  int moves = 0;
};
TrickOutcome run_trick(const RuleSpec& rules, OrderedPile& left,
                       OrderedPile& right, int starter,
                       std::vector<Card>& table_played);

// Deterministic trick from a non-absorbing state with the given starter.
TrickResult rollout(const RuleSpec& rules, const Split& state, int starter);

// The winner's remaining deck with the trick's table appended at the bottom
// in most-recent-first order, so the first-played card ends up at the very
// bottom of the deck.
Split successor_from_taken(const TrickResult& trick);

// rollout + unshuffled pickup; GAME_OVER becomes the loser's sink.
StepTarget canonical_successor(const RuleSpec& rules, const Split& state,
                               int starter);

// One step of the randomized game: Bernoulli(p) picks the starter (player 1
// with probability p), the trick is rolled out, and a taken pile is shuffled
// uniformly before returning to the winner's deck. Returns the successor and
// the number of cards placed.
std::pair<StepTarget, int> step_stochastic(const RuleSpec& rules,
                                           const Split& state, double p,
                                           SeedSpec seed);
std::pair<StepTarget, int> step_stochastic(const RuleSpec& rules,
                                           const Split& state, double p,
                                           Rng& rng);

// Full randomized game from `deal`: a fresh Bernoulli trial before every
// trick, shuffled pickups, until one player holds everything, a mid-trick
// exhaustion occurs, or `move_cap` is reached at a trick boundary (the
// record is then capped with moves clamped to the cap).
GameRecord play_game(const RuleSpec& rules, const Split& deal, double p,
                     SeedSpec seed, std::uint64_t move_cap);
GameRecord play_game(const RuleSpec& rules, const Split& deal, double p,
                     Rng& rng, std::uint64_t move_cap);

}  // namespace bmn
