// The rule function F: given the ordered table pile, decide whether the trick
// continues (and who plays next) or finishes (and who takes it). Players are
// indexed relative to the trick's starter, which makes F a genuine function
// of the pile; the engine maps the result through the trick's absolute
// starter.
//
// Two modes:
//   * kRelative — the configurable penalty-card family. Players alternate on
//     ordinary cards; a card of penalty k obliges the other player to pay k
//     cards; a penalty card played as payment replaces the obligation and
//     swaps the payer; an obligation paid down to zero finishes the trick in
//     favour of the last penalty card's owner.
//   * kAbsoluteFixture — an explicit decision table keyed by the pile's rank
//     sequence. Exists to build asymmetric rules for negative tests; the
//     penalty family alone cannot violate the nondegeneracy condition.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "bmn/core.hpp"

namespace bmn {

enum class RelativePlayer { kStarter, kOpponent };

inline RelativePlayer other(RelativePlayer p) {
  return p == RelativePlayer::kStarter ? RelativePlayer::kOpponent
                                       : RelativePlayer::kStarter;
}

// Maps a relative player through the trick's absolute starter (1 or 2).
inline int to_absolute(RelativePlayer p, int starter) {
  return p == RelativePlayer::kStarter ? starter : other_player(starter);
}

enum class Verdict { kContinue, kFinish };

struct RuleDecision {
  Verdict verdict = Verdict::kContinue;
  RelativePlayer who = RelativePlayer::kStarter;  // next player / trick winner

  friend bool operator==(RuleDecision a, RuleDecision b) {
    return a.verdict == b.verdict && a.who == b.who;
  }
};

enum class RuleIndexing { kRelative, kAbsoluteFixture };

struct RuleSpec {
  DeckSpec deck;
  RuleIndexing indexing = RuleIndexing::kRelative;
  // Fixture mode only: decision per pile, keyed by the pile's rank names
  // most-recent-first, comma separated (e.g. "Q,J" = J played first).
  std::map<std::string, RuleDecision> fixture_table;
  // Marks a deliberately penalty-free spec (pure alternation; tricks never
  // finish and every game ends by card exhaustion).
  bool court_free = false;

  friend bool operator==(const RuleSpec& a, const RuleSpec& b) {
    return a.deck == b.deck && a.indexing == b.indexing &&
           a.fixture_table == b.fixture_table && a.court_free == b.court_free;
  }
};

// Payment machine snapshot after a card: obligation_remaining == 0 means
// plain alternation; otherwise `creditor` played the active penalty card and
// the other player still owes this many cards.
struct PaymentState {
  int obligation_remaining = 0;
  RelativePlayer creditor = RelativePlayer::kStarter;
};

struct PileAnnotation {
  std::vector<RelativePlayer> owners;     // per card, in play order
  std::vector<PaymentState> mode_trace;   // machine state after each card
};

// Incremental form of F used by the trick engine: feed cards in play order,
// read the decision after each. Equivalent to evaluating every prefix from
// scratch.
class RuleCursor {
 public:
  explicit RuleCursor(const RuleSpec& rules);

  // `next_actor()` plays card c; returns the decision following it.
  RuleDecision feed(Card c);
  RelativePlayer next_actor() const { return actor_; }
  const PaymentState& payment() const { return payment_; }

 private:
  const RuleSpec* rules_;
  RelativePlayer actor_ = RelativePlayer::kStarter;
  PaymentState payment_;
  std::string fixture_key_;  // fixture mode: rank names most-recent-first
};

// F itself. `pile` is most-recent-first. Replays oldest-card-first; throws
// std::invalid_argument if a card is not in the deck or some proper prefix
// already finishes (the pile is then not a play sequence the engine could
// have produced).
RuleDecision evaluate(const RuleSpec& rules, const OrderedPile& pile);

// Owner and machine-state replay for a consistent pile; same errors.
PileAnnotation annotate(const RuleSpec& rules, const OrderedPile& pile);

// Well-formedness diagnostics (returned, never thrown): empty deck,
// non-positive counts, duplicate rank names, negative penalties, penalty-free
// specs not flagged court-free, partial fixture tables.
std::vector<std::string> validate(const RuleSpec& rules);

// The classical 52-card game: ranks 2..10 ordinary, J/Q/K/A with penalties
// 1/2/3/4, four copies each.
RuleSpec classical_rules();

// Degenerate two-card fixture: every one-card pile finishes in favour of the
// starter, so both 1-1 states map to themselves under either starter.
RuleSpec stuck_rules();

}  // namespace bmn
