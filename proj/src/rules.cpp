#include "bmn/rules.hpp"

#include <algorithm>
#include <set>

namespace bmn {

RuleCursor::RuleCursor(const RuleSpec& rules) : rules_(&rules) {}

RuleDecision RuleCursor::feed(Card c) {
  rules_->deck.card_index(c);  // throws if the card is not in the deck

  if (rules_->indexing == RuleIndexing::kAbsoluteFixture) {
    std::string key = rules_->deck.rank_name(c.rank_id);
    if (!fixture_key_.empty()) key += "," + fixture_key_;
    fixture_key_ = std::move(key);
    auto it = rules_->fixture_table.find(fixture_key_);
    if (it == rules_->fixture_table.end()) {
      throw std::invalid_argument("fixture table has no entry for pile '" +
                                  fixture_key_ + "'");
    }
    if (it->second.verdict == Verdict::kContinue) actor_ = it->second.who;
    return it->second;
  }

  const RelativePlayer played_by = actor_;
  const int penalty = rules_->deck.penalty_of(c.rank_id);
  if (penalty > 0) {
    // A fresh obligation; any payment in progress is discarded.
    payment_ = PaymentState{penalty, played_by};
    actor_ = other(played_by);
    return RuleDecision{Verdict::kContinue, actor_};
  }
  if (payment_.obligation_remaining > 0) {
    --payment_.obligation_remaining;
    if (payment_.obligation_remaining == 0) {
      return RuleDecision{Verdict::kFinish, payment_.creditor};
    }
    return RuleDecision{Verdict::kContinue, actor_};  // same payer continues
  }
  actor_ = other(actor_);
  return RuleDecision{Verdict::kContinue, actor_};
}

namespace {

// Shared replay: walks the pile oldest-card-first, optionally collecting the
// annotation, and rejects piles whose proper prefix already finishes.
RuleDecision replay(const RuleSpec& rules, const OrderedPile& pile,
                    PileAnnotation* annotation) {
  if (pile.empty()) {
    throw std::invalid_argument("evaluate: pile must be non-empty");
  }
  RuleCursor cursor(rules);
  RuleDecision decision;
  for (std::size_t i = pile.cards.size(); i-- > 0;) {
    if (annotation) annotation->owners.push_back(cursor.next_actor());
    decision = cursor.feed(pile.cards[i]);
    if (annotation) annotation->mode_trace.push_back(cursor.payment());
    if (decision.verdict == Verdict::kFinish && i != 0) {
      throw std::invalid_argument(
          "pile is not a consistent play sequence: a proper prefix already "
          "finishes the trick");
    }
  }
  return decision;
}

}  // namespace

RuleDecision evaluate(const RuleSpec& rules, const OrderedPile& pile) {
  return replay(rules, pile, nullptr);
}

PileAnnotation annotate(const RuleSpec& rules, const OrderedPile& pile) {
  PileAnnotation annotation;
  replay(rules, pile, &annotation);
  return annotation;
}

namespace {

// Fixture totality: walk every rank sequence reachable through CONTINUE
// entries (bounded by the deck's rank counts) and report missing keys.
void check_fixture_totality(const RuleSpec& rules, std::vector<int>& used,
                            const std::string& suffix_key,
                            std::vector<std::string>& diags) {
  for (std::size_t r = 0; r < rules.deck.ranks.size(); ++r) {
    if (used[r] >= rules.deck.ranks[r].count) continue;
    std::string key = rules.deck.ranks[r].name;
    if (!suffix_key.empty()) key += "," + suffix_key;
    auto it = rules.fixture_table.find(key);
    if (it == rules.fixture_table.end()) {
      diags.push_back("partial fixture table: no entry for pile '" + key +
                      "'");
      continue;
    }
    if (it->second.verdict == Verdict::kContinue) {
      ++used[r];
      check_fixture_totality(rules, used, key, diags);
      --used[r];
    }
  }
}

}  // namespace

std::vector<std::string> validate(const RuleSpec& rules) {
  std::vector<std::string> diags;
  const DeckSpec& deck = rules.deck;

  if (deck.total_count() == 0) diags.push_back("empty deck");

  std::set<std::string> names;
  bool any_penalty = false;
  for (const RankSpec& r : deck.ranks) {
    if (!names.insert(r.name).second) {
      diags.push_back("duplicate rank name '" + r.name + "'");
    }
    if (r.count <= 0) {
      diags.push_back("rank '" + r.name + "' has non-positive count " +
                      std::to_string(r.count));
    } else if (r.count > 255) {
      diags.push_back("rank '" + r.name + "' has count " +
                      std::to_string(r.count) +
                      " beyond the 255 copies a card id can carry");
    }
    if (r.penalty < 0) {
      diags.push_back("rank '" + r.name + "' has negative penalty " +
                      std::to_string(r.penalty));
    }
    if (r.penalty > 0) any_penalty = true;
  }

  if (rules.indexing == RuleIndexing::kRelative && !any_penalty &&
      !rules.court_free) {
    diags.push_back(
        "no penalty ranks; flag the spec court_free if a pure alternation "
        "game is intended");
  }

  if (rules.indexing == RuleIndexing::kAbsoluteFixture &&
      deck.total_count() > 0) {
    std::vector<int> used(deck.ranks.size(), 0);
    check_fixture_totality(rules, used, "", diags);
  }
  return diags;
}

RuleSpec classical_rules() {
  RuleSpec rules;
  for (int v = 2; v <= 10; ++v) {
    rules.deck.ranks.push_back(RankSpec{std::to_string(v), 4, 0});
  }
  rules.deck.ranks.push_back(RankSpec{"J", 4, 1});
  rules.deck.ranks.push_back(RankSpec{"Q", 4, 2});
  rules.deck.ranks.push_back(RankSpec{"K", 4, 3});
  rules.deck.ranks.push_back(RankSpec{"A", 4, 4});
  return rules;
}

RuleSpec stuck_rules() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"X", 1, 0}, RankSpec{"Y", 1, 0}};
  rules.indexing = RuleIndexing::kAbsoluteFixture;
  rules.fixture_table["X"] =
      RuleDecision{Verdict::kFinish, RelativePlayer::kStarter};
  rules.fixture_table["Y"] =
      RuleDecision{Verdict::kFinish, RelativePlayer::kStarter};
  return rules;
}

}  // namespace bmn
