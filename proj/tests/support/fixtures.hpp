// Small rule fixtures shared by the unit and acceptance suites. Names follow
// the deck size: pn2 is the two-card {penalty-1, ordinary} deck, mini1 the
// three-card deck with one penalty-1 card and two ordinary copies, and so on.

#pragma once

#include <string>
#include <vector>

#include "bmn/rules.hpp"

namespace bmn::fixtures {

inline RuleSpec pn2() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"P", 1, 1}, RankSpec{"N", 1, 0}};
  return rules;
}

inline RuleSpec mini1() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"P", 1, 1}, RankSpec{"N", 2, 0}};
  return rules;
}

// Pure alternation: no penalty ranks, every game ends by exhaustion.
inline RuleSpec court_free(int cards) {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"N", cards, 0}};
  rules.court_free = true;
  return rules;
}

inline RuleSpec q4() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"Q", 1, 2}, RankSpec{"N", 3, 0}};
  return rules;
}

// Two court ranks, five cards.
inline RuleSpec jq5() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"J", 1, 1}, RankSpec{"Q", 1, 2},
                      RankSpec{"N", 3, 0}};
  return rules;
}

// Two court ranks, six cards.
inline RuleSpec jk6() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"J", 1, 1}, RankSpec{"K", 1, 3},
                      RankSpec{"N", 4, 0}};
  return rules;
}

// Two copies of the same penalty rank; the smallest penalty-family deck
// whose deterministic game can cycle, while the randomized game still
// absorbs.
inline RuleSpec jj6() {
  RuleSpec rules;
  rules.deck.ranks = {RankSpec{"J", 2, 1}, RankSpec{"N", 4, 0}};
  return rules;
}

// The symmetric fixtures used by the theorem-instance and oracle checks.
struct NamedFixture {
  std::string name;
  RuleSpec rules;
};

inline std::vector<NamedFixture> relative_fixtures() {
  return {{"pn2", pn2()}, {"mini1", mini1()}, {"courtfree4", court_free(4)},
          {"q4", q4()},   {"jq5", jq5()},     {"jk6", jk6()},
          {"jj6", jj6()}};
}

inline Split state(const RuleSpec& rules, const std::string& encoding) {
  return parse_state(rules.deck, encoding);
}

}  // namespace bmn::fixtures
