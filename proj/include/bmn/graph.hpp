// State graph construction and verification. Vertices are all ordered splits
// of the deck plus two loser sinks; G0 keeps, per non-absorbing vertex,
// exactly the two canonical-successor edges (one per starter). On top of G0
// this module reconstructs predecessors from the bottom of a winner's deck,
// checks the nondegeneracy condition, verifies the three degree conditions
// sufficient for absorption, and independently proves absorption by reverse
// reachability over the full stochastic support graph.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "bmn/engine.hpp"

namespace bmn {

class StateGraph {
 public:
  static constexpr std::uint32_t kNoEdge = 0xFFFFFFFFu;

  StateGraph(RuleSpec rules, std::vector<Split> splits);

  const RuleSpec& rules() const { return rules_; }
  const DeckSpec& deck() const { return rules_.deck; }
  const std::vector<Split>& splits() const { return splits_; }

  std::uint32_t num_splits() const {
    return static_cast<std::uint32_t>(splits_.size());
  }
  std::uint32_t num_vertices() const { return num_splits() + 2; }
  std::uint32_t sink_vertex(int loser) const {
    return num_splits() + static_cast<std::uint32_t>(loser - 1);
  }
  bool is_sink(std::uint32_t v) const { return v >= num_splits(); }
  // Sinks, plus splits where one player already holds everything.
  bool is_absorbing_vertex(std::uint32_t v) const {
    return is_sink(v) || splits_[v].absorbing();
  }

  std::uint32_t id_of(const Split& s) const;
  std::uint32_t id_of_target(const StepTarget& t) const;

  // Both canonical-successor edges of a non-absorbing split, indexed by
  // starter - 1; kNoEdge entries on absorbing splits.
  const std::array<std::uint32_t, 2>& g0_edges(std::uint32_t v) const {
    return edges_[v];
  }
  void set_g0_edges(std::uint32_t v, std::array<std::uint32_t, 2> e) {
    edges_[v] = e;
  }

  std::string encode_vertex(std::uint32_t v) const;

 private:
  RuleSpec rules_;
  std::vector<Split> splits_;
  std::vector<std::array<std::uint32_t, 2>> edges_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

// Enumerates all splits and fills in both canonical-successor edges per
// non-absorbing vertex.
StateGraph build_g0(const RuleSpec& rules, int cap = kDefaultEnumerationCap);

enum class Side { kLeft, kRight };

struct PredecessorResult {
  bool found = false;
  Split predecessor;
  int starter = 0;
  int trick_length = 0;
};

// Hypothesizes that the previous trick was taken by `side` and rebuilds it
// by peeling cards from the bottom of that player's deck (the bottom card
// was played first). Stops at the first pile the rule function finishes; the
// finish's relative winner pins down the starter, and the annotation assigns
// every pile card back to its owner's deck top. The candidate is then
// verified by forward replay; any failure yields found = false.
PredecessorResult reconstruct_predecessor(const RuleSpec& rules,
                                          const Split& state, Side side);

// States whose two canonical successors coincide (same split in the same
// order, or the same sink) without that successor being absorbing.
std::vector<std::uint32_t> check_nondegeneracy(const StateGraph& graph);

struct LemmaReport {
  bool out_degree_ok = false;
  bool in_degree_ok = false;
  bool escape_ancestor_ok = false;
  // (state encoding, violated condition) pairs.
  std::vector<std::pair<std::string, std::string>> violations;
  // Direct G0 in-degree distribution over split vertices.
  std::map<int, std::uint64_t> in_degree_histogram;

  bool all_ok() const {
    return out_degree_ok && in_degree_ok && escape_ancestor_ok;
  }
};

// The three conditions sufficient for absorption, each checked exhaustively:
//   1. every non-absorbing vertex has exactly two outgoing G0 edges;
//   2. in-degree of every non-absorbing vertex is at most 2, computed two
//      independent ways (direct edge counting and predecessor
//      reconstruction) that must agree on every split vertex;
//   3. every in-degree-2 vertex reaches an in-degree-<2 ancestor along its
//      left-predecessor chain, with a visited-set guard and the
//      strictly-decreasing left-hand-size assertion; a guard trip is
//      reported as a violation rather than looping.
LemmaReport verify_lemma(const StateGraph& graph);

// Reverse BFS from every absorbing vertex over the full stochastic support
// graph (both starters, every permutation of a taken trick pile). Returns
// the splits that cannot reach absorption; empty means the chain is
// absorbing and the expected game length is finite.
std::vector<std::uint32_t> check_absorbing(const StateGraph& graph,
                                           int perm_guard = 8);

}  // namespace bmn
