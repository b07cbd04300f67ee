#include "bmn/graph.hpp"

#include <algorithm>
#include <deque>

namespace bmn {

StateGraph::StateGraph(RuleSpec rules, std::vector<Split> splits)
    : rules_(std::move(rules)),
      splits_(std::move(splits)),
      edges_(splits_.size(), {kNoEdge, kNoEdge}) {
  index_.reserve(splits_.size() * 2);
  for (std::uint32_t i = 0; i < splits_.size(); ++i) {
    index_.emplace(pack_split(rules_.deck, splits_[i]), i);
  }
}

std::uint32_t StateGraph::id_of(const Split& s) const {
  auto it = index_.find(pack_split(rules_.deck, s));
  if (it == index_.end()) {
    throw std::invalid_argument("state is not a split of this graph's deck: " +
                                encode_state(rules_.deck, s));
  }
  return it->second;
}

std::uint32_t StateGraph::id_of_target(const StepTarget& t) const {
  if (const SinkId* sink = std::get_if<SinkId>(&t)) {
    return sink_vertex(sink->loser);
  }
  return id_of(std::get<Split>(t));
}

std::string StateGraph::encode_vertex(std::uint32_t v) const {
  if (is_sink(v)) {
    return "sink:" + std::to_string(v - num_splits() + 1);
  }
  return encode_state(rules_.deck, splits_[v]);
}

StateGraph build_g0(const RuleSpec& rules, int cap) {
  StateGraph graph(rules, enumerate_splits(rules.deck, cap));
  for (std::uint32_t v = 0; v < graph.num_splits(); ++v) {
    const Split& state = graph.splits()[v];
    if (state.absorbing()) continue;
    std::array<std::uint32_t, 2> edges;
    for (int starter = 1; starter <= 2; ++starter) {
      edges[starter - 1] =
          graph.id_of_target(canonical_successor(rules, state, starter));
    }
    graph.set_g0_edges(v, edges);
  }
  return graph;
}

PredecessorResult reconstruct_predecessor(const RuleSpec& rules,
                                          const Split& state, Side side) {
  PredecessorResult result;
  const OrderedPile& winner_deck =
      side == Side::kLeft ? state.left : state.right;
  if (winner_deck.empty()) return result;

  const int winner_abs = side == Side::kLeft ? 1 : 2;
  RuleCursor cursor(rules);
  std::vector<RelativePlayer> owners;
  for (std::size_t peeled = 1; peeled <= winner_deck.size(); ++peeled) {
    const Card card = winner_deck.cards[winner_deck.size() - peeled];
    owners.push_back(cursor.next_actor());
    const RuleDecision decision = cursor.feed(card);
    if (decision.verdict != Verdict::kFinish) continue;

    // First finish found: this is the only candidate trick. The relative
    // winner fixes the starter.
    const int starter = decision.who == RelativePlayer::kStarter
                            ? winner_abs
                            : other_player(winner_abs);
    Split candidate = state;
    OrderedPile& candidate_winner =
        side == Side::kLeft ? candidate.left : candidate.right;
    candidate_winner.cards.resize(winner_deck.size() - peeled);
    // Undo the trick: last-played card first, so each card ends up below the
    // ones its owner played earlier.
    for (std::size_t m = peeled; m-- > 0;) {
      const Card played = winner_deck.cards[winner_deck.size() - 1 - m];
      const int owner = to_absolute(owners[m], starter);
      (owner == 1 ? candidate.left : candidate.right).push_top(played);
    }

    if (candidate.absorbing()) return result;
    const TrickResult replayed = rollout(rules, candidate, starter);
    if (replayed.kind != TrickKind::kTaken ||
        replayed.winner_or_loser != winner_abs ||
        replayed.moves != static_cast<int>(peeled) ||
        successor_from_taken(replayed) != state) {
      return result;
    }
    result.found = true;
    result.predecessor = std::move(candidate);
    result.starter = starter;
    result.trick_length = static_cast<int>(peeled);
    return result;
  }
  return result;  // deck exhausted before any finish
}

std::vector<std::uint32_t> check_nondegeneracy(const StateGraph& graph) {
  std::vector<std::uint32_t> violations;
  for (std::uint32_t v = 0; v < graph.num_splits(); ++v) {
    if (graph.splits()[v].absorbing()) continue;
    const auto& edges = graph.g0_edges(v);
    if (edges[0] == edges[1] && !graph.is_absorbing_vertex(edges[0])) {
      violations.push_back(v);
    }
  }
  return violations;
}

LemmaReport verify_lemma(const StateGraph& graph) {
  LemmaReport report;
  const std::uint32_t n = graph.num_splits();

  // Condition 1: exactly two outgoing edges per non-absorbing vertex.
  report.out_degree_ok = true;
  for (std::uint32_t v = 0; v < n; ++v) {
    const auto& edges = graph.g0_edges(v);
    const bool has_both = edges[0] != StateGraph::kNoEdge &&
                          edges[1] != StateGraph::kNoEdge;
    const bool expected = !graph.splits()[v].absorbing();
    if (has_both != expected) {
      report.out_degree_ok = false;
      report.violations.emplace_back(graph.encode_vertex(v),
                                     "out-degree != 2");
    }
  }

  // Condition 2, route one: direct edge counting into split vertices.
  std::vector<int> in_direct(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t target : graph.g0_edges(v)) {
      if (target != StateGraph::kNoEdge && !graph.is_sink(target)) {
        ++in_direct[target];
      }
    }
  }
  // Route two: predecessor reconstruction, one candidate per winner side.
  std::vector<int> in_rec(n, 0);
  std::vector<std::uint32_t> left_pred(n, StateGraph::kNoEdge);
  for (std::uint32_t v = 0; v < n; ++v) {
    PredecessorResult left =
        reconstruct_predecessor(graph.rules(), graph.splits()[v], Side::kLeft);
    PredecessorResult right = reconstruct_predecessor(
        graph.rules(), graph.splits()[v], Side::kRight);
    in_rec[v] = (left.found ? 1 : 0) + (right.found ? 1 : 0);
    if (left.found) left_pred[v] = graph.id_of(left.predecessor);
  }

  report.in_degree_ok = true;
  for (std::uint32_t v = 0; v < n; ++v) {
    ++report.in_degree_histogram[in_direct[v]];
    if (in_direct[v] != in_rec[v]) {
      report.in_degree_ok = false;
      report.violations.emplace_back(
          graph.encode_vertex(v),
          "in-degree mismatch: direct " + std::to_string(in_direct[v]) +
              " vs reconstructed " + std::to_string(in_rec[v]));
    }
    if (!graph.splits()[v].absorbing() && in_direct[v] > 2) {
      report.in_degree_ok = false;
      report.violations.emplace_back(graph.encode_vertex(v),
                                     "in-degree exceeds 2");
    }
  }

  // Condition 3: walk left predecessors from every in-degree-2 vertex; the
  // left-hand card count must strictly decrease until in-degree drops.
  report.escape_ancestor_ok = true;
  std::vector<std::uint32_t> visited_stamp(n, 0);
  std::uint32_t stamp = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (graph.splits()[v].absorbing() || in_rec[v] != 2) continue;
    ++stamp;
    auto visited = [&](std::uint32_t u) { return visited_stamp[u] == stamp; };
    std::uint32_t w = v;
    while (in_rec[w] == 2) {
      visited_stamp[w] = stamp;
      const std::uint32_t pred = left_pred[w];
      if (pred == StateGraph::kNoEdge) {
        report.escape_ancestor_ok = false;
        report.violations.emplace_back(graph.encode_vertex(w),
                                       "in-degree 2 but no left predecessor");
        break;
      }
      if (graph.splits()[pred].left.size() >= graph.splits()[w].left.size()) {
        report.escape_ancestor_ok = false;
        report.violations.emplace_back(
            graph.encode_vertex(w),
            "left predecessor does not decrease player 1's card count");
        break;
      }
      if (visited(pred)) {
        report.escape_ancestor_ok = false;
        report.violations.emplace_back(graph.encode_vertex(pred),
                                       "cycle in left-predecessor chain");
        break;
      }
      w = pred;
    }
  }
  return report;
}

std::vector<std::uint32_t> check_absorbing(const StateGraph& graph,
                                           int perm_guard) {
  const std::uint32_t n = graph.num_splits();
  // Reverse adjacency of the stochastic support graph; sinks get no entry
  // (they are seeds, never predecessors).
  std::vector<std::vector<std::uint32_t>> rev(graph.num_vertices());
  for (std::uint32_t v = 0; v < n; ++v) {
    const Split& state = graph.splits()[v];
    if (state.absorbing()) continue;
    for (int starter = 1; starter <= 2; ++starter) {
      TrickResult trick = rollout(graph.rules(), state, starter);
      if (trick.kind == TrickKind::kGameOver) {
        rev[graph.sink_vertex(trick.winner_or_loser)].push_back(v);
        continue;
      }
      if (static_cast<int>(trick.table.size()) > perm_guard) {
        throw AnalysisError(
            "trick pile of " + std::to_string(trick.table.size()) +
            " cards exceeds the permutation guard (" +
            std::to_string(perm_guard) + ")");
      }
      // Every permutation of the taken pile is a positive-probability
      // successor. Distinguishable cards: |S|! distinct orderings.
      std::vector<Card> perm = trick.table.cards;
      std::sort(perm.begin(), perm.end(), [&](Card a, Card b) {
        return graph.deck().card_index(a) < graph.deck().card_index(b);
      });
      Split base{trick.left_rem, trick.right_rem};
      OrderedPile& winner =
          trick.winner_or_loser == 1 ? base.left : base.right;
      const std::size_t rem = winner.size();
      do {
        winner.cards.resize(rem);
        winner.append_bottom(perm);
        rev[graph.id_of(base)].push_back(v);
      } while (std::next_permutation(
          perm.begin(), perm.end(), [&](Card a, Card b) {
            return graph.deck().card_index(a) < graph.deck().card_index(b);
          }));
    }
  }

  std::vector<bool> reaches(graph.num_vertices(), false);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < graph.num_vertices(); ++v) {
    if (graph.is_absorbing_vertex(v)) {
      reaches[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    const std::uint32_t t = queue.front();
    queue.pop_front();
    for (std::uint32_t v : rev[t]) {
      if (!reaches[v]) {
        reaches[v] = true;
        queue.push_back(v);
      }
    }
  }

  std::vector<std::uint32_t> stranded;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!reaches[v]) stranded.push_back(v);
  }
  return stranded;
}

}  // namespace bmn
