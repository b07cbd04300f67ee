// Cards, ordered piles, deck specifications, deals, state-space enumeration
// and the seeded-randomness contract shared by every other component.
//
// Conventions fixed here and used throughout:
//   * cards are fully distinguishable: (rank_id, copy_id) pairs;
//   * OrderedPile index 0 is the TOP of a deck / the most recently placed
//     card of a table pile;
//   * a Split (left, right) partitions the whole deck between the players.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmn {

// Analysis-scale refusals (state space too large, chain not absorbing,
// singular solve). The CLI maps these to exit code 3.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Card {
  std::uint8_t rank_id = 0;  // index into DeckSpec::ranks
  std::uint8_t copy_id = 0;  // distinguishes identical-rank copies

  friend bool operator==(Card a, Card b) {
    return a.rank_id == b.rank_id && a.copy_id == b.copy_id;
  }
  friend bool operator!=(Card a, Card b) { return !(a == b); }
};

// Ordered sequence of cards. cards[0] is the top of a player deck (next card
// drawn) or the most recently placed card of a table pile; cards.back() is
// the bottom / first-played card.
struct OrderedPile {
  std::vector<Card> cards;

  std::size_t size() const { return cards.size(); }
  bool empty() const { return cards.empty(); }

  Card top() const { return cards.front(); }
  Card pop_top() {
    Card c = cards.front();
    cards.erase(cards.begin());
    return c;
  }
  void push_top(Card c) { cards.insert(cards.begin(), c); }
  void append_bottom(const std::vector<Card>& more) {
    cards.insert(cards.end(), more.begin(), more.end());
  }

  friend bool operator==(const OrderedPile& a, const OrderedPile& b) {
    return a.cards == b.cards;
  }
  friend bool operator!=(const OrderedPile& a, const OrderedPile& b) {
    return !(a == b);
  }
};

struct RankSpec {
  std::string name;
  int count = 0;    // copies of this rank in the deck
  int penalty = 0;  // 0 = ordinary card, k > 0 = opponent owes k cards

  friend bool operator==(const RankSpec& a, const RankSpec& b) {
    return a.name == b.name && a.count == b.count && a.penalty == b.penalty;
  }
};

struct DeckSpec {
  std::vector<RankSpec> ranks;

  int total_count() const;
  int penalty_of(std::uint8_t rank_id) const { return ranks[rank_id].penalty; }
  const std::string& rank_name(std::uint8_t rank_id) const {
    return ranks[rank_id].name;
  }
  int find_rank(const std::string& name) const;  // -1 when absent

  // All cards in deck order: ranks as listed, copies 0..count-1.
  std::vector<Card> cards() const;

  // Dense per-deck card index in [0, total_count): deck-order position.
  int card_index(Card c) const;

  friend bool operator==(const DeckSpec& a, const DeckSpec& b) {
    return a.ranks == b.ranks;
  }
};

// Game state between tricks: player 1 holds `left`, player 2 holds `right`.
struct Split {
  OrderedPile left;
  OrderedPile right;

  bool absorbing() const { return left.empty() || right.empty(); }
  Split mirrored() const { return Split{right, left}; }

  friend bool operator==(const Split& a, const Split& b) {
    return a.left == b.left && a.right == b.right;
  }
  friend bool operator!=(const Split& a, const Split& b) { return !(a == b); }
};

// Mid-trick game over: the recorded player had to play from an empty deck.
struct SinkId {
  int loser = 0;  // 1 or 2

  friend bool operator==(SinkId a, SinkId b) { return a.loser == b.loser; }
  friend bool operator!=(SinkId a, SinkId b) { return !(a == b); }
};

inline int other_player(int player) { return player == 1 ? 2 : 1; }

// Reproducibility contract: identical (master_seed, stream_index) pairs give
// identical random streams. Parallel replicas take distinct stream indices.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// Deterministic random stream. Built on std::mt19937_64 (whose output
// sequence the standard pins down exactly); bounded draws are rejection
// sampled here instead of using std::uniform_int_distribution so streams are
// identical across standard-library implementations.
class Rng {
 public:
  explicit Rng(SeedSpec seed);

  std::uint64_t next_u64() { return engine_(); }
  std::uint64_t next_below(std::uint64_t bound);  // uniform on [0, bound)
  double next_unit();                             // uniform on [0, 1)
  bool bernoulli(double p) { return next_unit() < p; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr int kDefaultEnumerationCap = 8;

// Every ordered split (L, R) of the deck, exactly once; (n+1)! of them.
// Refuses decks larger than `cap` cards.
std::vector<Split> enumerate_splits(const DeckSpec& deck,
                                    int cap = kDefaultEnumerationCap);

// Uniformly random permutation of `pile`; pure function of (pile, seed).
OrderedPile shuffle_pile(const OrderedPile& pile, SeedSpec seed);
void shuffle_cards(std::vector<Card>& cards, Rng& rng);

// Uniform over all splits with |left| = left_size; pure in (deck, seed).
Split deal(const DeckSpec& deck, int left_size, SeedSpec seed);
Split deal(const DeckSpec& deck, int left_size, Rng& rng);

// Canonical textual state encoding, e.g. "L:J0,N1|R:Q0". Cards appear
// top-to-bottom as "<rank name><copy index>", left side then right.
std::string encode_pile(const DeckSpec& deck, const OrderedPile& pile);
std::string encode_state(const DeckSpec& deck, const Split& split);
// Inverse of encode_state; validates that the encoding is a genuine split of
// `deck` (every card exactly once).
Split parse_state(const DeckSpec& deck, const std::string& text);

// Packs a split into one 64-bit key (4 bits per card index plus the left
// size). Requires total_count <= 15; fine for anything within the
// enumeration cap. Used for hashing states in graph and chain analyses.
std::uint64_t pack_split(const DeckSpec& deck, const Split& split);

// Multiset equality of (left + right [+ table]) against the full deck.
bool conserves_deck(const DeckSpec& deck, const Split& split,
                    const std::vector<Card>* table = nullptr);

// Splits [0, total) into contiguous chunks and runs fn(lo, hi) on each, one
// worker thread per chunk (threads = 0 means hardware concurrency). Workers
// must write to disjoint slots only; results are then independent of the
// worker count.
void parallel_chunks(std::uint64_t total, int threads,
                     const std::function<void(std::uint64_t, std::uint64_t)>& fn);

}  // namespace bmn
