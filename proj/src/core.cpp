#include "bmn/core.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <thread>

namespace bmn {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(SeedSpec seed) {
  std::uint64_t s = seed.master_seed;
  std::uint64_t a = splitmix64(s);
  s ^= 0xD1B54A32D192ED03ULL * (seed.stream_index + 1);
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
}

}  // namespace

int DeckSpec::total_count() const {
  int n = 0;
  for (const RankSpec& r : ranks) n += r.count;
  return n;
}

int DeckSpec::find_rank(const std::string& name) const {
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<Card> DeckSpec::cards() const {
  std::vector<Card> out;
  out.reserve(static_cast<std::size_t>(total_count()));
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    for (int c = 0; c < ranks[r].count; ++c) {
      out.push_back(Card{static_cast<std::uint8_t>(r),
                         static_cast<std::uint8_t>(c)});
    }
  }
  return out;
}

int DeckSpec::card_index(Card c) const {
  if (c.rank_id >= ranks.size() || c.copy_id >= ranks[c.rank_id].count) {
    throw std::invalid_argument("card not in deck: rank_id=" +
                                std::to_string(c.rank_id) + " copy_id=" +
                                std::to_string(c.copy_id));
  }
  int offset = 0;
  for (int r = 0; r < c.rank_id; ++r) offset += ranks[r].count;
  return offset + c.copy_id;
}

Rng::Rng(SeedSpec seed) : engine_(mix_seed(seed)) {}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be > 0");
  // Rejection sampling: accept draws >= 2^64 mod bound so the result is
  // exactly uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<Split> enumerate_splits(const DeckSpec& deck, int cap) {
  const int n = deck.total_count();
  if (n > cap) {
    std::string count;
    if (n <= 19) {
      std::uint64_t f = 1;
      for (int i = 2; i <= n + 1; ++i) f *= static_cast<std::uint64_t>(i);
      count = std::to_string(f);
    } else {
      count = "more than 2^64";
    }
    throw AnalysisError("state space too large: " + std::to_string(n) +
                        " cards give " + count + " ordered splits (cap " +
                        std::to_string(cap) + " cards)");
  }

  std::vector<Card> base = deck.cards();
  std::vector<int> perm(base.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);

  std::vector<Split> out;
  // Every permutation crossed with every cut position: (n+1)! splits, each
  // exactly once since (L, R) <-> (L ++ R, |L|) is a bijection.
  do {
    for (int k = 0; k <= n; ++k) {
      Split s;
      s.left.cards.reserve(static_cast<std::size_t>(k));
      s.right.cards.reserve(static_cast<std::size_t>(n - k));
      for (int i = 0; i < k; ++i) s.left.cards.push_back(base[perm[i]]);
      for (int i = k; i < n; ++i) s.right.cards.push_back(base[perm[i]]);
      out.push_back(std::move(s));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

void shuffle_cards(std::vector<Card>& cards, Rng& rng) {
  for (std::size_t i = cards.size(); i > 1; --i) {
    std::size_t j = rng.next_below(i);
    std::swap(cards[i - 1], cards[j]);
  }
}

OrderedPile shuffle_pile(const OrderedPile& pile, SeedSpec seed) {
  Rng rng(seed);
  OrderedPile out = pile;
  shuffle_cards(out.cards, rng);
  return out;
}

Split deal(const DeckSpec& deck, int left_size, Rng& rng) {
  const int n = deck.total_count();
  if (left_size < 0 || left_size > n) {
    throw std::invalid_argument("deal: left_size " + std::to_string(left_size) +
                                " out of range [0, " + std::to_string(n) + "]");
  }
  std::vector<Card> all = deck.cards();
  shuffle_cards(all, rng);
  Split s;
  s.left.cards.assign(all.begin(), all.begin() + left_size);
  s.right.cards.assign(all.begin() + left_size, all.end());
  return s;
}

Split deal(const DeckSpec& deck, int left_size, SeedSpec seed) {
  Rng rng(seed);
  return deal(deck, left_size, rng);
}

std::string encode_pile(const DeckSpec& deck, const OrderedPile& pile) {
  std::string out;
  for (std::size_t i = 0; i < pile.cards.size(); ++i) {
    if (i) out += ',';
    out += deck.rank_name(pile.cards[i].rank_id);
    out += std::to_string(pile.cards[i].copy_id);
  }
  return out;
}

std::string encode_state(const DeckSpec& deck, const Split& split) {
  return "L:" + encode_pile(deck, split.left) +
         "|R:" + encode_pile(deck, split.right);
}

namespace {

OrderedPile parse_pile(const DeckSpec& deck, const std::string& text) {
  OrderedPile pile;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      throw std::invalid_argument("state encoding: empty card entry");
    }
    std::size_t digits = 0;
    while (digits < item.size() && std::isdigit(static_cast<unsigned char>(
                                       item[item.size() - 1 - digits]))) {
      ++digits;
    }
    if (digits == 0 || digits == item.size()) {
      throw std::invalid_argument("state encoding: bad card entry '" + item +
                                  "' (want <rank name><copy index>)");
    }
    std::string name = item.substr(0, item.size() - digits);
    int copy = std::stoi(item.substr(item.size() - digits));
    int rank = deck.find_rank(name);
    if (rank < 0) {
      throw std::invalid_argument("state encoding: unknown rank '" + name +
                                  "'");
    }
    if (copy >= deck.ranks[rank].count) {
      throw std::invalid_argument("state encoding: copy index out of range in '" +
                                  item + "'");
    }
    pile.cards.push_back(Card{static_cast<std::uint8_t>(rank),
                              static_cast<std::uint8_t>(copy)});
  }
  return pile;
}

}  // namespace

Split parse_state(const DeckSpec& deck, const std::string& text) {
  if (text.rfind("L:", 0) != 0) {
    throw std::invalid_argument("state encoding must start with 'L:'");
  }
  std::size_t bar = text.find("|R:");
  if (bar == std::string::npos) {
    throw std::invalid_argument("state encoding must contain '|R:'");
  }
  Split s;
  s.left = parse_pile(deck, text.substr(2, bar - 2));
  s.right = parse_pile(deck, text.substr(bar + 3));
  if (!conserves_deck(deck, s)) {
    throw std::invalid_argument("state encoding is not a split of the deck: " +
                                text);
  }
  return s;
}

std::uint64_t pack_split(const DeckSpec& deck, const Split& split) {
  const int n = deck.total_count();
  if (n > 15) {
    throw AnalysisError("pack_split supports at most 15 cards, got " +
                        std::to_string(n));
  }
  std::uint64_t key = static_cast<std::uint64_t>(split.left.size());
  int shift = 4;
  for (Card c : split.left.cards) {
    key |= static_cast<std::uint64_t>(deck.card_index(c)) << shift;
    shift += 4;
  }
  for (Card c : split.right.cards) {
    key |= static_cast<std::uint64_t>(deck.card_index(c)) << shift;
    shift += 4;
  }
  return key;
}

void parallel_chunks(std::uint64_t total, int threads,
                     const std::function<void(std::uint64_t, std::uint64_t)>& fn) {
  if (total == 0) return;
  std::uint64_t workers =
      threads > 0 ? static_cast<std::uint64_t>(threads)
                  : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, total);
  if (workers <= 1) {
    fn(0, total);
    return;
  }
  const std::uint64_t chunk = (total + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = chunk * w;
    const std::uint64_t hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (std::thread& t : pool) t.join();
}

bool conserves_deck(const DeckSpec& deck, const Split& split,
                    const std::vector<Card>* table) {
  const int n = deck.total_count();
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  int total = 0;
  auto tally = [&](const std::vector<Card>& cards) {
    for (Card c : cards) {
      if (c.rank_id >= deck.ranks.size() ||
          c.copy_id >= deck.ranks[c.rank_id].count) {
        return false;
      }
      ++seen[static_cast<std::size_t>(deck.card_index(c))];
      ++total;
    }
    return true;
  };
  if (!tally(split.left.cards) || !tally(split.right.cards)) return false;
  if (table && !tally(*table)) return false;
  if (total != n) return false;
  for (int i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)] != 1) return false;
  }
  return true;
}

}  // namespace bmn
