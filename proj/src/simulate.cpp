#include "bmn/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace bmn {

std::vector<GameRecord> run_batch(const RuleSpec& rules, int left_size,
                                  double p, std::uint64_t games,
                                  std::uint64_t master_seed,
                                  std::uint64_t move_cap, int threads) {
  if (games < 1) throw std::invalid_argument("games must be >= 1");
  std::vector<GameRecord> records(games);
  parallel_chunks(games, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t g = lo; g < hi; ++g) {
      Rng rng(SeedSpec{master_seed, g});
      Split start = deal(rules.deck, left_size, rng);
      records[g] = play_game(rules, start, p, rng, move_cap);
    }
  });
  return records;
}

McStats monte_carlo(const RuleSpec& rules, int left_size, double p,
                    std::uint64_t games, std::uint64_t master_seed,
                    std::uint64_t move_cap, int threads) {
  std::vector<GameRecord> records =
      run_batch(rules, left_size, p, games, master_seed, move_cap, threads);

  McStats stats;
  stats.games = games;
  long double sum_moves = 0.0L;
  long double sum_tricks = 0.0L;
  for (const GameRecord& r : records) {
    if (r.capped) {
      ++stats.capped;
    } else {
      ++stats.terminated;
      ++stats.wins[static_cast<std::size_t>(r.winner - 1)];
    }
    sum_moves += static_cast<long double>(r.moves);
    sum_tricks += static_cast<long double>(r.tricks);
    stats.max_moves = std::max(stats.max_moves, r.moves);
  }
  stats.mean_moves = static_cast<double>(sum_moves / games);
  stats.mean_tricks = static_cast<double>(sum_tricks / games);
  if (games > 1) {
    long double ss = 0.0L;
    for (const GameRecord& r : records) {
      const long double d =
          static_cast<long double>(r.moves) - stats.mean_moves;
      ss += d * d;
    }
    const long double sample_var = ss / static_cast<long double>(games - 1);
    stats.stderr_moves = static_cast<double>(
        std::sqrt(sample_var / static_cast<long double>(games)));
  }
  return stats;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram(
    const RuleSpec& rules, int left_size, double p, std::uint64_t games,
    std::uint64_t master_seed, std::uint64_t move_cap,
    std::uint64_t bucket_width, int threads) {
  if (bucket_width < 1) {
    throw std::invalid_argument("bucket_width must be >= 1");
  }
  std::vector<GameRecord> records =
      run_batch(rules, left_size, p, games, master_seed, move_cap, threads);
  std::map<std::uint64_t, std::uint64_t> buckets;
  for (const GameRecord& r : records) ++buckets[r.moves / bucket_width];
  return {buckets.begin(), buckets.end()};
}

}  // namespace bmn
