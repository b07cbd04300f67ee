// Monte-Carlo harness over play_game. Replica g always uses stream index g
// of the master seed and results are reduced in replica order, so the
// statistics are identical at any worker count.

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "bmn/engine.hpp"

namespace bmn {

struct McStats {
  std::uint64_t games = 0;
  std::uint64_t terminated = 0;
  std::uint64_t capped = 0;
  double mean_moves = 0.0;
  double stderr_moves = 0.0;  // sample std / sqrt(games)
  std::uint64_t max_moves = 0;
  double mean_tricks = 0.0;
  std::array<std::uint64_t, 2> wins{0, 0};
};

// Per-game record of one batch; exposed so stats and histograms derive from
// the same deterministic runs.
std::vector<GameRecord> run_batch(const RuleSpec& rules, int left_size,
                                  double p, std::uint64_t games,
                                  std::uint64_t master_seed,
                                  std::uint64_t move_cap, int threads = 0);

McStats monte_carlo(const RuleSpec& rules, int left_size, double p,
                    std::uint64_t games, std::uint64_t master_seed,
                    std::uint64_t move_cap, int threads = 0);

// Move-count histogram over the same batch: bucket = moves / bucket_width,
// counts sum to games.
std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram(
    const RuleSpec& rules, int left_size, double p, std::uint64_t games,
    std::uint64_t master_seed, std::uint64_t move_cap,
    std::uint64_t bucket_width, int threads = 0);

}  // namespace bmn
