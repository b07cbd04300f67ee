// The classical deterministic game: no shuffling, the trick winner leads the
// next trick. A trajectory over trick-boundary states (decks plus next
// leader) either terminates or revisits a state; Brent's two-pointer method
// detects the revisit with bounded memory, and every reported cycle is
// re-verified by replay.

#pragma once

#include <cstdint>
#include <vector>

#include "bmn/engine.hpp"

namespace bmn {

// How a taken pile lands under the winner's deck. kPlayedOrder scoops the
// table card by card in play order (first-played ends up on top of the
// collected block); kReversePlayedOrder appends the block most-recent-first,
// matching the unshuffled canonical successor.
enum class PickupOrder { kPlayedOrder, kReversePlayedOrder };

struct DeterministicConfig {
  PickupOrder pickup_order = PickupOrder::kPlayedOrder;
  int first_leader = 1;
};

enum class CycleKind { kTerminated, kCycle };

struct CycleOutcome {
  CycleKind kind = CycleKind::kTerminated;
  int winner = 0;            // terminated only
  std::uint64_t moves = 0;   // to termination, or to cycle entry
  std::uint64_t tricks = 0;  // same unit as moves
  std::uint64_t preperiod = 0;  // tricks before the cycle
  std::uint64_t period = 0;     // cycle length in tricks
  Split witness_state;          // boundary state at cycle entry
  int witness_leader = 0;
};

CycleOutcome play_deterministic(const RuleSpec& rules, const Split& deal,
                                const DeterministicConfig& config);

// Replays `period` tricks from the witness boundary state and checks the
// trajectory returns to it exactly.
bool verify_cycle(const RuleSpec& rules, const Split& witness, int leader,
                  std::uint64_t period, const DeterministicConfig& config);

struct CycleExample {
  Split deal;
  std::uint64_t deal_index = 0;
  std::uint64_t preperiod = 0;
  std::uint64_t period = 0;
  Split witness_state;
  int witness_leader = 0;
};

struct CycleReport {
  std::uint64_t deals = 0;
  std::uint64_t terminated = 0;
  std::uint64_t cycles = 0;
  double frequency = 0.0;         // cycles / deals
  double mean_moves = 0.0;        // over terminated games
  std::uint64_t max_moves = 0;
  std::vector<CycleExample> examples;  // lowest deal indices first
};

// Plays `deals` uniform random equal deals (deal d uses stream index d of
// the master seed); identical at any worker count.
CycleReport search_cycles(const RuleSpec& rules, std::uint64_t deals,
                          std::uint64_t master_seed,
                          const DeterministicConfig& config,
                          std::size_t max_examples = 8, int threads = 0);

}  // namespace bmn
