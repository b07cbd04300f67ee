#include "bmn/cycles.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace bmn {

namespace {

struct Boundary {
  Split state;
  int leader = 0;

  friend bool operator==(const Boundary& a, const Boundary& b) {
    return a.leader == b.leader && a.state == b.state;
  }
  friend bool operator!=(const Boundary& a, const Boundary& b) {
    return !(a == b);
  }
};

struct StepResult {
  bool terminal = false;
  int winner = 0;
  int moves = 0;
};

// One trick in place: play it, pick the pile up per the configured
// convention, hand the lead to the winner. Terminal when a side is already
// empty at the boundary or a player cannot complete the trick.
StepResult advance(const RuleSpec& rules, const DeterministicConfig& config,
                   Boundary& b, std::vector<Card>& scratch) {
  StepResult step;
  if (b.state.left.empty() || b.state.right.empty()) {
    step.terminal = true;
    step.winner = b.state.left.empty() ? 2 : 1;
    return step;
  }
  scratch.clear();
  TrickOutcome out =
      run_trick(rules, b.state.left, b.state.right, b.leader, scratch);
  step.moves = out.moves;
  if (out.kind == TrickKind::kGameOver) {
    step.terminal = true;
    step.winner = other_player(out.winner_or_loser);
    return step;
  }
  if (config.pickup_order == PickupOrder::kReversePlayedOrder) {
    std::reverse(scratch.begin(), scratch.end());
  }
  OrderedPile& winner = out.winner_or_loser == 1 ? b.state.left : b.state.right;
  winner.append_bottom(scratch);
  b.leader = out.winner_or_loser;
  return step;
}

}  // namespace

CycleOutcome play_deterministic(const RuleSpec& rules, const Split& deal,
                                const DeterministicConfig& config) {
  std::vector<Card> scratch;
  const Boundary start{deal, config.first_leader};
  CycleOutcome outcome;

  // Brent's method over the boundary sequence: the hare is the forward
  // trajectory (accumulating the real move count), the tortoise only
  // teleports to previous hare positions.
  Boundary tortoise = start;
  Boundary hare = start;
  std::uint64_t lam = 1;
  std::uint64_t power = 1;

  auto step_hare = [&]() -> bool {
    StepResult s = advance(rules, config, hare, scratch);
    outcome.moves += static_cast<std::uint64_t>(s.moves);
    if (s.moves > 0) ++outcome.tricks;
    if (s.terminal) {
      outcome.kind = CycleKind::kTerminated;
      outcome.winner = s.winner;
      return true;
    }
    return false;
  };

  if (step_hare()) return outcome;
  while (hare != tortoise) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    if (step_hare()) return outcome;
    ++lam;
  }

  // A revisit exists: the trajectory never terminates. Locate the cycle
  // entry by walking two cursors `lam` tricks apart.
  outcome.kind = CycleKind::kCycle;
  outcome.period = lam;
  outcome.moves = 0;
  outcome.tricks = 0;
  Boundary ahead = start;
  for (std::uint64_t i = 0; i < lam; ++i) {
    StepResult s = advance(rules, config, ahead, scratch);
    if (s.terminal) throw std::logic_error("cycle trajectory terminated");
  }
  Boundary entry = start;
  std::uint64_t mu = 0;
  while (entry != ahead) {
    StepResult s = advance(rules, config, entry, scratch);
    if (s.terminal) throw std::logic_error("cycle trajectory terminated");
    advance(rules, config, ahead, scratch);
    outcome.moves += static_cast<std::uint64_t>(s.moves);
    ++mu;
  }
  outcome.preperiod = mu;
  outcome.tricks = mu;
  outcome.witness_state = entry.state;
  outcome.witness_leader = entry.leader;
  return outcome;
}

bool verify_cycle(const RuleSpec& rules, const Split& witness, int leader,
                  std::uint64_t period, const DeterministicConfig& config) {
  if (period == 0) return false;
  std::vector<Card> scratch;
  const Boundary start{witness, leader};
  Boundary b = start;
  for (std::uint64_t i = 0; i < period; ++i) {
    StepResult s = advance(rules, config, b, scratch);
    if (s.terminal) return false;
  }
  return b == start;
}

CycleReport search_cycles(const RuleSpec& rules, std::uint64_t deals,
                          std::uint64_t master_seed,
                          const DeterministicConfig& config,
                          std::size_t max_examples, int threads) {
  if (deals < 1) throw std::invalid_argument("deals must be >= 1");
  const int left_size = rules.deck.total_count() / 2;

  struct DealRecord {
    std::uint8_t cycle = 0;
    std::uint32_t moves = 0;  // terminated games only
  };
  std::vector<DealRecord> records(deals);

  // Workers collect cycle examples locally; the final sort by deal index
  // makes the report independent of scheduling and worker count.
  std::vector<std::vector<CycleExample>> lists;
  std::mutex lists_guard;
  parallel_chunks(deals, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<CycleExample> local;
    for (std::uint64_t d = lo; d < hi; ++d) {
      Rng rng(SeedSpec{master_seed, d});
      Split start = deal(rules.deck, left_size, rng);
      CycleOutcome outcome = play_deterministic(rules, start, config);
      if (outcome.kind == CycleKind::kCycle) {
        records[d].cycle = 1;
        if (!verify_cycle(rules, outcome.witness_state, outcome.witness_leader,
                          outcome.period, config)) {
          throw std::logic_error("detected cycle failed replay verification");
        }
        local.push_back(CycleExample{start, d, outcome.preperiod,
                                     outcome.period, outcome.witness_state,
                                     outcome.witness_leader});
      } else {
        records[d].moves = static_cast<std::uint32_t>(outcome.moves);
      }
    }
    std::lock_guard<std::mutex> lock(lists_guard);
    lists.push_back(std::move(local));
  });

  CycleReport report;
  report.deals = deals;
  std::uint64_t sum_moves = 0;
  for (const DealRecord& r : records) {
    if (r.cycle) {
      ++report.cycles;
    } else {
      ++report.terminated;
      sum_moves += r.moves;
      report.max_moves = std::max<std::uint64_t>(report.max_moves, r.moves);
    }
  }
  report.frequency =
      static_cast<double>(report.cycles) / static_cast<double>(deals);
  if (report.terminated > 0) {
    report.mean_moves = static_cast<double>(sum_moves) /
                        static_cast<double>(report.terminated);
  }

  std::vector<CycleExample> merged;
  for (auto& list : lists) {
    merged.insert(merged.end(), list.begin(), list.end());
  }
  std::sort(merged.begin(), merged.end(),
            [](const CycleExample& a, const CycleExample& b) {
              return a.deal_index < b.deal_index;
            });
  if (merged.size() > max_examples) merged.resize(max_examples);
  report.examples = std::move(merged);
  return report;
}

}  // namespace bmn
