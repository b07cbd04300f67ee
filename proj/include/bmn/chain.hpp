// Exact absorbing-chain analysis of the randomized game. The one-step law
// from a non-absorbing state: the starter is Bernoulli(p), and a taken trick
// pile returns in a uniformly random order, so each branch spreads its mass
// equally over the |S|! permutations of the pile. Expected total moves to
// absorption solve (I - Q) t = b with Q the split-to-split transition block
// and b the per-state expected cards placed in one trick.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmn/graph.hpp"

namespace bmn {

struct TransitionEntry {
  StepTarget target;
  double probability = 0.0;
};

struct TransitionRow {
  Split source;
  std::vector<TransitionEntry> entries;  // aggregated over equal targets
  double step_moves = 0.0;               // expected cards placed this step
};

// Exact one-step distribution from a non-absorbing state. Refuses trick
// piles longer than `perm_guard` cards.
TransitionRow transitions(const RuleSpec& rules, const Split& state, double p,
                          int perm_guard = 8);

enum class SolveMethod { kAuto, kDenseLu, kGaussSeidel };

struct SolverDiagnostics {
  std::string method;
  double residual = 0.0;  // max-norm of (I-Q)t - b after the solve
  std::uint64_t iterations = 0;
  std::uint64_t unknowns = 0;
};

class ExpectationTable {
 public:
  ExpectationTable(DeckSpec deck, std::vector<Split> states,
                   std::vector<double> moves, SolverDiagnostics diagnostics);

  const DeckSpec& deck() const { return deck_; }
  const std::vector<Split>& states() const { return states_; }
  const std::vector<double>& moves() const { return moves_; }
  const SolverDiagnostics& diagnostics() const { return diagnostics_; }

  // Expected moves to absorption; 0 for absorbing splits.
  double at(const Split& state) const;

 private:
  DeckSpec deck_;
  std::vector<Split> states_;  // non-absorbing, enumeration order
  std::vector<double> moves_;
  SolverDiagnostics diagnostics_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

inline constexpr double kResidualTolerance = 1e-9;  // relative to max|b|
inline constexpr std::uint64_t kDenseSolveLimit = 10000;

// Solves the expected-moves system over every non-absorbing split. Refuses
// when the chain is not absorbing (check_absorbing non-empty) unless
// `bypass_absorption_check`; a bypassed non-absorbing chain then surfaces as
// a singular/degenerate solve. kAuto picks dense LU up to kDenseSolveLimit
// unknowns and Gauss-Seidel sweeps beyond.
ExpectationTable expected_moves(const RuleSpec& rules, double p,
                                int cap = kDefaultEnumerationCap,
                                SolveMethod method = SolveMethod::kAuto,
                                bool bypass_absorption_check = false);

// Average of the table over the uniform deal with |left| = left_size.
double deal_expectation(const ExpectationTable& table, int left_size);
double deal_expectation(const RuleSpec& rules, double p, int left_size,
                        int cap = kDefaultEnumerationCap);

}  // namespace bmn
