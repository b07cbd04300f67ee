#include "bmn/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bmn {

TransitionRow transitions(const RuleSpec& rules, const Split& state, double p,
                          int perm_guard) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("p must lie strictly inside (0,1)");
  }
  if (state.absorbing()) {
    throw std::invalid_argument("transitions: state is absorbing");
  }

  TransitionRow row;
  row.source = state;

  // Aggregate equal targets; keys sort splits before sinks deterministically.
  std::map<std::uint64_t, std::pair<StepTarget, double>> mass;
  auto add = [&](std::uint64_t key, const StepTarget& target, double w) {
    auto [it, inserted] = mass.emplace(key, std::make_pair(target, w));
    if (!inserted) it->second.second += w;
  };
  const std::uint64_t sink_base = ~std::uint64_t{1};  // above any packed split

  for (int starter = 1; starter <= 2; ++starter) {
    const double branch = starter == 1 ? p : 1.0 - p;
    TrickResult trick = rollout(rules, state, starter);
    row.step_moves += branch * trick.moves;
    if (trick.kind == TrickKind::kGameOver) {
      SinkId sink{trick.winner_or_loser};
      add(sink_base + (sink.loser - 1), StepTarget{sink}, branch);
      continue;
    }
    if (static_cast<int>(trick.table.size()) > perm_guard) {
      throw AnalysisError("trick pile of " + std::to_string(trick.table.size()) +
                          " cards exceeds the permutation guard (" +
                          std::to_string(perm_guard) + ")");
    }
    std::vector<Card> perm = trick.table.cards;
    auto by_index = [&](Card a, Card b) {
      return rules.deck.card_index(a) < rules.deck.card_index(b);
    };
    std::sort(perm.begin(), perm.end(), by_index);
    double count = 1.0;
    for (std::size_t i = 2; i <= perm.size(); ++i) count *= double(i);
    const double each = branch / count;

    Split base{trick.left_rem, trick.right_rem};
    OrderedPile& winner = trick.winner_or_loser == 1 ? base.left : base.right;
    const std::size_t rem = winner.size();
    do {
      winner.cards.resize(rem);
      winner.append_bottom(perm);
      add(pack_split(rules.deck, base), StepTarget{base}, each);
    } while (std::next_permutation(perm.begin(), perm.end(), by_index));
  }

  row.entries.reserve(mass.size());
  for (auto& [key, entry] : mass) {
    row.entries.push_back(TransitionEntry{std::move(entry.first),
                                          entry.second});
  }
  return row;
}

ExpectationTable::ExpectationTable(DeckSpec deck, std::vector<Split> states,
                                   std::vector<double> moves,
                                   SolverDiagnostics diagnostics)
    : deck_(std::move(deck)),
      states_(std::move(states)),
      moves_(std::move(moves)),
      diagnostics_(std::move(diagnostics)) {
  index_.reserve(states_.size() * 2);
  for (std::uint32_t i = 0; i < states_.size(); ++i) {
    index_.emplace(pack_split(deck_, states_[i]), i);
  }
}

double ExpectationTable::at(const Split& state) const {
  if (state.absorbing()) return 0.0;
  auto it = index_.find(pack_split(deck_, state));
  if (it == index_.end()) {
    throw std::invalid_argument("state is not a split of the table's deck: " +
                                encode_state(deck_, state));
  }
  return moves_[it->second];
}

namespace {

struct SparseRow {
  std::vector<std::pair<std::uint32_t, double>> q;  // split-to-split entries
  double b = 0.0;
};

double residual_norm(const std::vector<SparseRow>& rows,
                     const std::vector<double>& t) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double r = t[i] - rows[i].b;
    for (const auto& [j, q] : rows[i].q) r -= q * t[j];
    worst = std::max(worst, std::abs(r));
    if (std::isnan(r)) return r;
  }
  return worst;
}

}  // namespace

ExpectationTable expected_moves(const RuleSpec& rules, double p, int cap,
                                SolveMethod method,
                                bool bypass_absorption_check) {
  StateGraph graph = build_g0(rules, cap);
  if (!bypass_absorption_check) {
    std::vector<std::uint32_t> stranded = check_absorbing(graph);
    if (!stranded.empty()) {
      throw AnalysisError(
          "chain is not absorbing: " + std::to_string(stranded.size()) +
          " states cannot reach absorption (first: " +
          graph.encode_vertex(stranded.front()) + ")");
    }
  }

  std::vector<Split> states;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  for (const Split& s : graph.splits()) {
    if (!s.absorbing()) {
      index.emplace(pack_split(rules.deck, s),
                    static_cast<std::uint32_t>(states.size()));
      states.push_back(s);
    }
  }
  const std::size_t m = states.size();

  std::vector<SparseRow> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    TransitionRow row = transitions(rules, states[i], p);
    rows[i].b = row.step_moves;
    for (const TransitionEntry& entry : row.entries) {
      const Split* target = std::get_if<Split>(&entry.target);
      if (!target || target->absorbing()) continue;  // absorbed mass drops out
      rows[i].q.emplace_back(index.at(pack_split(rules.deck, *target)),
                             entry.probability);
    }
  }

  double b_norm = 0.0;
  for (const SparseRow& row : rows) b_norm = std::max(b_norm, row.b);
  const double tolerance = kResidualTolerance * std::max(b_norm, 1.0);

  SolverDiagnostics diag;
  diag.unknowns = m;
  std::vector<double> t(m, 0.0);

  const bool dense = method == SolveMethod::kDenseLu ||
                     (method == SolveMethod::kAuto && m <= kDenseSolveLimit);
  if (m == 0) {
    diag.method = "empty";
  } else if (dense) {
    diag.method = "dense_lu";
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                                  static_cast<Eigen::Index>(m));
    Eigen::VectorXd b(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      b(static_cast<Eigen::Index>(i)) = rows[i].b;
      for (const auto& [j, q] : rows[i].q) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= q;
      }
    }
    Eigen::VectorXd x = a.partialPivLu().solve(b);
    for (std::size_t i = 0; i < m; ++i) {
      t[i] = x(static_cast<Eigen::Index>(i));
    }
  } else {
    diag.method = "gauss_seidel";
    // Q is substochastic with spectral radius < 1 on an absorbing chain, so
    // the sweeps contract. Diagonal self-loop mass is solved out per row.
    std::vector<double> diag_q(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [j, q] : rows[i].q) {
        if (j == i) diag_q[i] += q;
      }
    }
    const std::uint64_t max_sweeps = 1000000;
    std::uint64_t sweep = 0;
    bool degenerate = false;
    for (; sweep < max_sweeps && !degenerate; ++sweep) {
      double delta = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double rhs = rows[i].b;
        for (const auto& [j, q] : rows[i].q) {
          if (j != i) rhs += q * t[j];
        }
        const double denom = 1.0 - diag_q[i];
        const double next =
            denom > 0.0 ? rhs / denom : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(next)) {
          t[i] = next;
          degenerate = true;  // residual check below reports it
          break;
        }
        delta = std::max(delta, std::abs(next - t[i]));
        t[i] = next;
      }
      if (delta <= tolerance) break;
    }
    diag.iterations = sweep + 1;
  }

  diag.residual = residual_norm(rows, t);
  if (!(diag.residual <= tolerance)) {
    throw AnalysisError(
        "chain not absorbing or numerically degenerate: solver residual " +
        std::to_string(diag.residual) + " exceeds tolerance " +
        std::to_string(tolerance));
  }
  return ExpectationTable(rules.deck, std::move(states), std::move(t),
                          std::move(diag));
}

double deal_expectation(const ExpectationTable& table, int left_size) {
  const int n = table.deck().total_count();
  if (left_size < 0 || left_size > n) {
    throw std::invalid_argument("deal_expectation: left_size out of range");
  }
  if (left_size == 0 || left_size == n) return 0.0;  // game already over

  // Non-absorbing states cover every split of this size; the uniform deal
  // has n! of them.
  double total = 0.0;
  std::uint64_t count = 0;
  const auto& states = table.states();
  const auto& moves = table.moves();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (static_cast<int>(states[i].left.size()) == left_size) {
      total += moves[i];
      ++count;
    }
  }
  if (count == 0) {
    throw std::invalid_argument("deal_expectation: no states of that size");
  }
  return total / static_cast<double>(count);
}

double deal_expectation(const RuleSpec& rules, double p, int left_size,
                        int cap) {
  return deal_expectation(expected_moves(rules, p, cap), left_size);
}

}  // namespace bmn
