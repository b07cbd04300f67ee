// Acceptance suite: eight end-to-end checks over the library and the CLI,
// one PASS/FAIL line each. Exits with the number of failed checks.
//
// Usage: bmn_acceptance --bmn <path-to-cli> --configs <config-dir> [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bmn/chain.hpp"
#include "bmn/cycles.hpp"
#include "bmn/simulate.hpp"
#include "support/fixtures.hpp"

using namespace bmn;
using nlohmann::json;

namespace {

std::string g_bmn_path;
std::string g_config_dir;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_command(const std::string& args) {
  const std::string cmd = g_bmn_path + " " + args + " 2>/dev/null";
  CommandResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  std::size_t got;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string strip_wall_time(const std::string& report) {
  std::istringstream in(report);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"wall_time_s\"") != std::string::npos) continue;
    out << line << "\n";
  }
  return out.str();
}

class Checker {
 public:
  explicit Checker(std::string title) : title_(std::move(title)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& text) { notes_.push_back(text); }

  bool finish(double seconds) {
    const bool ok = failures_.empty();
    std::printf("[%s] %s (%.1f s)\n", ok ? "PASS" : "FAIL", title_.c_str(),
                seconds);
    for (const std::string& n : notes_) {
      std::printf("       %s\n", n.c_str());
    }
    for (const std::string& f : failures_) {
      std::printf("       failed: %s\n", f.c_str());
    }
    std::fflush(stdout);
    return ok;
  }

 private:
  std::string title_;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

double max_step_moves(const RuleSpec& rules, const ExpectationTable& table,
                      double p) {
  double worst = 0.0;
  for (const Split& s : table.states()) {
    worst = std::max(worst, transitions(rules, s, p).step_moves);
  }
  return worst;
}

bool criterion1() {
  Checker check(
      "criterion 1: theorem instance (nondegeneracy, lemma, absorption, "
      "solve) on every symmetric fixture, n in 2..6");
  const auto total_start = std::chrono::steady_clock::now();
  for (const auto& fixture : fixtures::relative_fixtures()) {
    const auto start = std::chrono::steady_clock::now();
    StateGraph graph = build_g0(fixture.rules);
    check.require(check_nondegeneracy(graph).empty(),
                  fixture.name + ": nondegeneracy violations");
    LemmaReport lemma = verify_lemma(graph);
    check.require(lemma.all_ok(), fixture.name + ": lemma conditions");
    check.require(check_absorbing(graph).empty(),
                  fixture.name + ": states stranded from absorption");
    ExpectationTable table =
        expected_moves(fixture.rules, 0.5, kDefaultEnumerationCap,
                       SolveMethod::kAuto, /*bypass_absorption_check=*/true);
    const double bound =
        kResidualTolerance *
        std::max(max_step_moves(fixture.rules, table, 0.5), 1.0);
    check.require(table.diagnostics().residual <= bound,
                  fixture.name + ": solver residual " +
                      std::to_string(table.diagnostics().residual));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    check.require(seconds <= 60.0, fixture.name + ": runtime over 60 s");
  }
  return check.finish(std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - total_start)
                          .count());
}

bool criterion2() {
  Checker check(
      "criterion 2: stuck fixture yields 2 nondegeneracy violations, 2 "
      "non-absorbing states, solver refusal and singularity");
  const auto start = std::chrono::steady_clock::now();
  RuleSpec stuck = stuck_rules();
  StateGraph graph = build_g0(stuck);
  check.require(check_nondegeneracy(graph).size() == 2,
                "nondegeneracy violation count != 2");
  check.require(check_absorbing(graph).size() == 2,
                "non-absorbing state count != 2");
  bool refused = false;
  try {
    expected_moves(stuck, 0.5);
  } catch (const AnalysisError&) {
    refused = true;
  }
  check.require(refused, "expected_moves accepted a non-absorbing chain");
  bool singular = false;
  try {
    expected_moves(stuck, 0.5, kDefaultEnumerationCap, SolveMethod::kAuto,
                   /*bypass_absorption_check=*/true);
  } catch (const AnalysisError&) {
    singular = true;
  }
  check.require(singular, "bypassed solve did not report a singularity");

  CommandResult cli =
      run_command("exact --config " + g_config_dir + "/stuck.json");
  check.require(cli.exit_code == 3, "CLI exact on stuck should exit 3");
  check.require(cli.output.find("L:X0|R:Y0") != std::string::npos &&
                    cli.output.find("L:Y0|R:X0") != std::string::npos,
                "CLI report should list both self-loop states");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.require(seconds <= 1.0, "runtime over 1 s");
  return check.finish(seconds);
}

bool criterion3() {
  Checker check(
      "criterion 3: Monte-Carlo mean within 3 standard errors of the exact "
      "expectation, 50k games per (fixture, p)");
  const auto start = std::chrono::steady_clock::now();
  for (const auto& fixture : fixtures::relative_fixtures()) {
    const int n = fixture.rules.deck.total_count();
    if (n > 5) continue;
    const int left_size = n / 2;
    for (double p : {0.3, 0.5, 0.7}) {
      ExpectationTable table = expected_moves(fixture.rules, p);
      const double exact = deal_expectation(table, left_size);
      McStats stats = monte_carlo(fixture.rules, left_size, p, 50000,
                                  20240801, 100000);
      check.require(stats.capped == 0, fixture.name + ": capped games");
      const double diff = std::abs(stats.mean_moves - exact);
      check.require(diff <= 3.0 * stats.stderr_moves,
                    fixture.name + " p=" + std::to_string(p) + ": |" +
                        std::to_string(stats.mean_moves) + " - " +
                        std::to_string(exact) + "| > 3 stderr");
    }
  }
  McStats two_card = monte_carlo(fixtures::pn2(), 1, 0.5, 50000, 1, 1000);
  check.require(two_card.mean_moves == 2.0,
                "two-card deck mean is not exactly 2.0");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.require(seconds <= 120.0, "runtime over 120 s");
  return check.finish(seconds);
}

bool criterion4() {
  Checker check(
      "criterion 4: reconstruction inverts canonical successors; in-degree "
      "by counting equals in-degree by reconstruction; out-degree is 2");
  const auto start = std::chrono::steady_clock::now();
  std::vector<fixtures::NamedFixture> all = fixtures::relative_fixtures();
  all.push_back({"stuck", stuck_rules()});
  for (const auto& fixture : all) {
    StateGraph graph = build_g0(fixture.rules);
    std::vector<int> in_direct(graph.num_splits(), 0);
    std::vector<int> in_rec(graph.num_splits(), 0);
    std::uint64_t taken_edges = 0;
    for (std::uint32_t v = 0; v < graph.num_splits(); ++v) {
      const Split& s = graph.splits()[v];
      if (s.absorbing()) continue;
      const auto& edges = graph.g0_edges(v);
      check.require(edges[0] != StateGraph::kNoEdge &&
                        edges[1] != StateGraph::kNoEdge,
                    fixture.name + ": out-degree != 2 at " +
                        graph.encode_vertex(v));
      for (int starter = 1; starter <= 2; ++starter) {
        TrickResult trick = rollout(fixture.rules, s, starter);
        if (trick.kind != TrickKind::kTaken) continue;
        Split successor = successor_from_taken(trick);
        ++in_direct[graph.id_of(successor)];
        ++taken_edges;
        const Side side =
            trick.winner_or_loser == 1 ? Side::kLeft : Side::kRight;
        PredecessorResult r =
            reconstruct_predecessor(fixture.rules, successor, side);
        const bool round_trip = r.found && r.predecessor == s &&
                                r.starter == starter &&
                                r.trick_length == trick.moves;
        check.require(round_trip, fixture.name + ": round-trip failed at " +
                                      graph.encode_vertex(v) + " starter " +
                                      std::to_string(starter));
      }
    }
    for (std::uint32_t v = 0; v < graph.num_splits(); ++v) {
      const Split& s = graph.splits()[v];
      in_rec[v] =
          (reconstruct_predecessor(fixture.rules, s, Side::kLeft).found ? 1
                                                                        : 0) +
          (reconstruct_predecessor(fixture.rules, s, Side::kRight).found ? 1
                                                                         : 0);
      if (in_direct[v] != in_rec[v]) {
        check.require(false, fixture.name + ": in-degree mismatch at " +
                                 graph.encode_vertex(v));
      }
    }
    check.note(fixture.name + ": " + std::to_string(taken_edges) +
               " taken edges round-tripped");
  }
  return check.finish(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count());
}

bool criterion5() {
  Checker check(
      "criterion 5: 100k randomized classical games, p=0.5, cap 1e7, zero "
      "capped");
  const auto start = std::chrono::steady_clock::now();
  McStats stats =
      monte_carlo(classical_rules(), 26, 0.5, 100000, 20240801, 10000000);
  check.require(stats.capped == 0,
                std::to_string(stats.capped) + " games hit the cap");
  check.require(stats.terminated == 100000, "not all games terminated");
  check.note("mean moves " + std::to_string(stats.mean_moves) +
             ", max moves " + std::to_string(stats.max_moves));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.require(seconds <= 600.0, "runtime over 10 min");
  return check.finish(seconds);
}

bool criterion6() {
  Checker check(
      "criterion 6: deterministic classical mode, 2e6 random deals, finds a "
      "non-terminating deal at frequency within 10x of 1/150000 under at "
      "least one pickup convention");
  const auto start = std::chrono::steady_clock::now();
  const double target = 1.0 / 150000.0;
  const double lo = target / 10.0;
  const double hi = target * 10.0;
  bool any_convention_ok = false;
  for (PickupOrder pickup :
       {PickupOrder::kPlayedOrder, PickupOrder::kReversePlayedOrder}) {
    DeterministicConfig config;
    config.pickup_order = pickup;
    CycleReport report =
        search_cycles(classical_rules(), 2000000, 424242, config, 4);
    for (const CycleExample& example : report.examples) {
      check.require(
          verify_cycle(classical_rules(), example.witness_state,
                       example.witness_leader, example.period, config),
          "reported cycle failed replay verification");
    }
    const char* name =
        pickup == PickupOrder::kPlayedOrder ? "played" : "reverse";
    check.note(std::string(name) + ": " + std::to_string(report.cycles) +
               " cycles in " + std::to_string(report.deals) +
               " deals (frequency " + std::to_string(report.frequency) + ")");
    if (report.cycles >= 1 && report.frequency >= lo &&
        report.frequency <= hi) {
      any_convention_ok = true;
      break;
    }
  }
  check.require(any_convention_ok,
                "no pickup convention shows a non-terminating deal at a "
                "frequency within a factor of 10 of 1/150000");
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  check.require(seconds <= 1800.0, "runtime over 30 min");
  return check.finish(seconds);
}

bool criterion7() {
  Checker check("criterion 7: enumerate_splits counts (n+1)! for n in 1..6");
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t expected = 1;
  for (int n = 1; n <= 6; ++n) {
    expected *= static_cast<std::uint64_t>(n + 1);
    const std::size_t got =
        enumerate_splits(fixtures::court_free(n).deck).size();
    check.require(got == expected,
                  "n=" + std::to_string(n) + ": got " + std::to_string(got) +
                      ", want " + std::to_string(expected));
  }
  check.require(enumerate_splits(fixtures::pn2().deck).size() == 6,
                "two-card deck should have 6 splits");
  check.require(enumerate_splits(fixtures::mini1().deck).size() == 24,
                "three-card deck should have 24 splits");
  return check.finish(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count());
}

bool criterion8() {
  Checker check(
      "criterion 8: byte-identical reports for every subcommand, rerun at "
      "different parallelism, wall time excluded");
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, std::string>> invocations = {
      {"enumerate", "enumerate --config " + g_config_dir + "/mini1.json"},
      {"check", "check --config " + g_config_dir + "/mini1.json"},
      {"exact", "exact --config " + g_config_dir +
                    "/mini1.json --state 'L:P0,N0|R:N1'"},
      {"simulate", "simulate --config " + g_config_dir +
                       "/mini1.json --games 5000 --seed 11 --bucket-width 1"},
      {"cycles", "cycles --config " + g_config_dir +
                     "/jj6.json --deals 3000 --seed 11"},
  };
  for (const auto& [name, args] : invocations) {
    CommandResult one = run_command(args + " --threads 1");
    CommandResult three = run_command(args + " --threads 3");
    check.require(one.exit_code == 0,
                  name + ": exit code " + std::to_string(one.exit_code));
    check.require(three.exit_code == 0,
                  name + ": exit code " + std::to_string(three.exit_code));
    check.require(!one.output.empty(), name + ": empty report");
    check.require(strip_wall_time(one.output) == strip_wall_time(three.output),
                  name + ": reports differ across parallelism degrees");
    CommandResult again = run_command(args + " --threads 3");
    check.require(strip_wall_time(three.output) ==
                      strip_wall_time(again.output),
                  name + ": reports differ across reruns");
  }
  return check.finish(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--bmn" && i + 1 < argc) {
      g_bmn_path = argv[++i];
    } else if (arg == "--configs" && i + 1 < argc) {
      g_config_dir = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "unknown argument: " << arg << "\n";
      return 64;
    }
  }
  if (g_bmn_path.empty() || g_config_dir.empty()) {
    std::cerr
        << "usage: bmn_acceptance --bmn <cli> --configs <dir> [--only N]\n";
    return 64;
  }

  const std::vector<std::function<bool()>> criteria = {
      criterion1, criterion2, criterion3, criterion4,
      criterion5, criterion6, criterion7, criterion8};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && only != static_cast<int>(i + 1)) continue;
    if (!criteria[i]()) ++failures;
  }
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria failed\n", failures);
  }
  return failures;
}
