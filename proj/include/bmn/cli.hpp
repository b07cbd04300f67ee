// JSON-config front door: parse and validate rule configs, dispatch the
// subcommands (simulate, exact, check, cycles, enumerate), and emit
// schema-versioned JSON reports on standard output. Identical invocations
// produce byte-identical reports except for the wall_time_s field.

#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "bmn/cycles.hpp"
#include "bmn/rules.hpp"

namespace bmn {

// Configuration file errors and bad flag values; the CLI exits 2 on these.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  int schema_version = 1;
  RuleSpec rules;
  double p = 0.5;
  int left_size = -1;  // -1: half the deck
  std::uint64_t seed = 0;
  std::uint64_t games = 10000;
  std::uint64_t deals = 100000;
  std::uint64_t move_cap = 10000000;
  PickupOrder pickup = PickupOrder::kPlayedOrder;
  int first_leader = 1;
  std::uint64_t bucket_width = 0;  // 0: no histogram
  int enumeration_cap = kDefaultEnumerationCap;
  int threads = 0;  // 0: hardware concurrency

  int effective_left_size() const {
    return left_size >= 0 ? left_size : rules.deck.total_count() / 2;
  }

  friend bool operator==(const Config& a, const Config& b);
};

// Strict parse: unknown keys are rejected with the offending key named;
// missing required keys likewise. `p` must lie strictly inside (0,1).
Config parse_config_text(const std::string& text);
Config parse_config(const std::string& path);

// Canonical JSON form; parse_config_text(serialize_config(c).dump()) == c.
nlohmann::json serialize_config(const Config& config);

// Stable FNV-1a digest of the canonical form, echoed in every report.
std::string config_digest(const Config& config);

// Exit codes: 0 success, 2 config/flag validation failure, 3 analysis
// refusal (state space over cap, non-absorbing chain for `exact`).
int run_cli(int argc, const char* const* argv);

}  // namespace bmn
