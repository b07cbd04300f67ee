#include "bmn/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "bmn/chain.hpp"
#include "bmn/graph.hpp"
#include "bmn/simulate.hpp"

namespace bmn {

using nlohmann::json;

bool operator==(const Config& a, const Config& b) {
  return a.schema_version == b.schema_version && a.rules == b.rules &&
         a.p == b.p && a.left_size == b.left_size && a.seed == b.seed &&
         a.games == b.games && a.deals == b.deals &&
         a.move_cap == b.move_cap && a.pickup == b.pickup &&
         a.first_leader == b.first_leader &&
         a.bucket_width == b.bucket_width &&
         a.enumeration_cap == b.enumeration_cap;
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& require_key(const json& obj, const char* key,
                        const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("config missing required key '" + std::string(key) +
                      "' in " + where);
  }
  return *it;
}

template <typename T>
T read_as(const json& value, const std::string& what) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + what + "' has the wrong type");
  }
}

template <typename T>
T read_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  return read_as<T>(*it, key);
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("p must lie strictly inside (0,1)");
  }
}

PickupOrder parse_pickup(const std::string& text) {
  if (text == "played") return PickupOrder::kPlayedOrder;
  if (text == "reverse") return PickupOrder::kReversePlayedOrder;
  throw ConfigError("pickup must be 'played' or 'reverse', got '" + text +
                    "'");
}

std::string pickup_name(PickupOrder order) {
  return order == PickupOrder::kPlayedOrder ? "played" : "reverse";
}

RuleDecision parse_decision(const json& value, const std::string& where) {
  if (!value.is_object()) {
    throw ConfigError("fixture table entry " + where + " must be an object");
  }
  reject_unknown_keys(value, where, {"verdict", "who"});
  const std::string verdict =
      read_as<std::string>(require_key(value, "verdict", where), where);
  const std::string who =
      read_as<std::string>(require_key(value, "who", where), where);
  RuleDecision decision;
  if (verdict == "continue") {
    decision.verdict = Verdict::kContinue;
  } else if (verdict == "finish") {
    decision.verdict = Verdict::kFinish;
  } else {
    throw ConfigError("fixture verdict must be 'continue' or 'finish' in " +
                      where);
  }
  if (who == "starter") {
    decision.who = RelativePlayer::kStarter;
  } else if (who == "opponent") {
    decision.who = RelativePlayer::kOpponent;
  } else {
    throw ConfigError("fixture who must be 'starter' or 'opponent' in " +
                      where);
  }
  return decision;
}

}  // namespace

Config parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(
      j, "config",
      {"schema_version", "ranks", "indexing", "fixture_table", "court_free",
       "p", "left_size", "seed", "games", "deals", "move_cap", "pickup",
       "first_leader", "bucket_width", "enumeration_cap"});

  Config config;
  config.schema_version =
      read_as<int>(require_key(j, "schema_version", "config"), "schema_version");
  if (config.schema_version != 1) {
    throw ConfigError("unsupported schema_version " +
                      std::to_string(config.schema_version));
  }

  const json& ranks = require_key(j, "ranks", "config");
  if (!ranks.is_array() || ranks.empty()) {
    throw ConfigError("config key 'ranks' must be a non-empty array");
  }
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    const std::string where = "ranks[" + std::to_string(i) + "]";
    if (!ranks[i].is_object()) {
      throw ConfigError("config " + where + " must be an object");
    }
    reject_unknown_keys(ranks[i], where, {"name", "count", "penalty"});
    RankSpec rank;
    rank.name =
        read_as<std::string>(require_key(ranks[i], "name", where), where);
    rank.count = read_as<int>(require_key(ranks[i], "count", where), where);
    rank.penalty = read_or<int>(ranks[i], "penalty", 0);
    config.rules.deck.ranks.push_back(std::move(rank));
  }

  const std::string indexing =
      read_or<std::string>(j, "indexing", "relative");
  if (indexing == "relative") {
    config.rules.indexing = RuleIndexing::kRelative;
  } else if (indexing == "absolute_fixture") {
    config.rules.indexing = RuleIndexing::kAbsoluteFixture;
  } else {
    throw ConfigError(
        "indexing must be 'relative' or 'absolute_fixture', got '" + indexing +
        "'");
  }

  if (j.contains("fixture_table")) {
    if (config.rules.indexing != RuleIndexing::kAbsoluteFixture) {
      throw ConfigError(
          "fixture_table requires indexing = 'absolute_fixture'");
    }
    const json& table = j["fixture_table"];
    if (!table.is_object()) {
      throw ConfigError("fixture_table must be an object");
    }
    for (const auto& item : table.items()) {
      config.rules.fixture_table[item.key()] =
          parse_decision(item.value(), "fixture_table['" + item.key() + "']");
    }
  }
  config.rules.court_free = read_or<bool>(j, "court_free", false);

  config.p = read_or<double>(j, "p", 0.5);
  check_probability(config.p);

  const int n = config.rules.deck.total_count();
  config.left_size = read_or<int>(j, "left_size", -1);
  if (config.left_size != -1 &&
      (config.left_size < 0 || config.left_size > n)) {
    throw ConfigError("left_size must lie in [0, " + std::to_string(n) + "]");
  }

  config.seed = read_or<std::uint64_t>(j, "seed", 0);
  config.games = read_or<std::uint64_t>(j, "games", config.games);
  config.deals = read_or<std::uint64_t>(j, "deals", config.deals);
  config.move_cap = read_or<std::uint64_t>(j, "move_cap", config.move_cap);
  if (config.games < 1) throw ConfigError("games must be >= 1");
  if (config.deals < 1) throw ConfigError("deals must be >= 1");
  if (config.move_cap < 1) throw ConfigError("move_cap must be >= 1");

  config.pickup = parse_pickup(read_or<std::string>(j, "pickup", "played"));
  config.first_leader = read_or<int>(j, "first_leader", 1);
  if (config.first_leader != 1 && config.first_leader != 2) {
    throw ConfigError("first_leader must be 1 or 2");
  }
  config.bucket_width = read_or<std::uint64_t>(j, "bucket_width", 0);
  config.enumeration_cap =
      read_or<int>(j, "enumeration_cap", kDefaultEnumerationCap);
  if (config.enumeration_cap < 1) {
    throw ConfigError("enumeration_cap must be >= 1");
  }
  return config;
}

Config parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

json serialize_config(const Config& config) {
  json ranks = json::array();
  for (const RankSpec& r : config.rules.deck.ranks) {
    ranks.push_back(json{{"name", r.name},
                         {"count", r.count},
                         {"penalty", r.penalty}});
  }
  json j{{"schema_version", config.schema_version},
         {"ranks", std::move(ranks)},
         {"indexing", config.rules.indexing == RuleIndexing::kRelative
                          ? "relative"
                          : "absolute_fixture"},
         {"court_free", config.rules.court_free},
         {"p", config.p},
         {"seed", config.seed},
         {"games", config.games},
         {"deals", config.deals},
         {"move_cap", config.move_cap},
         {"pickup", pickup_name(config.pickup)},
         {"first_leader", config.first_leader},
         {"bucket_width", config.bucket_width},
         {"enumeration_cap", config.enumeration_cap}};
  if (config.left_size != -1) j["left_size"] = config.left_size;
  if (config.rules.indexing == RuleIndexing::kAbsoluteFixture) {
    json table = json::object();
    for (const auto& [key, decision] : config.rules.fixture_table) {
      table[key] = json{
          {"verdict",
           decision.verdict == Verdict::kContinue ? "continue" : "finish"},
          {"who", decision.who == RelativePlayer::kStarter ? "starter"
                                                           : "opponent"}};
    }
    j["fixture_table"] = std::move(table);
  }
  return j;
}

std::string config_digest(const Config& config) {
  const std::string text = serialize_config(config).dump();
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

namespace {

json run_enumerate(const Config& config) {
  std::vector<Split> splits =
      enumerate_splits(config.rules.deck, config.enumeration_cap);
  return json{{"deck_size", config.rules.deck.total_count()},
              {"cap", config.enumeration_cap},
              {"states", splits.size()}};
}

json run_check(const Config& config) {
  StateGraph graph = build_g0(config.rules, config.enumeration_cap);

  json violations = json::array();
  for (std::uint32_t v : check_nondegeneracy(graph)) {
    violations.push_back(graph.encode_vertex(v));
  }

  LemmaReport lemma = verify_lemma(graph);
  json lemma_violations = json::array();
  for (const auto& [state, condition] : lemma.violations) {
    lemma_violations.push_back(json::array({state, condition}));
  }
  json histogram = json::object();
  for (const auto& [degree, count] : lemma.in_degree_histogram) {
    histogram[std::to_string(degree)] = count;
  }

  json stranded = json::array();
  for (std::uint32_t v : check_absorbing(graph)) {
    stranded.push_back(graph.encode_vertex(v));
  }

  return json{{"deck_size", config.rules.deck.total_count()},
              {"states", graph.num_splits()},
              {"nondegeneracy_violations", std::move(violations)},
              {"lemma",
               {{"out_degree_ok", lemma.out_degree_ok},
                {"in_degree_ok", lemma.in_degree_ok},
                {"escape_ancestor_ok", lemma.escape_ancestor_ok},
                {"all_ok", lemma.all_ok()},
                {"violations", std::move(lemma_violations)},
                {"in_degree_histogram", std::move(histogram)}}},
              {"non_absorbing_states", std::move(stranded)}};
}

// Returns the results object; sets `refused` on a non-absorbing chain.
json run_exact(const Config& config, const std::string& state_query,
               bool& refused) {
  StateGraph graph = build_g0(config.rules, config.enumeration_cap);
  std::vector<std::uint32_t> stranded = check_absorbing(graph);
  if (!stranded.empty()) {
    refused = true;
    json list = json::array();
    for (std::uint32_t v : stranded) list.push_back(graph.encode_vertex(v));
    return json{{"error", "chain is not absorbing"},
                {"non_absorbing_states", std::move(list)}};
  }

  ExpectationTable table =
      expected_moves(config.rules, config.p, config.enumeration_cap,
                     SolveMethod::kAuto, /*bypass_absorption_check=*/true);

  json expectations = json::object();
  for (std::size_t i = 0; i < table.states().size(); ++i) {
    expectations[encode_state(config.rules.deck, table.states()[i])] =
        table.moves()[i];
  }

  json results{
      {"p", config.p},
      {"left_size", config.effective_left_size()},
      {"states", graph.num_splits()},
      {"solver",
       {{"method", table.diagnostics().method},
        {"residual", table.diagnostics().residual},
        {"iterations", table.diagnostics().iterations},
        {"unknowns", table.diagnostics().unknowns}}},
      {"deal_expectation",
       deal_expectation(table, config.effective_left_size())},
      {"expectations", std::move(expectations)}};
  if (!state_query.empty()) {
    Split state = parse_state(config.rules.deck, state_query);
    results["state_query"] = json{
        {"state", encode_state(config.rules.deck, state)},
        {"expected_moves", table.at(state)}};
  }
  return results;
}

json run_simulate(const Config& config, int threads) {
  McStats stats = monte_carlo(config.rules, config.effective_left_size(),
                              config.p, config.games, config.seed,
                              config.move_cap, threads);
  json results{{"p", config.p},
               {"left_size", config.effective_left_size()},
               {"games", stats.games},
               {"move_cap", config.move_cap},
               {"master_seed", config.seed},
               {"terminated", stats.terminated},
               {"capped", stats.capped},
               {"mean_moves", stats.mean_moves},
               {"stderr_moves", stats.stderr_moves},
               {"max_moves", stats.max_moves},
               {"mean_tricks", stats.mean_tricks},
               {"wins", json::array({stats.wins[0], stats.wins[1]})}};
  if (config.bucket_width > 0) {
    json buckets = json::array();
    for (const auto& [bucket, count] :
         histogram(config.rules, config.effective_left_size(), config.p,
                   config.games, config.seed, config.move_cap,
                   config.bucket_width, threads)) {
      buckets.push_back(json::array({bucket, count}));
    }
    results["histogram"] =
        json{{"bucket_width", config.bucket_width},
             {"buckets", std::move(buckets)}};
  }
  return results;
}

json run_cycles(const Config& config, int threads) {
  DeterministicConfig det{config.pickup, config.first_leader};
  CycleReport report =
      search_cycles(config.rules, config.deals, config.seed, det, 8, threads);
  json examples = json::array();
  for (const CycleExample& example : report.examples) {
    examples.push_back(
        json{{"deal", encode_state(config.rules.deck, example.deal)},
             {"deal_index", example.deal_index},
             {"preperiod", example.preperiod},
             {"period", example.period},
             {"witness", encode_state(config.rules.deck,
                                      example.witness_state)},
             {"witness_leader", example.witness_leader}});
  }
  return json{{"deals", report.deals},
              {"pickup", pickup_name(config.pickup)},
              {"first_leader", config.first_leader},
              {"master_seed", config.seed},
              {"terminated", report.terminated},
              {"cycles", report.cycles},
              {"frequency", report.frequency},
              {"mean_moves_terminated", report.mean_moves},
              {"max_moves_terminated", report.max_moves},
              {"examples", std::move(examples)}};
}

struct SubFlags {
  CLI::App* cmd = nullptr;
  std::string config_path;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t games = 0;
  std::uint64_t deals = 0;
  std::uint64_t move_cap = 0;
  std::uint64_t bucket_width = 0;
  int left_size = 0;
  int first_leader = 0;
  int threads = 0;
  std::string pickup;
  std::string state;
  CLI::Option* o_p = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_games = nullptr;
  CLI::Option* o_deals = nullptr;
  CLI::Option* o_move_cap = nullptr;
  CLI::Option* o_bucket = nullptr;
  CLI::Option* o_left = nullptr;
  CLI::Option* o_leader = nullptr;
  CLI::Option* o_pickup = nullptr;
  CLI::Option* o_state = nullptr;
  CLI::Option* o_threads = nullptr;
};

SubFlags* add_subcommand(CLI::App& app, std::vector<SubFlags>& storage,
                         const char* name, const char* description) {
  SubFlags& flags = storage.emplace_back();
  flags.cmd = app.add_subcommand(name, description);
  flags.cmd->add_option("--config", flags.config_path, "JSON config file")
      ->required();
  flags.o_p = flags.cmd->add_option("--p", flags.p,
                                    "probability that player 1 starts a trick");
  flags.o_seed = flags.cmd->add_option("--seed", flags.seed, "master seed");
  flags.o_games = flags.cmd->add_option("--games", flags.games,
                                        "Monte-Carlo game count");
  flags.o_deals = flags.cmd->add_option("--deals", flags.deals,
                                        "deterministic-search deal count");
  flags.o_move_cap =
      flags.cmd->add_option("--move-cap", flags.move_cap, "game move cap");
  flags.o_left = flags.cmd->add_option("--left-size", flags.left_size,
                                       "cards dealt to player 1");
  flags.o_pickup = flags.cmd->add_option(
      "--pickup", flags.pickup, "pickup order: played | reverse");
  flags.o_state =
      flags.cmd->add_option("--state", flags.state, "state encoding to query");
  flags.o_bucket = flags.cmd->add_option("--bucket-width", flags.bucket_width,
                                         "histogram bucket width");
  flags.o_leader = flags.cmd->add_option("--first-leader", flags.first_leader,
                                         "deterministic first leader (1|2)");
  flags.o_threads =
      flags.cmd->add_option("--threads", flags.threads, "worker threads");
  return &flags;
}

void apply_overrides(const SubFlags& flags, Config& config, int& threads) {
  if (flags.o_p->count()) {
    check_probability(flags.p);
    config.p = flags.p;
  }
  if (flags.o_seed->count()) config.seed = flags.seed;
  if (flags.o_games->count()) {
    if (flags.games < 1) throw ConfigError("games must be >= 1");
    config.games = flags.games;
  }
  if (flags.o_deals->count()) {
    if (flags.deals < 1) throw ConfigError("deals must be >= 1");
    config.deals = flags.deals;
  }
  if (flags.o_move_cap->count()) {
    if (flags.move_cap < 1) throw ConfigError("move_cap must be >= 1");
    config.move_cap = flags.move_cap;
  }
  if (flags.o_left->count()) {
    const int n = config.rules.deck.total_count();
    if (flags.left_size < 0 || flags.left_size > n) {
      throw ConfigError("left_size must lie in [0, " + std::to_string(n) +
                        "]");
    }
    config.left_size = flags.left_size;
  }
  if (flags.o_pickup->count()) config.pickup = parse_pickup(flags.pickup);
  if (flags.o_leader->count()) {
    if (flags.first_leader != 1 && flags.first_leader != 2) {
      throw ConfigError("first_leader must be 1 or 2");
    }
    config.first_leader = flags.first_leader;
  }
  if (flags.o_bucket->count()) config.bucket_width = flags.bucket_width;
  if (flags.o_threads->count()) {
    if (flags.threads < 0) throw ConfigError("threads must be >= 0");
    threads = flags.threads;
  }
}

void print_report(const std::string& command, const Config& config,
                  json results, double wall_time_s) {
  json report{{"schema_version", 1},
              {"command", command},
              {"config_digest", config_digest(config)},
              {"results", std::move(results)},
              {"wall_time_s", wall_time_s}};
  std::cout << report.dump(2) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"beggar-my-neighbour style card game analysis"};
  app.require_subcommand(1);
  std::vector<SubFlags> storage;
  storage.reserve(5);
  SubFlags* simulate_cmd = add_subcommand(
      app, storage, "simulate", "Monte-Carlo statistics of the randomized game");
  SubFlags* exact_cmd = add_subcommand(
      app, storage, "exact", "exact expected game length by linear solve");
  SubFlags* check_cmd = add_subcommand(
      app, storage, "check",
      "nondegeneracy, degree-condition and absorption verification");
  SubFlags* cycles_cmd = add_subcommand(
      app, storage, "cycles", "deterministic-game cycle search");
  SubFlags* enumerate_cmd = add_subcommand(
      app, storage, "enumerate", "count the ordered splits of the deck");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help() << std::flush;
      return 0;
    }
    std::cerr << e.what() << "\n";
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    SubFlags* active = nullptr;
    for (SubFlags& flags : storage) {
      if (flags.cmd->parsed()) active = &flags;
    }
    Config config = parse_config(active->config_path);
    int threads = 0;
    apply_overrides(*active, config, threads);

    const std::vector<std::string> diagnostics = validate(config.rules);
    if (!diagnostics.empty()) {
      for (const std::string& d : diagnostics) {
        std::cerr << "config validation: " << d << "\n";
      }
      return 2;
    }

    json results;
    std::string command;
    int exit_code = 0;
    if (active == enumerate_cmd) {
      command = "enumerate";
      results = run_enumerate(config);
    } else if (active == check_cmd) {
      command = "check";
      results = run_check(config);
    } else if (active == exact_cmd) {
      command = "exact";
      bool refused = false;
      results = run_exact(config, active->state, refused);
      if (refused) exit_code = 3;
    } else if (active == simulate_cmd) {
      command = "simulate";
      results = run_simulate(config, threads);
    } else if (active == cycles_cmd) {
      command = "cycles";
      results = run_cycles(config, threads);
    } else {
      std::cerr << "error: no subcommand selected\n";
      return 2;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    print_report(command, config, std::move(results), wall);
    return exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace bmn
