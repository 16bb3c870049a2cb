// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixture_codes.hpp"
#include "fsmforge/json_io.hpp"
#include "fsmforge/lexer.hpp"
#include "guard_oracle.hpp"
#include "listing.hpp"
#include "paths.hpp"
#include "random_model.hpp"
#include "sim_properties.hpp"

using namespace fsmforge;
using namespace fsmforge::testing;

namespace {

// Time limits, in seconds.
constexpr double kGoldenLimit = 1.0;
constexpr double kSnippetLimit = 1.0;
constexpr double kSimLimit = 30.0;
constexpr double kOracleLimit = 10.0;
constexpr double kRoundTripLimit = 60.0;

// Case counts.
constexpr std::size_t kPropertyCases = 200;
constexpr std::size_t kSequencingCalls = 5;
constexpr std::size_t kOracleRandomCases = 1000;
constexpr std::size_t kRandomModels = 500;
constexpr std::size_t kFuzzInputs = 10000;
constexpr std::size_t kMutatedInputs = 10000;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, double limit, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit > 0 && seconds >= limit) {
    v.pass = false;
    v.detail += (v.detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  if (!v.pass) ++failures;
  std::printf("%s %d %s (%.3f s", v.pass ? "PASS" : "FAIL", number, title, seconds);
  if (limit > 0) std::printf(" of %.0f s", limit);
  std::printf(")%s%s\n", v.detail.empty() ? "" : ": ", v.detail.c_str());
  std::fflush(stdout);
}

Verdict golden() {
  const std::string got = generate(weave(load_corpus("blind_auction.fsm"))).text;
  const auto a = tokens_of(got);
  const auto e = tokens_of(slurp(golden_path("blind_auction_secure.sol")));
  if (auto at = first_token_mismatch(a, e)) {
    return {false, "token " + std::to_string(*at) + " differs: '" + (*at < a.size() ? a[*at].text : "<end>") +
                       "' vs '" + (*at < e.size() ? e[*at].text : "<end>") + "'"};
  }
  return {true, std::to_string(e.size()) + " tokens, 0 diffs"};
}

Verdict snippets() {
  ContractModel m = load_corpus("blind_auction.fsm");
  m.plugins = {};
  const std::string full = generate(weave(m)).text;
  // The printed bid example shows only the first of bid's two actions.
  for (auto& t : m.transitions) {
    if (t.name == "bid") t.statements.resize(1);
  }
  const std::string bid_only = generate(weave(m)).text;
  std::string problems;
  const std::pair<const char*, const std::string*> checks[] = {
      {"section4_states.sol", &full}, {"section4_close.sol", &full}, {"section4_bid.sol", &bid_only}};
  for (const auto& [file, text] : checks) {
    const std::string diff = token_run_diff(*text, slurp(golden_path(file)));
    if (!diff.empty()) problems += std::string(problems.empty() ? "" : "; ") + file + ": " + diff;
  }
  for (const auto& line : function_block(full, "bid")) {
    if (line.find("state = States.") != std::string::npos) problems += "; bid has a state change";
  }
  if (!problems.empty()) return {false, problems};
  return {true, "states, bid and close blocks, 0 diffs"};
}

Verdict additivity() {
  std::size_t functions = 0;
  std::string problems;
  for (const char* name : {"blind_auction.fsm", "voting.fsm", "rps.fsm"}) {
    const ContractModel m = load_corpus(name);
    const std::string none = generate_with(m, false, false);
    const std::string lock = generate_with(m, true, false);
    const std::string counter = generate_with(m, false, true);
    const std::string both = generate_with(m, true, true);
    for (const auto& t : m.transitions) {
      const auto n = static_cast<long>(function_block(none, t.name).size());
      const auto l = static_cast<long>(function_block(lock, t.name).size());
      const auto c = static_cast<long>(function_block(counter, t.name).size());
      const auto b = static_cast<long>(function_block(both, t.name).size());
      ++functions;
      if (n == 0 || b - n != (l - n) + (c - n)) {
        problems += std::string(problems.empty() ? "" : "; ") + name + ":" + t.name;
      }
    }
  }
  if (!problems.empty()) return {false, "not additive: " + problems};
  return {true, std::to_string(functions) + " functions additive; gas figures not reproducible without an EVM"};
}

Verdict properties() {
  const PropertyResult results[] = {
      check_transactionality(101, kPropertyCases),   check_counter_sequencing(kSequencingCalls),
      check_lock_safety(102, kPropertyCases),        check_vulnerability_witness(103, kPropertyCases),
      check_timed_ordering(104, kPropertyCases),     check_admin_floor(105, kPropertyCases)};
  std::ostringstream detail;
  bool pass = true;
  for (const auto& r : results) {
    const bool enough = r.name == "counter sequencing" || r.cases >= kPropertyCases;
    if (!r.ok() || !enough) {
      pass = false;
      detail << r.name << " FAILED (" << r.violations << " violation(s), " << r.cases
             << " cases): " << r.first_violation << "; ";
    } else {
      detail << r.name << " " << r.cases << " cases/" << r.checks << " checks; ";
    }
  }
  std::string text = detail.str();
  if (text.size() >= 2) text.resize(text.size() - 2);
  return {pass, text};
}

Verdict oracle() {
  const OracleReport exhaustive = exhaustive_guard_check(3);
  const OracleReport random = random_guard_check(2024, kOracleRandomCases);
  std::ostringstream detail;
  detail << exhaustive.trees << " trees / " << exhaustive.evaluations << " evaluations exhaustive, "
         << random.trees << " random, " << exhaustive.mismatches + random.mismatches << " mismatches";
  if (exhaustive.mismatches) detail << "; " << exhaustive.first_mismatch;
  if (random.mismatches) detail << "; " << random.first_mismatch;
  return {exhaustive.mismatches == 0 && random.mismatches == 0 && random.trees >= kOracleRandomCases,
          detail.str()};
}

Verdict round_trip() {
  std::size_t checked = 0;
  auto same = [&](const ContractModel& m) {
    ++checked;
    auto dsl = parse_dsl(emit_dsl(m));
    auto json = parse_json(emit_json(m));
    return dsl.ok() && json.ok() && equals(dsl.value(), m) && equals(json.value(), m);
  };
  for (const char* name : {"blind_auction.fsm", "voting.fsm", "rps.fsm"}) {
    if (!same(load_corpus(name))) return {false, std::string("corpus ") + name + " does not round-trip"};
  }
  std::mt19937_64 rng(7);
  for (std::size_t i = 0; i < kRandomModels; ++i) {
    if (!same(random_model(rng))) return {false, "random model " + std::to_string(i) + " does not round-trip"};
  }
  std::uniform_int_distribution<int> byte(0, 255), length(0, 512);
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < kFuzzInputs; ++i) {
    std::string text(static_cast<std::size_t>(length(rng)), '\0');
    for (auto& c : text) c = static_cast<char>(byte(rng));
    auto dsl = parse_dsl(text);
    auto json = parse_json(text);
    lex_fragment(text);
    if ((!dsl.ok() && dsl.diagnostics().empty()) || (!json.ok() && json.diagnostics().empty())) {
      return {false, "fuzz input " + std::to_string(i) + " returned no diagnostics"};
    }
    rejected += !dsl.ok();
  }
  // Random bytes rarely get past the first token, so also mutate real contracts.
  const std::string sources[] = {slurp(corpus_path("blind_auction.fsm")), slurp(corpus_path("voting.fsm")),
                                 slurp(corpus_path("rps.fsm"))};
  std::size_t mutated_ok = 0;
  for (std::size_t i = 0; i < kMutatedInputs; ++i) {
    std::string text = sources[i % 3];
    std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1), edits(1, 4);
    for (std::size_t k = edits(rng); k > 0; --k) text[pos(rng)] = static_cast<char>(byte(rng));
    auto dsl = parse_dsl(text);
    if (!dsl.ok() && dsl.diagnostics().empty()) {
      return {false, "mutated input " + std::to_string(i) + " returned no diagnostics"};
    }
    if (dsl.ok()) {
      ++mutated_ok;
      validate(dsl.value());
    }
  }
  return {true, std::to_string(checked) + " models round-trip; " + std::to_string(kFuzzInputs) +
                    " random inputs, " + std::to_string(rejected) + " rejected with diagnostics; " +
                    std::to_string(kMutatedInputs) + " mutated contracts, " + std::to_string(mutated_ok) +
                    " still parse"};
}

Verdict vectors() {
  std::set<std::string> covered;
  std::string problems;
  for (const auto& run : run_fixtures()) {
    if (triggers_exactly(run)) {
      covered.insert(run.expected);
    } else {
      problems += "; " + run.file + " gives " + std::to_string(run.diagnostics.size()) + " diagnostic(s)";
    }
  }
  std::string missing;
  for (DiagCode code : all_diag_codes()) {
    if (!covered.count(std::string(to_string(code)))) missing += " " + std::string(to_string(code));
  }
  if (!missing.empty()) problems += "; uncovered:" + missing;
  if (!problems.empty()) return {false, problems.substr(2)};
  return {true, std::to_string(covered.size()) + "/" + std::to_string(all_diag_codes().size()) +
                    " codes, each fixture triggers exactly its own"};
}

}  // namespace

int main() {
  criterion(1, "golden reproduction of the secured blind auction", kGoldenLimit, golden);
  criterion(2, "plugin-free snippet reproduction", kSnippetLimit, snippets);
  criterion(3, "per-function modifier line additivity", 0, additivity);
  criterion(4, "simulator property suite", kSimLimit, properties);
  criterion(5, "guard evaluator vs brute-force oracle", kOracleLimit, oracle);
  criterion(6, "round-trip and parser fuzz", kRoundTripLimit, round_trip);
  criterion(7, "validation vectors", 0, vectors);
  return failures;
}
