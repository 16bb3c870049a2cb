#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "fsmforge/codegen.hpp"
#include "fsmforge/dsl.hpp"
#include "fsmforge/guard.hpp"
#include "fsmforge/json_io.hpp"
#include "fsmforge/scenario.hpp"
#include "fsmforge/validate.hpp"

using namespace fsmforge;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(FSMFORGE_SOURCE_DIR) + "/corpus/" + name, std::ios::binary);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

const std::string& auction_text() {
  static const std::string text = slurp("blind_auction.fsm");
  return text;
}

ContractModel auction() { return parse_dsl(auction_text()).value(); }

void BM_ParseDsl(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_dsl(auction_text()));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * auction_text().size()));
}
BENCHMARK(BM_ParseDsl);

void BM_ParseJson(benchmark::State& state) {
  const std::string json = emit_json(auction());
  for (auto _ : state) benchmark::DoNotOptimize(parse_json(json));
}
BENCHMARK(BM_ParseJson);

void BM_Validate(benchmark::State& state) {
  const ContractModel m = auction();
  for (auto _ : state) benchmark::DoNotOptimize(validate(m));
}
BENCHMARK(BM_Validate);

void BM_WeaveAndGenerate(benchmark::State& state) {
  const ContractModel m = auction();
  for (auto _ : state) benchmark::DoNotOptimize(generate(weave(m)));
}
BENCHMARK(BM_WeaveAndGenerate);

void BM_TokenizeSolidity(benchmark::State& state) {
  const std::string text = generate(weave(auction())).text;
  for (auto _ : state) benchmark::DoNotOptimize(tokenize_solidity(text));
}
BENCHMARK(BM_TokenizeSolidity);

void BM_GuardEval(benchmark::State& state) {
  const GuardAst ast = parse_guard_expr("now >= creationTime + 5 days && (x * 3 - y) % 7 != 2 || !(x < y)");
  const std::map<std::string, BigInt, std::less<>> vars = {{"x", 11}, {"y", -4}};
  GuardEnv env{500000, 0, &vars};
  for (auto _ : state) benchmark::DoNotOptimize(eval_guard(ast, env, std::nullopt));
}
BENCHMARK(BM_GuardEval);

void BM_HappyScenario(benchmark::State& state) {
  const WovenContract w = weave(auction());
  const std::string script = slurp("blind_auction_happy.scn");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(w, script));
}
BENCHMARK(BM_HappyScenario);

void BM_Invoke(benchmark::State& state) {
  ContractModel m = auction();
  m.plugins = {};
  m.plugins.locking = true;
  const WovenContract w = weave(m);
  SimSession session = new_session(w);
  Invocation bid;
  bid.transition = "bid";
  bid.sender = "alice";
  for (auto _ : state) benchmark::DoNotOptimize(invoke(session, bid));
}
BENCHMARK(BM_Invoke);

}  // namespace
BENCHMARK_MAIN();
