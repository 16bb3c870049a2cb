#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fsmforge/sim.hpp"

namespace fsmforge {

// Scenario script, one command per line, `#` starts a comment:
//
//   time <seconds>
//   env <ident>=<int> [...]
//   call <transition> as <actor> [n=<int>] [g<k>=<true|false> ...]
//        [reenter=<transition>] [reenter_n=<int>] [expect <ok|revert|revert:<Reason>>]
//   admin <add|remove> <actor> by <actor> [expect <ok|revert|revert:<Reason>>]
//   assert state=<StateId> | counter=<int> | admin(<actor>)=<true|false>

class ScenarioSyntaxError : public std::runtime_error {
 public:
  ScenarioSyntaxError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct Expectation {
  bool ok = true;
  std::optional<RevertReason> reason;  // only checked when set
};

struct TimeStep {
  std::uint64_t seconds = 0;
};
struct EnvStep {
  std::vector<std::pair<std::string, BigInt>> bindings;
};
struct CallStep {
  Invocation call;
  std::optional<Expectation> expect;
};
struct AdminStep {
  AdminAction action = AdminAction::Add;
  ActorId target;
  ActorId sender;
  std::optional<Expectation> expect;
};
struct AssertStep {
  enum class What { State, Counter, Admin };
  What what = What::State;
  std::string state;
  std::uint64_t counter = 0;
  ActorId actor;
  bool admin = false;
};

struct ScenarioStep {
  int line = 0;
  std::string text;
  std::variant<TimeStep, EnvStep, CallStep, AdminStep, AssertStep> command;
};

/// Parses one non-blank, non-comment line. Throws ScenarioSyntaxError.
ScenarioStep parse_scenario_line(std::string_view line, int line_number);

/// Blank and comment lines are skipped. Throws ScenarioSyntaxError.
std::vector<ScenarioStep> parse_scenario(std::string_view script);

struct Snapshot {
  std::string state;
  std::uint64_t counter = 0;
  std::vector<ActorId> admins;
  std::uint64_t now = 0;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct StepResult {
  std::size_t index = 0;  // 1-based step number
  int line = 0;
  std::string text;
  bool ok = true;
  std::string message;  // outcome description or failure reason
};

struct ScenarioReport {
  std::vector<StepResult> steps;
  Snapshot final_snapshot;

  std::size_t failures() const;
  bool passed() const { return failures() == 0; }
};

Snapshot snapshot(const SimSession& session);
std::string render(const Snapshot& snap);
std::string render(const Outcome& outcome);
std::string render(const ScenarioReport& report);

/// Drives one session step by step; the REPL and run_scenario share it.
class ScenarioRunner {
 public:
  explicit ScenarioRunner(const WovenContract& woven, const SimConfig& config = {});

  StepResult execute(const ScenarioStep& step);
  const SimSession& session() const { return session_; }

 private:
  SimSession session_;
  std::size_t executed_ = 0;
};

/// Parses the whole script first, then executes it.
ScenarioReport run_scenario(const WovenContract& woven, std::string_view script,
                            const SimConfig& config = {});

}  // namespace fsmforge
