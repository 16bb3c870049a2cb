#include "fsmforge/scenario.hpp"

#include <charconv>
#include <sstream>

namespace fsmforge {

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
    line.remove_suffix(1);
  }
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
  return line;
}

class LineParser {
 public:
  LineParser(std::string_view line, int number) : words_(split_words(line)), line_(number) {}

  ScenarioStep parse() {
    if (words_.empty()) fail("empty command");
    const std::string_view cmd = next("a command");
    ScenarioStep step;
    step.line = line_;
    if (cmd == "time") {
      step.command = TimeStep{unsigned_int(next("a time in seconds"), "time")};
    } else if (cmd == "env") {
      step.command = env();
    } else if (cmd == "call") {
      step.command = call();
    } else if (cmd == "admin") {
      step.command = admin();
    } else if (cmd == "assert") {
      step.command = assertion();
    } else {
      fail("unknown command '" + std::string(cmd) + "'");
    }
    if (pos_ < words_.size()) fail("unexpected '" + std::string(words_[pos_]) + "'");
    return step;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ScenarioSyntaxError(line_, message); }

  std::string_view next(const char* what) {
    if (pos_ >= words_.size()) fail(std::string("expected ") + what);
    return words_[pos_++];
  }

  void keyword(std::string_view word) {
    auto got = next(std::string(word).c_str());
    if (got != word) fail("expected '" + std::string(word) + "', got '" + std::string(got) + "'");
  }

  std::uint64_t unsigned_int(std::string_view text, const char* what) const {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
    }
    return value;
  }

  BigInt signed_int(std::string_view text) const {
    std::string_view digits = text;
    if (!digits.empty() && digits.front() == '-') digits.remove_prefix(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
      fail("invalid integer '" + std::string(text) + "'");
    }
    return BigInt(std::string(text));
  }

  bool boolean(std::string_view text) const {
    if (text == "true") return true;
    if (text == "false") return false;
    fail("expected true or false, got '" + std::string(text) + "'");
  }

  static std::pair<std::string_view, std::string_view> key_value(std::string_view word) {
    auto eq = word.find('=');
    if (eq == std::string_view::npos) return {word, {}};
    return {word.substr(0, eq), word.substr(eq + 1)};
  }

  std::string identifier(std::string_view text, const char* what) const {
    if (!is_identifier(text)) fail(std::string("invalid ") + what + " '" + std::string(text) + "'");
    return std::string(text);
  }

  std::string actor(std::string_view text) const {
    if (text.empty()) fail("empty actor");
    return std::string(text);
  }

  EnvStep env() {
    EnvStep step;
    if (pos_ >= words_.size()) fail("expected <ident>=<int>");
    while (pos_ < words_.size()) {
      auto [key, value] = key_value(words_[pos_++]);
      if (value.empty()) fail("expected <ident>=<int>");
      step.bindings.emplace_back(identifier(key, "identifier"), signed_int(value));
    }
    return step;
  }

  std::optional<Expectation> expectation() {
    if (pos_ >= words_.size() || words_[pos_] != "expect") return std::nullopt;
    ++pos_;
    const std::string_view word = next("ok or revert");
    Expectation e;
    if (word == "ok") return e;
    e.ok = false;
    if (word == "revert") return e;
    if (word.substr(0, 7) == "revert:") {
      e.reason = revert_reason_from_string(word.substr(7));
      if (!e.reason) fail("unknown revert reason '" + std::string(word.substr(7)) + "'");
      return e;
    }
    fail("expected ok, revert or revert:<Reason>, got '" + std::string(word) + "'");
  }

  CallStep call() {
    CallStep step;
    step.call.transition = identifier(next("a transition"), "transition");
    keyword("as");
    step.call.sender = actor(next("an actor"));
    std::optional<std::uint64_t> reenter_n;
    while (pos_ < words_.size() && words_[pos_] != "expect") {
      auto [key, value] = key_value(words_[pos_++]);
      if (key == "n") {
        step.call.next_transition_number = unsigned_int(value, "n");
      } else if (key == "reenter") {
        ReentryProbe probe;
        probe.transition = identifier(value, "transition");
        probe.sender = step.call.sender;
        step.call.reentry_probe = std::move(probe);
      } else if (key == "reenter_n") {
        reenter_n = unsigned_int(value, "reenter_n");
      } else if (key.size() > 1 && key.front() == 'g') {
        auto k = unsigned_int(key.substr(1), "guard index");
        step.call.guard_overrides[k] = boolean(value);
      } else {
        fail("unknown call option '" + std::string(key) + "'");
      }
    }
    if (reenter_n) {
      if (!step.call.reentry_probe) fail("reenter_n given without reenter");
      step.call.reentry_probe->next_transition_number = reenter_n;
    }
    step.expect = expectation();
    return step;
  }

  AdminStep admin() {
    AdminStep step;
    const auto action = next("add or remove");
    if (action == "add") {
      step.action = AdminAction::Add;
    } else if (action == "remove") {
      step.action = AdminAction::Remove;
    } else {
      fail("expected add or remove, got '" + std::string(action) + "'");
    }
    step.target = actor(next("an actor"));
    keyword("by");
    step.sender = actor(next("an actor"));
    step.expect = expectation();
    return step;
  }

  AssertStep assertion() {
    AssertStep step;
    const auto word = next("state=, counter= or admin(<actor>)=");
    auto [key, value] = key_value(word);
    if (key == "state") {
      step.what = AssertStep::What::State;
      step.state = identifier(value, "state");
    } else if (key == "counter") {
      step.what = AssertStep::What::Counter;
      step.counter = unsigned_int(value, "counter");
    } else if (key.size() > 7 && key.substr(0, 6) == "admin(" && key.back() == ')') {
      step.what = AssertStep::What::Admin;
      step.actor = actor(key.substr(6, key.size() - 7));
      step.admin = boolean(value);
    } else {
      fail("unknown assertion '" + std::string(word) + "'");
    }
    return step;
  }

  std::vector<std::string_view> words_;
  std::size_t pos_ = 0;
  int line_;
};

bool matches(const Expectation& e, const Outcome& o) {
  if (e.ok) return o.executed();
  if (o.executed()) return false;
  return !e.reason || e.reason == o.revert_reason;
}

std::string render(const Expectation& e) {
  if (e.ok) return "ok";
  return e.reason ? "revert:" + std::string(to_string(*e.reason)) : "revert";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

}  // namespace

ScenarioSyntaxError::ScenarioSyntaxError(int line, const std::string& message)
    : std::runtime_error("E_SCENARIO_SYNTAX at line " + std::to_string(line) + ": " + message),
      line_(line) {}

ScenarioStep parse_scenario_line(std::string_view line, int line_number) {
  ScenarioStep step = LineParser(strip_comment(line), line_number).parse();
  step.text = std::string(strip_comment(line));
  return step;
}

std::vector<ScenarioStep> parse_scenario(std::string_view script) {
  std::vector<ScenarioStep> steps;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= script.size()) {
    auto nl = script.find('\n', pos);
    if (nl == std::string_view::npos) nl = script.size();
    ++number;
    std::string_view line = script.substr(pos, nl - pos);
    if (!strip_comment(line).empty()) steps.push_back(parse_scenario_line(line, number));
    pos = nl + 1;
  }
  return steps;
}

std::size_t ScenarioReport::failures() const {
  std::size_t n = 0;
  for (const auto& s : steps) n += s.ok ? 0 : 1;
  return n;
}

Snapshot snapshot(const SimSession& session) {
  const SimState& s = session.state();
  return Snapshot{s.current_state, s.transition_counter,
                  std::vector<ActorId>(s.is_admin.begin(), s.is_admin.end()), s.now};
}

std::string render(const Snapshot& snap) {
  return "state=" + snap.state + " counter=" + std::to_string(snap.counter) + " admins=[" +
         join(snap.admins) + "] now=" + std::to_string(snap.now);
}

std::string render(const Outcome& outcome) {
  std::string out;
  if (outcome.executed()) {
    out = "executed";
  } else {
    out = "reverted:" + std::string(to_string(*outcome.revert_reason));
    if (!outcome.detail.empty()) out += " (" + outcome.detail + ")";
  }
  if (!outcome.fired_timed.empty()) out += " timed=[" + join(outcome.fired_timed) + "]";
  if (!outcome.events.empty()) out += " events=[" + join(outcome.events) + "]";
  if (outcome.reentry) {
    const ReentryNote& r = *outcome.reentry;
    out += " reentry=" + r.transition + "@" + r.state_on_entry + ":";
    out += r.executed ? "executed" : "reverted:" + std::string(to_string(*r.reason));
  }
  return out;
}

std::string render(const ScenarioReport& report) {
  std::ostringstream out;
  for (const auto& s : report.steps) {
    out << "step " << s.index << " (line " << s.line << ") " << (s.ok ? "ok  " : "FAIL") << "  "
        << s.text;
    if (!s.message.empty()) out << "  -> " << s.message;
    out << '\n';
  }
  out << "final: " << render(report.final_snapshot) << '\n';
  out << report.steps.size() << " step(s), " << report.failures() << " failure(s)\n";
  return out.str();
}

ScenarioRunner::ScenarioRunner(const WovenContract& woven, const SimConfig& config)
    : session_(new_session(woven, config)) {}

StepResult ScenarioRunner::execute(const ScenarioStep& step) {
  StepResult result{++executed_, step.line, step.text, true, {}};
  auto check = [&](const std::optional<Expectation>& expect, const Outcome& outcome) {
    result.message = render(outcome);
    if (expect && !matches(*expect, outcome)) {
      result.ok = false;
      result.message = "expected " + render(*expect) + ", got " + result.message;
    }
  };
  try {
    std::visit(
        [&](const auto& cmd) {
          using T = std::decay_t<decltype(cmd)>;
          if constexpr (std::is_same_v<T, TimeStep>) {
            advance_time(session_, cmd.seconds);
          } else if constexpr (std::is_same_v<T, EnvStep>) {
            for (const auto& [name, value] : cmd.bindings) session_.set_env(name, value);
          } else if constexpr (std::is_same_v<T, CallStep>) {
            check(cmd.expect, invoke(session_, cmd.call));
          } else if constexpr (std::is_same_v<T, AdminStep>) {
            check(cmd.expect, admin_call(session_, cmd.action, cmd.target, cmd.sender));
          } else {
            const SimState& s = session_.state();
            switch (cmd.what) {
              case AssertStep::What::State:
                result.ok = s.current_state == cmd.state;
                if (!result.ok) result.message = "state is " + s.current_state;
                break;
              case AssertStep::What::Counter:
                result.ok = s.transition_counter == cmd.counter;
                if (!result.ok) result.message = "counter is " + std::to_string(s.transition_counter);
                break;
              case AssertStep::What::Admin:
                result.ok = (s.is_admin.count(cmd.actor) > 0) == cmd.admin;
                if (!result.ok) {
                  result.message = cmd.actor + (cmd.admin ? " is not an admin" : " is an admin");
                }
                break;
            }
          }
        },
        step.command);
  } catch (const SimError& e) {
    result.ok = false;
    result.message = e.what();
  }
  return result;
}

ScenarioReport run_scenario(const WovenContract& woven, std::string_view script,
                            const SimConfig& config) {
  const auto steps = parse_scenario(script);
  ScenarioRunner runner(woven, config);
  ScenarioReport report;
  for (const auto& step : steps) report.steps.push_back(runner.execute(step));
  report.final_snapshot = snapshot(runner.session());
  return report;
}

}  // namespace fsmforge
