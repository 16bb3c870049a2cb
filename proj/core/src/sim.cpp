#include "fsmforge/sim.hpp"

#include <algorithm>

namespace fsmforge {

struct CompiledContract {
  struct CompiledTimed {
    const TimedTransition* source = nullptr;
    std::optional<GuardAst> guard;
  };

  WovenContract woven;
  std::map<std::string, std::size_t, std::less<>> index;
  std::vector<std::vector<GuardAst>> guards;  // per transition
  std::vector<CompiledTimed> timed;           // ascending by time, stable

  explicit CompiledContract(WovenContract w) : woven(std::move(w)) {
    const auto& m = woven.base;
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
      index.emplace(m.transitions[i].name, i);
      std::vector<GuardAst> asts;
      for (const auto& g : m.transitions[i].guards) asts.push_back(parse_guard_expr(g));
      guards.push_back(std::move(asts));
    }
    for (const auto& tt : m.timed_transitions) {
      CompiledTimed ct{&tt, std::nullopt};
      if (tt.guard) ct.guard = parse_guard_expr(*tt.guard);
      timed.push_back(std::move(ct));
    }
    std::stable_sort(timed.begin(), timed.end(), [](const auto& a, const auto& b) {
      return a.source->at_seconds < b.source->at_seconds;
    });
  }
};

namespace {

struct Revert {
  RevertReason reason;
  std::string detail;
};

Outcome reverted(RevertReason reason, std::string detail) {
  Outcome out;
  out.kind = Outcome::Kind::Reverted;
  out.revert_reason = reason;
  out.detail = std::move(detail);
  return out;
}

GuardEnv env_of(const SimState& s) {
  return GuardEnv{BigInt(s.now), BigInt(s.creation_time), &s.env};
}

// Maps evaluator failures onto revert reasons. Unbound identifiers are a
// caller mistake and surface as SimError instead.
bool check_guard(const GuardAst& ast, const SimState& s, std::optional<bool> override_value,
                 const std::string& what) {
  try {
    return eval_guard(ast, env_of(s), override_value);
  } catch (const GuardEvalError& e) {
    switch (e.kind()) {
      case GuardEvalError::Kind::MissingOverride:
        throw Revert{RevertReason::MissingOverride, what + " needs an override: " + e.what()};
      case GuardEvalError::Kind::DivisionByZero:
        throw Revert{RevertReason::GuardFailed, what + ": " + e.what()};
      case GuardEvalError::Kind::UnboundVar:
        throw SimError(SimErrorCode::UnboundVar, what + ": " + e.what());
    }
    throw;
  }
}

struct Call {
  std::size_t transition = 0;
  const ActorId* sender = nullptr;
  std::optional<std::uint64_t> n;
  const std::map<std::size_t, bool>* overrides = nullptr;
  const ReentryProbe* probe = nullptr;
};

Outcome execute(const CompiledContract& c, SimState& s, const Call& call);

void run_probe(const CompiledContract& c, SimState& s, const Call& outer, Outcome& out) {
  const ReentryProbe& probe = *outer.probe;
  ReentryNote note;
  note.transition = probe.transition;
  note.observed_locked = s.locked;
  note.state_on_entry = s.current_state;

  auto it = c.index.find(probe.transition);
  if (it == c.index.end()) {
    note.reason = RevertReason::UnknownTransition;
    out.reentry = std::move(note);
    return;
  }
  Call nested;
  nested.transition = it->second;
  nested.sender = &probe.sender;
  nested.n = probe.next_transition_number ? probe.next_transition_number
                                          : std::optional<std::uint64_t>(s.transition_counter);
  nested.overrides = probe.guard_overrides.empty() ? outer.overrides : &probe.guard_overrides;

  SimState speculative = s;
  Outcome inner = execute(c, speculative, nested);
  note.executed = inner.executed();
  note.reason = inner.revert_reason;
  note.fired_timed = inner.fired_timed;
  note.events = inner.events;
  if (inner.executed()) {
    // The nested call completes before the outer one, so it is logged first.
    speculative.log.push_back(
        InvocationRecord{probe.transition, probe.sender, speculative.now, inner.fired_timed, inner.events});
    s = std::move(speculative);
  }
  out.reentry = std::move(note);
}

Outcome execute(const CompiledContract& c, SimState& s, const Call& call) {
  const ContractModel& m = c.woven.base;
  const Transition& t = m.transitions[call.transition];
  const PluginConfig& p = m.plugins;
  Outcome out;
  try {
    if (p.locking) {
      if (s.locked) throw Revert{RevertReason::Locked, "contract is locked"};
      s.locked = true;
    }
    if (p.timed) {
      for (const auto& ct : c.timed) {
        const TimedTransition& tt = *ct.source;
        if (s.current_state != tt.from) continue;
        if (BigInt(s.now) < BigInt(s.creation_time) + tt.at_seconds) continue;
        if (ct.guard && !check_guard(*ct.guard, s, std::nullopt, "timed " + tt.name + " guard")) {
          continue;
        }
        s.current_state = tt.to;
        out.fired_timed.push_back(tt.name);
      }
    }
    if (p.counter) {
      if (*call.n != s.transition_counter) {
        throw Revert{RevertReason::CounterMismatch,
                     "expected " + std::to_string(s.transition_counter) + ", got " +
                         std::to_string(*call.n)};
      }
      s.transition_counter += 1;
    }
    if (p.access_control && t.has_tag(kTagAdmin) && !s.is_admin.count(*call.sender)) {
      throw Revert{RevertReason::NotAdmin, *call.sender + " is not an admin"};
    }
    if (s.current_state != t.from) {
      throw Revert{RevertReason::WrongState, "state is " + s.current_state + ", need " + t.from};
    }
    const auto& asts = c.guards[call.transition];
    for (std::size_t i = 0; i < asts.size(); ++i) {
      std::optional<bool> forced;
      if (call.overrides) {
        auto it = call.overrides->find(i);
        if (it != call.overrides->end()) forced = it->second;
      }
      if (!check_guard(asts[i], s, forced, "guard " + std::to_string(i))) {
        throw Revert{RevertReason::GuardFailed, "guard " + std::to_string(i) + " is false"};
      }
    }
    if (call.probe) run_probe(c, s, call, out);
    s.current_state = t.to;
    if (p.locking) s.locked = false;
    if (p.events && t.has_tag(kTagEvent)) out.events.push_back("Event" + t.name);
  } catch (const Revert& r) {
    return reverted(r.reason, r.detail);
  }
  return out;
}

void check_call(const CompiledContract& c, const Invocation& call, std::size_t& index) {
  auto it = c.index.find(call.transition);
  if (it == c.index.end()) {
    throw SimError(SimErrorCode::Usage, "unknown transition '" + call.transition + "'");
  }
  index = it->second;
  const auto& m = c.woven.base;
  if (m.plugins.counter && !call.next_transition_number) {
    throw SimError(SimErrorCode::Usage,
                   "the counter plugin is enabled; '" + call.transition + "' needs n=<int>");
  }
  const std::size_t guard_count = m.transitions[index].guards.size();
  for (const auto& [k, v] : call.guard_overrides) {
    if (k >= guard_count) {
      throw SimError(SimErrorCode::Usage, "guard override g" + std::to_string(k) + " but '" +
                                              call.transition + "' has " +
                                              std::to_string(guard_count) + " guard(s)");
    }
  }
}

}  // namespace

std::string_view to_string(SimErrorCode code) {
  switch (code) {
    case SimErrorCode::Usage: return "E_USAGE";
    case SimErrorCode::TimeBackward: return "E_TIME_BACKWARD";
    case SimErrorCode::UnboundVar: return "E_UNBOUND_VAR";
  }
  return "E_USAGE";
}

SimError::SimError(SimErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {
constexpr std::pair<RevertReason, std::string_view> kReasons[] = {
    {RevertReason::Locked, "Locked"},
    {RevertReason::WrongState, "WrongState"},
    {RevertReason::GuardFailed, "GuardFailed"},
    {RevertReason::CounterMismatch, "CounterMismatch"},
    {RevertReason::NotAdmin, "NotAdmin"},
    {RevertReason::MissingOverride, "MissingOverride"},
    {RevertReason::UnknownTransition, "UnknownTransition"},
};
}  // namespace

std::string_view to_string(RevertReason reason) {
  for (const auto& [r, name] : kReasons) {
    if (r == reason) return name;
  }
  return "?";
}

std::optional<RevertReason> revert_reason_from_string(std::string_view text) {
  for (const auto& [r, name] : kReasons) {
    if (name == text) return r;
  }
  return std::nullopt;
}

SimSession::SimSession(std::shared_ptr<const CompiledContract> contract, SimState state)
    : contract_(std::move(contract)), state_(std::move(state)) {}

const WovenContract& SimSession::woven() const { return contract_->woven; }

void SimSession::set_env(std::string name, BigInt value) { state_.env[std::move(name)] = std::move(value); }

SimSession new_session(const WovenContract& woven, const SimConfig& config) {
  if (config.initial_time < config.creation_time) {
    throw SimError(SimErrorCode::Usage, "initial time " + std::to_string(config.initial_time) +
                                            " is before creation time " +
                                            std::to_string(config.creation_time));
  }
  if (config.deployer.empty()) throw SimError(SimErrorCode::Usage, "deployer must be nonempty");
  SimState state;
  state.current_state = woven.base.initial_state;
  state.now = config.initial_time;
  state.creation_time = config.creation_time;
  if (woven.base.plugins.access_control) {
    state.is_admin.insert(config.deployer);
    state.num_admins = 1;
  }
  return SimSession(std::make_shared<const CompiledContract>(woven), std::move(state));
}

void advance_time(SimSession& session, std::uint64_t to) {
  if (to < session.state_.now) {
    throw SimError(SimErrorCode::TimeBackward, "cannot move the clock from " +
                                                   std::to_string(session.state_.now) + " back to " +
                                                   std::to_string(to));
  }
  session.state_.now = to;
}

Outcome invoke(SimSession& session, const Invocation& call) {
  const CompiledContract& c = *session.contract_;
  std::size_t index = 0;
  check_call(c, call, index);

  SimState speculative = session.state_;
  Call internal;
  internal.transition = index;
  internal.sender = &call.sender;
  internal.n = call.next_transition_number;
  internal.overrides = &call.guard_overrides;
  internal.probe = call.reentry_probe ? &*call.reentry_probe : nullptr;
  Outcome out = execute(c, speculative, internal);
  if (out.executed()) {
    speculative.log.push_back(
        InvocationRecord{call.transition, call.sender, speculative.now, out.fired_timed, out.events});
    session.state_ = std::move(speculative);
  }
  return out;
}

Outcome admin_call(SimSession& session, AdminAction action, const ActorId& target,
                   const ActorId& sender) {
  if (!session.woven().base.plugins.access_control) {
    throw SimError(SimErrorCode::Usage, "the access control plugin is not enabled");
  }
  SimState& s = session.state_;
  if (!s.is_admin.count(sender)) return reverted(RevertReason::NotAdmin, sender + " is not an admin");
  const char* name = action == AdminAction::Add ? "addAdmin" : "removeAdmin";
  if (action == AdminAction::Add) {
    if (s.is_admin.count(target)) return reverted(RevertReason::GuardFailed, target + " is already an admin");
    s.is_admin.insert(target);
    s.num_admins += 1;
  } else {
    if (!s.is_admin.count(target)) return reverted(RevertReason::GuardFailed, target + " is not an admin");
    if (s.num_admins <= 1) return reverted(RevertReason::GuardFailed, "cannot remove the last admin");
    s.is_admin.erase(target);
    s.num_admins -= 1;
  }
  s.log.push_back(InvocationRecord{name, sender, s.now, {}, {}});
  return Outcome{};
}

}  // namespace fsmforge
