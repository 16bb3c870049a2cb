#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fsmforge/guard.hpp"
#include "fsmforge/plugins.hpp"

namespace fsmforge {

using ActorId = std::string;

struct SimConfig {
  std::uint64_t creation_time = 0;
  ActorId deployer = "deployer";
  std::uint64_t initial_time = 0;  // must be >= creation_time
};

enum class SimErrorCode { Usage, TimeBackward, UnboundVar };

std::string_view to_string(SimErrorCode code);

/// Caller mistakes: E_USAGE, E_TIME_BACKWARD, E_UNBOUND_VAR. The session is
/// left untouched when one is thrown.
class SimError : public std::runtime_error {
 public:
  SimError(SimErrorCode code, const std::string& message);
  SimErrorCode code() const noexcept { return code_; }

 private:
  SimErrorCode code_;
};

enum class RevertReason {
  Locked,
  WrongState,
  GuardFailed,
  CounterMismatch,
  NotAdmin,
  MissingOverride,
  UnknownTransition,
};

std::string_view to_string(RevertReason reason);
std::optional<RevertReason> revert_reason_from_string(std::string_view text);

/// A reentrant call attempted from inside a transition body, e.g. through a
/// fallback function triggered by `transfer`. Only one level deep.
struct ReentryProbe {
  std::string transition;
  ActorId sender;
  std::optional<std::uint64_t> next_transition_number;
  std::map<std::size_t, bool> guard_overrides;
};

struct Invocation {
  std::string transition;
  ActorId sender;
  std::optional<std::uint64_t> next_transition_number;  // required iff counter plugin on
  std::map<std::size_t, bool> guard_overrides;          // guard index -> forced value
  std::optional<ReentryProbe> reentry_probe;
};

struct ReentryNote {
  std::string transition;
  bool observed_locked = false;  // lock flag as seen on entry
  bool executed = false;
  std::optional<RevertReason> reason;
  std::string state_on_entry;  // intermediate state the probe ran against
  std::vector<std::string> fired_timed;
  std::vector<std::string> events;

  friend bool operator==(const ReentryNote&, const ReentryNote&) = default;
};

struct Outcome {
  enum class Kind { Executed, Reverted };

  Kind kind = Kind::Executed;
  std::optional<RevertReason> revert_reason;
  std::vector<std::string> fired_timed;  // persisted timed transitions, ascending
  std::vector<std::string> events;
  std::optional<ReentryNote> reentry;
  std::string detail;

  bool executed() const { return kind == Kind::Executed; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct InvocationRecord {
  std::string transition;
  ActorId sender;
  std::uint64_t at = 0;
  std::vector<std::string> fired_timed;
  std::vector<std::string> events;

  friend bool operator==(const InvocationRecord&, const InvocationRecord&) = default;
};

/// Every mutable field of a session. Equality over this is what a
/// transactional revert must preserve.
struct SimState {
  std::string current_state;
  std::uint64_t now = 0;
  std::uint64_t creation_time = 0;
  bool locked = false;
  std::uint64_t transition_counter = 0;
  std::set<ActorId> is_admin;
  std::uint64_t num_admins = 0;
  std::map<std::string, BigInt, std::less<>> env;
  std::vector<InvocationRecord> log;

  friend bool operator==(const SimState&, const SimState&) = default;
};

struct CompiledContract;

enum class AdminAction { Add, Remove };

/// One simulated contract instance. Single owner; move it between threads
/// freely but never share it mutably.
class SimSession {
 public:
  const WovenContract& woven() const;
  const SimState& state() const { return state_; }

  void set_env(std::string name, BigInt value);

 private:
  friend SimSession new_session(const WovenContract&, const SimConfig&);
  friend void advance_time(SimSession&, std::uint64_t);
  friend Outcome invoke(SimSession&, const Invocation&);
  friend Outcome admin_call(SimSession&, AdminAction, const ActorId&, const ActorId&);

  SimSession(std::shared_ptr<const CompiledContract> contract, SimState state);

  std::shared_ptr<const CompiledContract> contract_;
  SimState state_;
};

SimSession new_session(const WovenContract& woven, const SimConfig& config = {});

/// Moves the clock forward. Timed transitions fire only inside invocations.
void advance_time(SimSession& session, std::uint64_t to);

/// Runs one transaction against a speculative copy; commits on success,
/// discards everything on revert.
Outcome invoke(SimSession& session, const Invocation& call);

/// addAdmin / removeAdmin as generated by the access control plugin.
Outcome admin_call(SimSession& session, AdminAction action, const ActorId& target,
                   const ActorId& sender);

}  // namespace fsmforge
