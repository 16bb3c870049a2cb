#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsmforge/model.hpp"

namespace fsmforge {

/// A contract-level declaration block contributed by one plugin.
struct ContractFragment {
  Plugin origin = Plugin::Locking;
  std::string banner;              // e.g. "//Locking"
  std::vector<std::string> lines;  // unindented; nested lines carry their own indent

  friend bool operator==(const ContractFragment&, const ContractFragment&) = default;
};

/// Modifier invocations in application order, e.g. `locking`,
/// `transitionCounting(nextTransitionNumber)`.
using ModifierChain = std::vector<std::string>;

struct WovenContract {
  ContractModel base;
  std::vector<ContractFragment> contract_fragments;
  std::map<std::string, ModifierChain, std::less<>> per_transition;
  std::map<std::string, std::vector<Param>, std::less<>> injected_params;

  const ModifierChain& chain(std::string_view transition) const;
  const std::vector<Param>& injected(std::string_view transition) const;

  friend bool operator==(const WovenContract&, const WovenContract&) = default;
};

inline constexpr std::string_view kLockingModifier = "locking";
inline constexpr std::string_view kTimedModifier = "timedTransitions";
inline constexpr std::string_view kCounterModifier = "transitionCounting(nextTransitionNumber)";
inline constexpr std::string_view kAdminModifier = "onlyAdmin";

/// Applies the enabled plugins in canonical order: locking, counter, timed,
/// access control, events. Per-transition chains follow
/// locking, timedTransitions, transitionCounting, onlyAdmin, event<name>.
/// Expects a model that validates clean.
WovenContract weave(const ContractModel& model);

/// `require(g);` for one guard, `require( (g1) && (g2) );` for several,
/// empty for none.
std::string guard_conjunction(const Transition& transition);

/// Lines of the `if (...) { ... }` block for one timed transition inside the
/// timedTransitions modifier.
std::vector<std::string> timed_transition_block(const TimedTransition& timed);

}  // namespace fsmforge
