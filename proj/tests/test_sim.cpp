#include <gtest/gtest.h>

#include "fsmforge/sim.hpp"
#include "paths.hpp"

using namespace fsmforge;
using namespace fsmforge::testing;

namespace {

constexpr std::uint64_t kDay = 86400;

WovenContract woven(const std::string& corpus, std::optional<PluginConfig> plugins = std::nullopt) {
  ContractModel m = load_corpus(corpus);
  if (plugins) m.plugins = *plugins;
  return weave(m);
}

Invocation call(std::string t, std::string sender, std::optional<std::uint64_t> n = std::nullopt) {
  Invocation c;
  c.transition = std::move(t);
  c.sender = std::move(sender);
  c.next_transition_number = n;
  return c;
}

SimErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const SimError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no SimError";
  return SimErrorCode::Usage;
}

PluginConfig only(Plugin p) {
  PluginConfig c;
  c.set(p, true);
  return c;
}

}  // namespace

TEST(Sim, NewSession) {
  const WovenContract w = woven("blind_auction.fsm");
  const SimSession s = new_session(w);
  EXPECT_EQ(s.state().current_state, "ABB");
  EXPECT_EQ(s.state().transition_counter, 0u);
  EXPECT_FALSE(s.state().locked);
  EXPECT_TRUE(s.state().is_admin.empty());

  SimConfig config;
  config.deployer = "D";
  const SimSession v = new_session(woven("voting.fsm"), config);
  EXPECT_EQ(v.state().is_admin, std::set<ActorId>{"D"});
  EXPECT_EQ(v.state().num_admins, 1u);

  config.creation_time = 10;
  config.initial_time = 5;
  EXPECT_EQ(error_of([&] { new_session(w, config); }), SimErrorCode::Usage);
}

TEST(Sim, AdvanceTime) {
  SimSession s = new_session(woven("blind_auction.fsm"));
  advance_time(s, 5 * kDay);
  EXPECT_EQ(s.state().now, 432000u);
  EXPECT_EQ(s.state().current_state, "ABB");
  const SimState before = s.state();
  advance_time(s, 5 * kDay);
  EXPECT_EQ(s.state(), before);
  EXPECT_EQ(error_of([&] { advance_time(s, 5 * kDay - 1); }), SimErrorCode::TimeBackward);
  EXPECT_EQ(s.state(), before);
}

TEST(Sim, CounterMismatchLeavesCounter) {
  SimSession s = new_session(woven("blind_auction.fsm"));
  const Outcome o = invoke(s, call("bid", "alice", 1));
  EXPECT_EQ(o.kind, Outcome::Kind::Reverted);
  EXPECT_EQ(o.revert_reason, RevertReason::CounterMismatch);
  EXPECT_EQ(s.state().transition_counter, 0u);
  EXPECT_TRUE(invoke(s, call("bid", "alice", 0)).executed());
  EXPECT_EQ(s.state().transition_counter, 1u);
  EXPECT_EQ(s.state().log.size(), 1u);
}

TEST(Sim, WrongState) {
  SimSession s = new_session(woven("blind_auction.fsm"));
  const Outcome o = invoke(s, call("withdraw", "alice", 0));
  EXPECT_EQ(o.revert_reason, RevertReason::WrongState);
  EXPECT_EQ(s.state().transition_counter, 0u);
}

TEST(Sim, GuardsAndOverrides) {
  SimSession s = new_session(woven("blind_auction.fsm"));
  EXPECT_EQ(invoke(s, call("close", "a", 0)).revert_reason, RevertReason::GuardFailed);
  advance_time(s, 5 * kDay);
  EXPECT_TRUE(invoke(s, call("close", "a", 0)).executed());
  EXPECT_EQ(s.state().current_state, "RB");
  EXPECT_EQ(invoke(s, call("reveal", "a", 1)).revert_reason, RevertReason::MissingOverride);
  auto reveal = call("reveal", "a", 1);
  reveal.guard_overrides[0] = false;
  EXPECT_EQ(invoke(s, reveal).revert_reason, RevertReason::GuardFailed);
  reveal.guard_overrides[0] = true;
  EXPECT_TRUE(invoke(s, reveal).executed());
}

TEST(Sim, UsageErrors) {
  SimSession s = new_session(woven("blind_auction.fsm"));
  const SimState before = s.state();
  EXPECT_EQ(error_of([&] { invoke(s, call("bid", "a")); }), SimErrorCode::Usage);
  EXPECT_EQ(error_of([&] { invoke(s, call("nope", "a", 0)); }), SimErrorCode::Usage);
  auto bad = call("close", "a", 0);
  bad.guard_overrides[1] = true;
  EXPECT_EQ(error_of([&] { invoke(s, bad); }), SimErrorCode::Usage);
  EXPECT_EQ(s.state(), before);
}

TEST(Sim, UnboundVariable) {
  SimSession s = new_session(woven("voting.fsm"));
  advance_time(s, kDay);
  // open fires; close and cancel are not yet due, cast's guards are opaque.
  auto cast = call("cast", "p");
  cast.guard_overrides = {{0, true}, {1, true}};
  EXPECT_TRUE(invoke(s, cast).executed());
  advance_time(s, 7 * kDay);
  // close's guard reads numVotes, which the scenario never bound.
  EXPECT_EQ(error_of([&] { invoke(s, cast); }), SimErrorCode::UnboundVar);
  s.set_env("numVotes", 1);
  const Outcome o = invoke(s, cast);
  EXPECT_EQ(o.revert_reason, RevertReason::WrongState);
  EXPECT_TRUE(o.fired_timed.empty());
  EXPECT_EQ(s.state().current_state, "Casting");
}

TEST(Sim, VotingOpenFiresBeforeCast) {
  SimSession s = new_session(woven("voting.fsm"));
  advance_time(s, kDay);
  auto cast = call("cast", "participant");
  cast.guard_overrides = {{0, true}, {1, true}};
  const Outcome o = invoke(s, cast);
  EXPECT_TRUE(o.executed());
  EXPECT_EQ(o.fired_timed, std::vector<std::string>{"open"});
  EXPECT_EQ(s.state().current_state, "Casting");
  EXPECT_EQ(s.state().log.back().fired_timed, std::vector<std::string>{"open"});
}

TEST(Sim, TimedFiringRolledBackOnRevert) {
  SimSession s = new_session(woven("voting.fsm"));
  advance_time(s, kDay);
  // open fires, then addOption fails its state check: everything is undone.
  const Outcome o = invoke(s, call("addOption", "deployer"));
  EXPECT_EQ(o.revert_reason, RevertReason::WrongState);
  EXPECT_TRUE(o.fired_timed.empty());
  EXPECT_EQ(s.state().current_state, "Setup");
}

TEST(Sim, LockingBlocksReentry) {
  SimSession s = new_session(woven("blind_auction.fsm"));
  invoke(s, call("cancelABB", "a", 0));
  auto unbid = call("unbid", "a", 1);
  unbid.reentry_probe = ReentryProbe{"unbid", "a", 2, {}};
  const Outcome o = invoke(s, unbid);
  EXPECT_TRUE(o.executed());
  ASSERT_TRUE(o.reentry);
  EXPECT_TRUE(o.reentry->observed_locked);
  EXPECT_FALSE(o.reentry->executed);
  EXPECT_EQ(o.reentry->reason, RevertReason::Locked);
  EXPECT_FALSE(s.state().locked);
  EXPECT_EQ(s.state().transition_counter, 2u);
}

TEST(Sim, WithoutLockingReentryExecutes) {
  SimSession s = new_session(woven("blind_auction.fsm", PluginConfig{}));
  invoke(s, call("cancelABB", "a"));
  auto unbid = call("unbid", "a");
  unbid.reentry_probe = ReentryProbe{"unbid", "a", std::nullopt, {}};
  const Outcome o = invoke(s, unbid);
  EXPECT_TRUE(o.executed());
  ASSERT_TRUE(o.reentry);
  EXPECT_TRUE(o.reentry->executed);
  EXPECT_EQ(o.reentry->state_on_entry, "C");
  EXPECT_EQ(s.state().log.size(), 3u);
}

TEST(Sim, ProbeOfUnknownTransition) {
  SimSession s = new_session(woven("blind_auction.fsm", PluginConfig{}));
  auto bid = call("bid", "a");
  bid.reentry_probe = ReentryProbe{"ghost", "a", std::nullopt, {}};
  const Outcome o = invoke(s, bid);
  EXPECT_TRUE(o.executed());
  EXPECT_EQ(o.reentry->reason, RevertReason::UnknownTransition);
}

TEST(Sim, AdminCalls) {
  SimConfig config;
  config.deployer = "D";
  SimSession s = new_session(woven("voting.fsm"), config);
  EXPECT_TRUE(admin_call(s, AdminAction::Add, "A", "D").executed());
  EXPECT_EQ(s.state().num_admins, 2u);
  EXPECT_EQ(s.state().is_admin, (std::set<ActorId>{"A", "D"}));
  EXPECT_EQ(admin_call(s, AdminAction::Add, "B", "X").revert_reason, RevertReason::NotAdmin);
  EXPECT_EQ(admin_call(s, AdminAction::Add, "A", "D").revert_reason, RevertReason::GuardFailed);
  EXPECT_TRUE(admin_call(s, AdminAction::Remove, "A", "D").executed());
  EXPECT_EQ(admin_call(s, AdminAction::Remove, "D", "D").revert_reason, RevertReason::GuardFailed);
  EXPECT_EQ(s.state().num_admins, 1u);
  EXPECT_EQ(invoke(s, call("addOption", "X")).revert_reason, RevertReason::NotAdmin);
  EXPECT_TRUE(invoke(s, call("addOption", "D")).executed());

  SimSession plain = new_session(woven("blind_auction.fsm"));
  EXPECT_EQ(error_of([&] { admin_call(plain, AdminAction::Add, "A", "deployer"); }), SimErrorCode::Usage);
}

TEST(Sim, EventsEmitted) {
  auto r = parse_dsl(
      "contract T { states { initial A; B; } plugins { events; }\n"
      "  transition go from A to B tags(event) {} transition back from B to A {} }");
  ASSERT_TRUE(r.ok());
  SimSession s = new_session(weave(r.value()));
  EXPECT_EQ(invoke(s, call("go", "a")).events, std::vector<std::string>{"Eventgo"});
  EXPECT_TRUE(invoke(s, call("back", "a")).events.empty());
  EXPECT_EQ(invoke(s, call("back", "a")).kind, Outcome::Kind::Reverted);
}

TEST(Sim, LockingOnlyStillChecksStates) {
  SimSession s = new_session(woven("rps.fsm", only(Plugin::Locking)));
  EXPECT_EQ(invoke(s, call("reveal", "a")).revert_reason, RevertReason::WrongState);
  EXPECT_FALSE(s.state().locked);
}

TEST(Sim, RevertReasonNames) {
  for (auto r : {RevertReason::Locked, RevertReason::WrongState, RevertReason::GuardFailed,
                 RevertReason::CounterMismatch, RevertReason::NotAdmin, RevertReason::MissingOverride,
                 RevertReason::UnknownTransition}) {
    EXPECT_EQ(revert_reason_from_string(to_string(r)), r);
  }
  EXPECT_FALSE(revert_reason_from_string("Nope"));
}
