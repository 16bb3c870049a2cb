#include "fsmforge/plugins.hpp"

#include <algorithm>

#include "fragment_scan.hpp"

namespace fsmforge {

namespace {

const ModifierChain kEmptyChain;
const std::vector<Param> kNoParams;

ContractFragment locking_fragment() {
  return {Plugin::Locking,
          "//Locking",
          {"bool private locked = false;", "modifier locking {", "    require(!locked);",
           "    locked = true;", "    _;", "    locked = false;", "}"}};
}

ContractFragment counter_fragment() {
  return {Plugin::Counter,
          "//Transition counter",
          {"uint private transitionCounter = 0;",
           "modifier transitionCounting(uint nextTransitionNumber) {",
           "    require(nextTransitionNumber == transitionCounter);", "    transitionCounter += 1;",
           "    _;", "}"}};
}

ContractFragment timed_fragment(const ContractModel& model) {
  std::vector<const TimedTransition*> order;
  for (const auto& tt : model.timed_transitions) order.push_back(&tt);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->at_seconds < b->at_seconds;
  });
  ContractFragment fragment{Plugin::Timed, "//Timed transitions", {"modifier timedTransitions {"}};
  for (const auto* tt : order) {
    for (auto& line : timed_transition_block(*tt)) fragment.lines.push_back("    " + line);
  }
  fragment.lines.push_back("    _;");
  fragment.lines.push_back("}");
  return fragment;
}

ContractFragment access_fragment(const ContractModel& model) {
  return {Plugin::AccessControl,
          "//Access control",
          {"mapping(address => bool) private isAdmin;",
           "uint private numAdmins = 1;",
           "",
           "function " + model.name + "() {",
           "    isAdmin[msg.sender] = true;",
           "}",
           "",
           "modifier onlyAdmin {",
           "    require(isAdmin[msg.sender]);",
           "    _;",
           "}",
           "",
           "function addAdmin(address admin) onlyAdmin {",
           "    require(!isAdmin[admin]);",
           "    isAdmin[admin] = true;",
           "    numAdmins += 1;",
           "}",
           "",
           "function removeAdmin(address admin) onlyAdmin {",
           "    require(isAdmin[admin]);",
           "    require(numAdmins > 1);",
           "    isAdmin[admin] = false;",
           "    numAdmins -= 1;",
           "}"}};
}

ContractFragment events_fragment(const ContractModel& model) {
  ContractFragment fragment{Plugin::Events, "//Events", {}};
  for (const auto& t : model.transitions) {
    if (!t.has_tag(kTagEvent)) continue;
    if (!fragment.lines.empty()) fragment.lines.emplace_back();
    fragment.lines.push_back("event Event" + t.name + ";");
    fragment.lines.push_back("modifier event" + t.name + " {");
    fragment.lines.push_back("    _;");
    fragment.lines.push_back("    Event" + t.name + "();");
    fragment.lines.push_back("}");
  }
  return fragment;
}

}  // namespace

const ModifierChain& WovenContract::chain(std::string_view transition) const {
  auto it = per_transition.find(transition);
  return it == per_transition.end() ? kEmptyChain : it->second;
}

const std::vector<Param>& WovenContract::injected(std::string_view transition) const {
  auto it = injected_params.find(transition);
  return it == injected_params.end() ? kNoParams : it->second;
}

std::vector<std::string> timed_transition_block(const TimedTransition& timed) {
  std::vector<std::string> lines;
  lines.push_back("if ((state == States." + timed.from + ")");
  const std::string clock = "    && (now >= creationTime + " + std::to_string(timed.at_seconds) + ")";
  if (timed.guard) {
    lines.push_back(clock);
    auto guard = detail::fragment_lines(timed.guard->text);
    guard.front() = "    && (" + guard.front();
    for (std::size_t i = 1; i < guard.size(); ++i) {
      if (!guard[i].empty()) guard[i] = "        " + guard[i];
    }
    guard.back() += ")) {";
    lines.insert(lines.end(), guard.begin(), guard.end());
  } else {
    lines.push_back(clock + ") {");
  }
  for (const auto& stmt : timed.statements) {
    for (auto& line : detail::fragment_lines(stmt.text)) {
      lines.push_back(line.empty() ? line : "    " + line);
    }
  }
  lines.push_back("    state = States." + timed.to + ";");
  lines.push_back("}");
  return lines;
}

std::string guard_conjunction(const Transition& transition) {
  const auto& guards = transition.guards;
  if (guards.empty()) return {};
  if (guards.size() == 1) return "require(" + guards.front().text + ");";
  std::string out = "require( ";
  for (std::size_t i = 0; i < guards.size(); ++i) {
    if (i) out += " && ";
    out += "(" + guards[i].text + ")";
  }
  return out + " );";
}

WovenContract weave(const ContractModel& model) {
  WovenContract woven;
  woven.base = model;
  const PluginConfig& p = model.plugins;

  if (p.locking) woven.contract_fragments.push_back(locking_fragment());
  if (p.counter) woven.contract_fragments.push_back(counter_fragment());
  if (p.timed) woven.contract_fragments.push_back(timed_fragment(model));
  if (p.access_control) woven.contract_fragments.push_back(access_fragment(model));
  if (p.events) {
    auto fragment = events_fragment(model);
    if (!fragment.lines.empty()) woven.contract_fragments.push_back(std::move(fragment));
  }

  for (const auto& t : model.transitions) {
    ModifierChain chain;
    if (p.locking) chain.emplace_back(kLockingModifier);
    if (p.timed) chain.emplace_back(kTimedModifier);
    if (p.counter) chain.emplace_back(kCounterModifier);
    if (p.access_control && t.has_tag(kTagAdmin)) chain.emplace_back(kAdminModifier);
    if (p.events && t.has_tag(kTagEvent)) chain.push_back("event" + t.name);
    if (!chain.empty()) woven.per_transition.emplace(t.name, std::move(chain));
    if (p.counter) {
      woven.injected_params.emplace(t.name, std::vector<Param>{{"uint", "nextTransitionNumber"}});
    }
  }
  return woven;
}

}  // namespace fsmforge
