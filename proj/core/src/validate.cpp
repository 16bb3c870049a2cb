#include "fsmforge/validate.hpp"

#include <algorithm>
#include <regex>

#include "fsmforge/lexer.hpp"

namespace fsmforge {

namespace {

bool solidity_builtin(std::string_view name) {
  static const std::set<std::string, std::less<>> names = {
      "msg",       "now",        "block",     "tx",      "this",     "super",     "true",
      "false",     "keccak256",  "sha3",      "sha256",  "ripemd160", "ecrecover", "addmod",
      "mulmod",    "assert",     "require",   "revert",  "selfdestruct", "gasleft", "abi",
      "type",      "address",    "bool",      "string",  "byte",     "bytes",     "uint",
      "int",       "var",        "new",       "delete",  "payable",  "memory",    "storage",
      "calldata",  "wei",        "ether",     "finney",  "szabo",    "years"};
  if (names.count(name)) return true;
  static const std::regex sized("(u?int|bytes|u?fixed)[0-9x]+");
  return std::regex_match(name.begin(), name.end(), sized);
}

class Validator {
 public:
  explicit Validator(const ContractModel& model) : model_(model), reserved_(reserved_names(model)) {
    for (const auto& t : model_.transitions) {
      for (const auto& p : t.inputs) io_names_.insert(p.name);
      for (const auto& p : t.outputs) io_names_.insert(p.name);
    }
  }

  std::vector<Diagnostic> run() {
    check_initial();
    flush();
    std::set<std::string, std::less<>> seen;
    for (std::size_t i = 0; i < model_.states.size(); ++i) {
      const std::string path = "states[" + std::to_string(i) + "]";
      name_checks(model_.states[i], path, "state", seen);
      flush();
    }
    seen.clear();
    for (std::size_t i = 0; i < model_.variables.size(); ++i) {
      const auto& v = model_.variables[i];
      const std::string path = "variables[" + std::to_string(i) + "]";
      name_checks(v.name, path, "variable", seen);
      lex_check(v.type, path + ".type");
      flush();
    }
    seen.clear();
    for (std::size_t i = 0; i < model_.structs.size(); ++i) {
      check_struct(model_.structs[i], "structs[" + std::to_string(i) + "]", seen);
      flush();
    }
    seen.clear();
    for (std::size_t i = 0; i < model_.transitions.size(); ++i) {
      check_transition(model_.transitions[i], "transitions[" + std::to_string(i) + "]", seen);
      flush();
    }
    seen.clear();
    for (std::size_t i = 0; i < model_.timed_transitions.size(); ++i) {
      check_timed(model_.timed_transitions[i], "timed[" + std::to_string(i) + "]", seen);
      flush();
    }
    if (!model_.timed_transitions.empty() && !model_.plugins.timed) {
      add(DiagCode::TimedNeedsPlugin, "plugins",
          "timed transitions are declared but the 'timed' plugin is not enabled");
      flush();
    }
    return std::move(out_);
  }

 private:
  std::optional<SourceSpan> span_for(std::string path) const {
    while (true) {
      if (auto span = model_.source_map.find(path)) return span;
      auto cut = path.find_last_of(".[");
      if (cut == std::string::npos || cut == 0) return model_.source_map.find("name");
      path.resize(cut);
    }
  }

  void add(DiagCode code, std::string path, std::string message,
           std::optional<SourceSpan> span = std::nullopt) {
    if (!span) span = span_for(path);
    bucket_.push_back(make_diag(code, std::move(path), std::move(message), std::move(span)));
  }

  void flush() {
    std::stable_sort(bucket_.begin(), bucket_.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.code < b.code; });
    out_.insert(out_.end(), bucket_.begin(), bucket_.end());
    bucket_.clear();
  }

  void check_initial() {
    if (model_.initial_state.empty()) {
      add(DiagCode::NoInitial, "initial", "no state is marked initial");
    } else if (!model_.has_state(model_.initial_state)) {
      add(DiagCode::NoInitial, "initial",
          "initial state '" + model_.initial_state + "' is not a declared state");
    }
  }

  void name_checks(const std::string& name, const std::string& path, std::string_view what,
                   std::set<std::string, std::less<>>& seen) {
    if (!seen.insert(name).second) {
      add(DiagCode::DupName, path, std::string(what) + " '" + name + "' is declared more than once");
    }
    reserved_check(name, path, what);
  }

  void reserved_check(const std::string& name, const std::string& path, std::string_view what) {
    if (reserved_.count(name)) {
      add(DiagCode::Reserved, path,
          std::string(what) + " '" + name + "' collides with a generated name");
    }
  }

  std::optional<std::vector<Token>> lex_check(std::string_view text, const std::string& path) {
    LexOptions options;
    if (auto span = model_.source_map.find(path)) options.origin = *span;
    auto lexed = lex_fragment(text, options);
    if (!lexed.ok()) {
      for (auto d : lexed.diagnostics()) {
        std::optional<SourceSpan> span = d.span;
        if (!model_.source_map.find(path)) span = span_for(path);
        add(d.code, path, d.message, span);
      }
      return std::nullopt;
    }
    return std::move(lexed.value());
  }

  void endpoint_checks(const std::string& from, const std::string& to, const std::string& path) {
    if (!model_.has_state(from)) {
      add(DiagCode::UnknownState, path + ".from", "source state '" + from + "' is not declared");
    }
    if (!model_.has_state(to)) {
      add(DiagCode::UnknownState, path + ".to", "target state '" + to + "' is not declared");
    }
  }

  void check_struct(const StructDef& def, const std::string& path,
                    std::set<std::string, std::less<>>& seen) {
    name_checks(def.name, path, "struct", seen);
    std::set<std::string, std::less<>> members;
    for (std::size_t j = 0; j < def.members.size(); ++j) {
      const std::string mp = path + ".members[" + std::to_string(j) + "]";
      if (!members.insert(def.members[j].name).second) {
        add(DiagCode::DupName, mp, "member '" + def.members[j].name + "' is declared more than once");
      }
      lex_check(def.members[j].type, mp + ".type");
    }
  }

  void check_transition(const Transition& t, const std::string& path,
                        std::set<std::string, std::less<>>& seen) {
    name_checks(t.name, path, "transition", seen);
    endpoint_checks(t.from, t.to, path);

    std::set<std::string, std::less<>> tags;
    for (std::size_t k = 0; k < t.tags.size(); ++k) {
      const std::string& tag = t.tags[k];
      const std::string tp = path + ".tags[" + std::to_string(k) + "]";
      if (tag != kTagPayable && tag != kTagAdmin && tag != kTagEvent) {
        add(DiagCode::BadTag, tp, "unknown tag '" + tag + "' (expected payable, admin or event)");
        continue;
      }
      if (!tags.insert(tag).second) {
        add(DiagCode::BadTag, tp, "tag '" + tag + "' is repeated");
        continue;
      }
      if (tag == kTagAdmin && !model_.plugins.access_control) {
        add(DiagCode::TagNeedsPlugin, tp, "tag 'admin' requires the 'access' plugin");
      }
      if (tag == kTagEvent && !model_.plugins.events) {
        add(DiagCode::TagNeedsPlugin, tp, "tag 'event' requires the 'events' plugin");
      }
    }

    std::set<std::string, std::less<>> params;
    auto param_checks = [&](const std::vector<Param>& list, std::string_view section) {
      for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string pp = path + "." + std::string(section) + "[" + std::to_string(k) + "]";
        if (!params.insert(list[k].name).second) {
          add(DiagCode::DupName, pp, "parameter '" + list[k].name + "' is declared more than once");
        }
        reserved_check(list[k].name, pp, "parameter");
        lex_check(list[k].type, pp + ".type");
      }
    };
    param_checks(t.inputs, "inputs");
    param_checks(t.outputs, "outputs");
    param_checks(t.locals, "locals");

    std::set<std::string, std::less<>> known = allowed_in_guards();
    for (const auto& p : t.inputs) known.insert(p.name);
    for (const auto& p : t.locals) known.insert(p.name);

    for (std::size_t k = 0; k < t.guards.size(); ++k) {
      const std::string gp = path + ".guards[" + std::to_string(k) + "]";
      if (auto tokens = lex_check(t.guards[k].text, gp)) {
        undeclared_check(*tokens, known, gp, {});
      }
    }
    for (std::size_t k = 0; k < t.statements.size(); ++k) {
      lex_check(t.statements[k].text, path + ".statements[" + std::to_string(k) + "]");
    }
  }

  void check_timed(const TimedTransition& t, const std::string& path,
                   std::set<std::string, std::less<>>& seen) {
    name_checks(t.name, path, "timed transition", seen);
    endpoint_checks(t.from, t.to, path);

    auto io_check = [&](const std::vector<Token>& tokens, const std::string& fp) {
      std::set<std::string, std::less<>> hits;
      for (const auto& id : free_identifiers(tokens)) {
        if (io_names_.count(id) && hits.insert(id).second) {
          add(DiagCode::TimedIo, fp,
              "timed transitions may only use contract variables, but '" + id +
                  "' is a transition input or output");
        }
      }
      return hits;
    };
    if (t.guard) {
      const std::string gp = path + ".guard";
      if (auto tokens = lex_check(t.guard->text, gp)) {
        auto hits = io_check(*tokens, gp);
        undeclared_check(*tokens, allowed_in_guards(), gp, hits);
      }
    }
    for (std::size_t k = 0; k < t.statements.size(); ++k) {
      const std::string sp = path + ".statements[" + std::to_string(k) + "]";
      if (auto tokens = lex_check(t.statements[k].text, sp)) io_check(*tokens, sp);
    }
  }

  std::set<std::string, std::less<>> allowed_in_guards() const {
    std::set<std::string, std::less<>> known(reserved_.begin(), reserved_.end());
    for (const auto& v : model_.variables) known.insert(v.name);
    for (const auto& s : model_.structs) known.insert(s.name);
    return known;
  }

  void undeclared_check(const std::vector<Token>& tokens,
                        const std::set<std::string, std::less<>>& known, const std::string& path,
                        const std::set<std::string, std::less<>>& skip) {
    std::set<std::string, std::less<>> reported;
    for (const auto& id : free_identifiers(tokens)) {
      if (known.count(id) || skip.count(id) || solidity_builtin(id)) continue;
      if (!reported.insert(id).second) continue;
      add(DiagCode::UndeclaredIdent, path, "identifier '" + id + "' is not a declared variable");
    }
  }

  const ContractModel& model_;
  std::set<std::string, std::less<>> reserved_;
  std::set<std::string, std::less<>> io_names_;
  std::vector<Diagnostic> bucket_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::set<std::string, std::less<>> reserved_names(const ContractModel& model) {
  std::set<std::string, std::less<>> names = {"state", "States", "creationTime"};
  if (!model.name.empty()) names.insert(model.name);
  const auto& p = model.plugins;
  if (p.locking) names.insert({"locked", "locking"});
  if (p.counter) names.insert({"transitionCounter", "transitionCounting", "nextTransitionNumber"});
  if (p.timed) names.insert("timedTransitions");
  if (p.access_control) names.insert({"isAdmin", "numAdmins", "addAdmin", "removeAdmin", "onlyAdmin"});
  if (p.events) {
    for (const auto& t : model.transitions) {
      if (t.has_tag(kTagEvent)) {
        names.insert("Event" + t.name);
        names.insert("event" + t.name);
      }
    }
  }
  return names;
}

std::vector<Diagnostic> validate(const ContractModel& model) { return Validator(model).run(); }

}  // namespace fsmforge
