#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsmforge/diagnostic.hpp"

namespace fsmforge {

enum class Visibility { Public, Private };

std::string_view to_string(Visibility visibility);

enum class FragmentKind { Expr, Stmt };

/// Verbatim Solidity source text. Never parsed beyond tokens.
struct Fragment {
  std::string text;
  FragmentKind kind = FragmentKind::Stmt;

  friend bool operator==(const Fragment&, const Fragment&) = default;
};

struct Param {
  std::string type;
  std::string name;

  friend bool operator==(const Param&, const Param&) = default;
};

struct VariableDecl {
  std::string name;
  std::string type;
  Visibility visibility = Visibility::Private;

  friend bool operator==(const VariableDecl&, const VariableDecl&) = default;
};

struct StructMember {
  std::string type;
  std::string name;

  friend bool operator==(const StructMember&, const StructMember&) = default;
};

struct StructDef {
  std::string name;
  std::vector<StructMember> members;

  friend bool operator==(const StructDef&, const StructDef&) = default;
};

inline constexpr std::string_view kTagPayable = "payable";
inline constexpr std::string_view kTagAdmin = "admin";
inline constexpr std::string_view kTagEvent = "event";

struct Transition {
  std::string name;
  std::string from;
  std::string to;
  // Kept as text so that validation can report unknown tags.
  std::vector<std::string> tags;
  std::vector<Param> inputs;
  std::vector<Param> outputs;
  // Declared at the top of the generated body, before the state require.
  std::vector<Param> locals;
  std::vector<Fragment> guards;      // kind == Expr
  std::vector<Fragment> statements;  // kind == Stmt

  bool has_tag(std::string_view tag) const;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct TimedTransition {
  std::string name;
  std::string from;
  std::string to;
  std::uint64_t at_seconds = 0;  // seconds after contract creation
  std::optional<Fragment> guard;
  std::vector<Fragment> statements;

  friend bool operator==(const TimedTransition&, const TimedTransition&) = default;
};

enum class Plugin { Locking, Counter, Timed, AccessControl, Events };

/// Canonical application order.
inline constexpr Plugin kPluginOrder[] = {Plugin::Locking, Plugin::Counter, Plugin::Timed,
                                          Plugin::AccessControl, Plugin::Events};

/// DSL/CLI spelling: locking, counter, timed, access, events.
std::string_view plugin_name(Plugin plugin);
std::optional<Plugin> plugin_from_name(std::string_view name);

struct PluginConfig {
  bool locking = false;
  bool counter = false;
  bool timed = false;
  bool access_control = false;
  bool events = false;

  bool enabled(Plugin plugin) const;
  void set(Plugin plugin, bool on);
  bool any() const { return locking || counter || timed || access_control || events; }

  friend bool operator==(const PluginConfig&, const PluginConfig&) = default;
};

/// Source locations keyed by model path. Locations never take part in model
/// equality, so a re-parsed model compares equal to the original.
class SourceMap {
 public:
  void record(std::string path, SourceSpan span);
  std::optional<SourceSpan> find(std::string_view path) const;
  bool empty() const { return spans_.empty(); }

  /// Rewrites `<section>[old]...` paths to `<section>[new_index[old]]...`.
  void reindex(std::string_view section, const std::vector<std::size_t>& new_index);

  friend bool operator==(const SourceMap&, const SourceMap&) { return true; }

 private:
  std::map<std::string, SourceSpan, std::less<>> spans_;
};

struct ContractModel {
  std::string name;
  std::vector<std::string> states;
  std::string initial_state;  // empty when no state is marked initial
  std::vector<VariableDecl> variables;
  std::vector<StructDef> structs;
  std::vector<Transition> transitions;
  std::vector<TimedTransition> timed_transitions;
  PluginConfig plugins;
  SourceMap source_map;

  const Transition* find_transition(std::string_view name) const;
  bool has_state(std::string_view state) const;

  friend bool operator==(const ContractModel&, const ContractModel&) = default;
};

/// Stable-sorts timed transitions by offset. Idempotent.
ContractModel canonicalize(ContractModel model);

/// Structural equality; fragment text compared byte for byte, locations ignored.
bool equals(const ContractModel& a, const ContractModel& b);

bool is_identifier(std::string_view text);

}  // namespace fsmforge
