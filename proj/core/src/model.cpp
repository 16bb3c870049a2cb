#include "fsmforge/model.hpp"

#include <algorithm>

namespace fsmforge {

std::string_view to_string(Visibility visibility) {
  return visibility == Visibility::Public ? "public" : "private";
}

bool Transition::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

std::string_view plugin_name(Plugin plugin) {
  switch (plugin) {
    case Plugin::Locking: return "locking";
    case Plugin::Counter: return "counter";
    case Plugin::Timed: return "timed";
    case Plugin::AccessControl: return "access";
    case Plugin::Events: return "events";
  }
  return "";
}

std::optional<Plugin> plugin_from_name(std::string_view name) {
  for (Plugin p : kPluginOrder) {
    if (plugin_name(p) == name) return p;
  }
  return std::nullopt;
}

bool PluginConfig::enabled(Plugin plugin) const {
  switch (plugin) {
    case Plugin::Locking: return locking;
    case Plugin::Counter: return counter;
    case Plugin::Timed: return timed;
    case Plugin::AccessControl: return access_control;
    case Plugin::Events: return events;
  }
  return false;
}

void PluginConfig::set(Plugin plugin, bool on) {
  switch (plugin) {
    case Plugin::Locking: locking = on; break;
    case Plugin::Counter: counter = on; break;
    case Plugin::Timed: timed = on; break;
    case Plugin::AccessControl: access_control = on; break;
    case Plugin::Events: events = on; break;
  }
}

void SourceMap::record(std::string path, SourceSpan span) {
  spans_.insert_or_assign(std::move(path), std::move(span));
}

std::optional<SourceSpan> SourceMap::find(std::string_view path) const {
  auto it = spans_.find(path);
  if (it == spans_.end()) return std::nullopt;
  return it->second;
}

void SourceMap::reindex(std::string_view section, const std::vector<std::size_t>& new_index) {
  std::map<std::string, SourceSpan, std::less<>> out;
  const std::string prefix = std::string(section) + "[";
  for (auto& [path, span] : spans_) {
    if (path.rfind(prefix, 0) == 0) {
      auto close = path.find(']', prefix.size());
      if (close != std::string::npos) {
        std::size_t old = std::stoul(path.substr(prefix.size(), close - prefix.size()));
        if (old < new_index.size()) {
          out.insert_or_assign(prefix + std::to_string(new_index[old]) + path.substr(close), span);
          continue;
        }
      }
    }
    out.insert_or_assign(path, span);
  }
  spans_ = std::move(out);
}

const Transition* ContractModel::find_transition(std::string_view transition) const {
  auto it = std::find_if(transitions.begin(), transitions.end(),
                         [&](const Transition& t) { return t.name == transition; });
  return it == transitions.end() ? nullptr : &*it;
}

bool ContractModel::has_state(std::string_view state) const {
  return std::find(states.begin(), states.end(), state) != states.end();
}

ContractModel canonicalize(ContractModel model) {
  auto& timed = model.timed_transitions;
  std::vector<std::size_t> order(timed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return timed[a].at_seconds < timed[b].at_seconds;
  });
  if (std::is_sorted(order.begin(), order.end())) return model;

  std::vector<TimedTransition> sorted;
  std::vector<std::size_t> new_index(order.size());
  sorted.reserve(timed.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    new_index[order[pos]] = pos;
    sorted.push_back(std::move(timed[order[pos]]));
  }
  timed = std::move(sorted);
  model.source_map.reindex("timed", new_index);
  return model;
}

bool equals(const ContractModel& a, const ContractModel& b) { return a == b; }

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!head(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(),
                     [&](char c) { return head(c) || (c >= '0' && c <= '9'); });
}

}  // namespace fsmforge
