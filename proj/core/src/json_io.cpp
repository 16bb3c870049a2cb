#include "fsmforge/json_io.hpp"

#include <initializer_list>
#include <limits>

#include <nlohmann/json.hpp>

#include "fragment_scan.hpp"

namespace fsmforge {

namespace {

using nlohmann::json;

struct ShapeError {
  DiagCode code;
  std::string path;
  std::string message;
};

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

[[noreturn]] void shape(std::string path, std::string message) {
  throw ShapeError{DiagCode::JsonShape, std::move(path), std::move(message)};
}

void require_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) shape(path, "expected an object");
  for (const char* key : keys) {
    if (!obj.contains(key)) shape(path, std::string("missing field \"") + key + "\"");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || item.key() == key;
    if (!known) shape(path, "unexpected field \"" + item.key() + "\"");
  }
}

std::string get_string(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_string()) shape(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::string get_ident(const json& obj, const char* key, const std::string& path) {
  std::string value = get_string(obj, key, path);
  if (!is_identifier(value)) {
    throw ShapeError{DiagCode::Syntax, join(path, key), "'" + value + "' is not an identifier"};
  }
  return value;
}

const json& get_array(const json& obj, const char* key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_array()) shape(join(path, key), "expected an array");
  return v;
}

Fragment get_fragment(const json& v, FragmentKind kind, const std::string& path) {
  if (!v.is_string()) shape(path, "expected a string");
  Fragment fragment{v.get<std::string>(), kind};
  if (auto problem = detail::check_fragment_kind(fragment)) {
    throw ShapeError{DiagCode::Syntax, path, *problem};
  }
  return fragment;
}

std::vector<Param> get_params(const json& obj, const char* key, const std::string& path) {
  std::vector<Param> params;
  const json& arr = get_array(obj, key, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = join(path, key) + "[" + std::to_string(i) + "]";
    require_keys(arr[i], p, {"type", "name"});
    params.push_back(Param{get_string(arr[i], "type", p), get_ident(arr[i], "name", p)});
  }
  return params;
}

std::vector<Fragment> get_fragments(const json& obj, const char* key, FragmentKind kind,
                                    const std::string& path) {
  std::vector<Fragment> out;
  const json& arr = get_array(obj, key, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(get_fragment(arr[i], kind, join(path, key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ContractModel from_json(const json& root) {
  ContractModel model;
  require_keys(root, "", {"name", "states", "initial", "variables", "structs", "transitions",
                          "timed", "plugins"});
  model.name = get_ident(root, "name", "");

  const json& states = get_array(root, "states", "");
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string p = "states[" + std::to_string(i) + "]";
    if (!states[i].is_string()) shape(p, "expected a string");
    std::string s = states[i].get<std::string>();
    if (!is_identifier(s)) throw ShapeError{DiagCode::Syntax, p, "'" + s + "' is not an identifier"};
    model.states.push_back(std::move(s));
  }
  const json& initial = root.at("initial");
  if (initial.is_null()) {
    model.initial_state.clear();
  } else if (initial.is_string()) {
    model.initial_state = initial.get<std::string>();
  } else {
    shape("initial", "expected a string or null");
  }

  const json& vars = get_array(root, "variables", "");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string p = "variables[" + std::to_string(i) + "]";
    require_keys(vars[i], p, {"name", "type", "visibility"});
    VariableDecl v{get_ident(vars[i], "name", p), get_string(vars[i], "type", p), Visibility::Private};
    const std::string vis = get_string(vars[i], "visibility", p);
    if (vis == "public") {
      v.visibility = Visibility::Public;
    } else if (vis != "private") {
      shape(p + ".visibility", "expected \"public\" or \"private\"");
    }
    model.variables.push_back(std::move(v));
  }

  const json& structs = get_array(root, "structs", "");
  for (std::size_t i = 0; i < structs.size(); ++i) {
    const std::string p = "structs[" + std::to_string(i) + "]";
    require_keys(structs[i], p, {"name", "members"});
    StructDef def{get_ident(structs[i], "name", p), {}};
    const json& members = get_array(structs[i], "members", p);
    for (std::size_t j = 0; j < members.size(); ++j) {
      const std::string mp = p + ".members[" + std::to_string(j) + "]";
      require_keys(members[j], mp, {"type", "name"});
      def.members.push_back(StructMember{get_string(members[j], "type", mp),
                                         get_ident(members[j], "name", mp)});
    }
    model.structs.push_back(std::move(def));
  }

  const json& transitions = get_array(root, "transitions", "");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string p = "transitions[" + std::to_string(i) + "]";
    const json& tj = transitions[i];
    require_keys(tj, p, {"name", "from", "to", "tags", "inputs", "outputs", "locals", "guards",
                         "statements"});
    Transition t;
    t.name = get_ident(tj, "name", p);
    t.from = get_ident(tj, "from", p);
    t.to = get_ident(tj, "to", p);
    const json& tags = get_array(tj, "tags", p);
    for (std::size_t k = 0; k < tags.size(); ++k) {
      if (!tags[k].is_string()) shape(p + ".tags[" + std::to_string(k) + "]", "expected a string");
      t.tags.push_back(tags[k].get<std::string>());
    }
    t.inputs = get_params(tj, "inputs", p);
    t.outputs = get_params(tj, "outputs", p);
    t.locals = get_params(tj, "locals", p);
    t.guards = get_fragments(tj, "guards", FragmentKind::Expr, p);
    t.statements = get_fragments(tj, "statements", FragmentKind::Stmt, p);
    model.transitions.push_back(std::move(t));
  }

  const json& timed = get_array(root, "timed", "");
  for (std::size_t i = 0; i < timed.size(); ++i) {
    const std::string p = "timed[" + std::to_string(i) + "]";
    const json& tj = timed[i];
    require_keys(tj, p, {"name", "from", "to", "atSeconds", "guard", "statements"});
    TimedTransition t;
    t.name = get_ident(tj, "name", p);
    t.from = get_ident(tj, "from", p);
    t.to = get_ident(tj, "to", p);
    const json& at = tj.at("atSeconds");
    if (!at.is_number_unsigned() && !(at.is_number_integer() && at.get<std::int64_t>() >= 0)) {
      shape(p + ".atSeconds", "expected a nonnegative integer");
    }
    t.at_seconds = at.get<std::uint64_t>();
    if (!tj.at("guard").is_null()) t.guard = get_fragment(tj.at("guard"), FragmentKind::Expr, p + ".guard");
    t.statements = get_fragments(tj, "statements", FragmentKind::Stmt, p);
    model.timed_transitions.push_back(std::move(t));
  }

  const json& plugins = root.at("plugins");
  require_keys(plugins, "plugins", {"locking", "counter", "timed", "access", "events"});
  for (Plugin plugin : kPluginOrder) {
    const json& flag = plugins.at(std::string(plugin_name(plugin)));
    if (!flag.is_boolean()) shape("plugins." + std::string(plugin_name(plugin)), "expected a boolean");
    model.plugins.set(plugin, flag.get<bool>());
  }
  return model;
}

nlohmann::ordered_json params_json(const std::vector<Param>& params) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : params) {
    nlohmann::ordered_json o;
    o["type"] = p.type;
    o["name"] = p.name;
    arr.push_back(std::move(o));
  }
  return arr;
}

nlohmann::ordered_json fragments_json(const std::vector<Fragment>& fragments) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : fragments) arr.push_back(f.text);
  return arr;
}

}  // namespace

Result<ContractModel> parse_json(std::string_view text, std::string_view file_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    return make_diag(DiagCode::Syntax, "", e.what(), SourceSpan{std::string(file_name), 1, 1, 0});
  }
  try {
    return canonicalize(from_json(root));
  } catch (const ShapeError& e) {
    return make_diag(e.code, e.path, e.message);
  } catch (const json::exception& e) {
    return make_diag(DiagCode::JsonShape, "", e.what());
  }
}

std::string emit_json(const ContractModel& model) {
  // ordered_json keeps the documented field order.
  nlohmann::ordered_json root;
  root["name"] = model.name;
  root["states"] = model.states;
  root["initial"] = model.initial_state.empty() ? nlohmann::ordered_json(nullptr)
                                                : nlohmann::ordered_json(model.initial_state);
  root["variables"] = nlohmann::ordered_json::array();
  for (const auto& v : model.variables) {
    nlohmann::ordered_json o;
    o["name"] = v.name;
    o["type"] = v.type;
    o["visibility"] = std::string(to_string(v.visibility));
    root["variables"].push_back(std::move(o));
  }
  root["structs"] = nlohmann::ordered_json::array();
  for (const auto& s : model.structs) {
    nlohmann::ordered_json o;
    o["name"] = s.name;
    o["members"] = nlohmann::ordered_json::array();
    for (const auto& m : s.members) {
      nlohmann::ordered_json mo;
      mo["type"] = m.type;
      mo["name"] = m.name;
      o["members"].push_back(std::move(mo));
    }
    root["structs"].push_back(std::move(o));
  }
  root["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : model.transitions) {
    nlohmann::ordered_json o;
    o["name"] = t.name;
    o["from"] = t.from;
    o["to"] = t.to;
    o["tags"] = t.tags;
    o["inputs"] = params_json(t.inputs);
    o["outputs"] = params_json(t.outputs);
    o["locals"] = params_json(t.locals);
    o["guards"] = fragments_json(t.guards);
    o["statements"] = fragments_json(t.statements);
    root["transitions"].push_back(std::move(o));
  }
  root["timed"] = nlohmann::ordered_json::array();
  for (const auto& t : model.timed_transitions) {
    nlohmann::ordered_json o;
    o["name"] = t.name;
    o["from"] = t.from;
    o["to"] = t.to;
    o["atSeconds"] = t.at_seconds;
    o["guard"] = t.guard ? nlohmann::ordered_json(t.guard->text) : nlohmann::ordered_json(nullptr);
    o["statements"] = fragments_json(t.statements);
    root["timed"].push_back(std::move(o));
  }
  nlohmann::ordered_json plugins;
  for (Plugin p : kPluginOrder) plugins[std::string(plugin_name(p))] = model.plugins.enabled(p);
  root["plugins"] = std::move(plugins);
  return root.dump(2) + "\n";
}

}  // namespace fsmforge
