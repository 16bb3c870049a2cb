#include "fsmforge/dsl.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "fragment_scan.hpp"
#include "fsmforge/lexer.hpp"

namespace fsmforge {

namespace {

struct Abort {};

bool ident_head(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool ident_tail(char c) { return ident_head(c) || (c >= '0' && c <= '9'); }
bool blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

struct Located {
  std::string text;
  SourceSpan span;
};

class DslParser {
 public:
  DslParser(std::string_view text, std::string_view file) : text_(text), file_(file) {}

  Result<ContractModel> run() {
    try {
      parse_contract();
    } catch (const Abort&) {
    }
    if (!diags_.empty()) return diags_;
    return canonicalize(std::move(model_));
  }

 private:
  // ---- location and low-level scanning --------------------------------------

  SourceSpan span_at(std::size_t offset, std::size_t length = 0) {
    while (scan_pos_ < offset) {
      if (text_[scan_pos_] == '\n') {
        ++scan_line_;
        scan_col_ = 1;
      } else {
        ++scan_col_;
      }
      ++scan_pos_;
    }
    if (scan_pos_ > offset) {
      // Rewind: recount from the start. Rare (only for error reporting).
      scan_pos_ = 0;
      scan_line_ = 1;
      scan_col_ = 1;
      return span_at(offset, length);
    }
    return SourceSpan{std::string(file_), scan_line_, scan_col_, static_cast<int>(length)};
  }

  [[noreturn]] void fail(DiagCode code, std::size_t offset, std::size_t length, std::string message,
                         std::string path = {}) {
    diags_.push_back(make_diag(code, std::move(path), std::move(message), span_at(offset, length)));
    throw Abort{};
  }

  void note(DiagCode code, const SourceSpan& span, std::string message, std::string path = {}) {
    diags_.push_back(make_diag(code, std::move(path), std::move(message), span));
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      if (blank(text_[pos_])) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t lexeme_length(std::size_t at) const {
    if (at >= text_.size()) return 0;
    if (!ident_tail(text_[at])) return 1;
    std::size_t end = at;
    while (end < text_.size() && ident_tail(text_[end])) ++end;
    return end - at;
  }

  std::string describe_here() const {
    if (pos_ >= text_.size()) return "end of input";
    return "'" + std::string(text_.substr(pos_, lexeme_length(pos_))) + "'";
  }

  [[noreturn]] void unexpected(std::string_view expected) {
    fail(DiagCode::Syntax, pos_, lexeme_length(pos_),
         "expected " + std::string(expected) + ", found " + describe_here());
  }

  bool at_char(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect_char(char c) {
    if (!at_char(c)) unexpected(std::string("'") + c + "'");
    ++pos_;
  }

  std::optional<std::string_view> peek_word() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_head(text_[pos_])) return std::nullopt;
    std::size_t end = pos_;
    while (end < text_.size() && ident_tail(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  bool at_word(std::string_view word) {
    auto w = peek_word();
    return w && *w == word;
  }

  Located expect_ident(std::string_view what) {
    auto w = peek_word();
    if (!w) unexpected(what);
    Located out{std::string(*w), span_at(pos_, w->size())};
    pos_ += w->size();
    return out;
  }

  void expect_word(std::string_view word) {
    if (!at_word(word)) unexpected("'" + std::string(word) + "'");
    pos_ += word.size();
  }

  // ---- raw regions -----------------------------------------------------------

  /// `TYPETEXT IDENT` up to (not including) one of `stops` at nesting depth 0.
  std::pair<Located, Located> typed_name(std::string_view stops, std::string_view what) {
    skip_ws();
    const std::size_t start = pos_;
    int depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (depth == 0 && stops.find(c) != std::string_view::npos) break;
      if (c == '{' || c == '}' || c == '#' || c == ';') break;
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') {
        if (depth == 0) break;
        --depth;
      }
      ++pos_;
    }
    if (pos_ >= text_.size() || stops.find(text_[pos_]) == std::string_view::npos) {
      unexpected(std::string(what) + " terminated by one of \"" + std::string(stops) + "\"");
    }
    std::string_view raw = text_.substr(start, pos_ - start);
    std::size_t end = raw.size();
    while (end > 0 && blank(raw[end - 1])) --end;
    std::size_t name_start = end;
    while (name_start > 0 && ident_tail(raw[name_start - 1])) --name_start;
    if (name_start == end || !ident_head(raw[name_start])) {
      fail(DiagCode::Syntax, start + end, 0, "expected a name after the type in " + std::string(what));
    }
    std::string_view type = detail::trim(raw.substr(0, name_start));
    if (type.empty() || (!blank(raw[name_start - 1]) && raw[name_start - 1] != ']' &&
                         raw[name_start - 1] != ')')) {
      fail(DiagCode::Syntax, start, end, "expected '<type> <name>' in " + std::string(what));
    }
    const std::size_t type_offset = start + static_cast<std::size_t>(type.data() - raw.data());
    Located type_loc{std::string(type), span_at(type_offset, type.size())};
    Located name_loc{std::string(raw.substr(name_start, end - name_start)),
                     span_at(start + name_start, end - name_start)};
    return {std::move(type_loc), std::move(name_loc)};
  }

  /// `{ FRAGMENT }`; returns the trimmed text and the location of its first byte.
  std::pair<Fragment, SourceSpan> fragment_block(FragmentKind kind, const std::string& path) {
    expect_char('{');
    const std::size_t open = pos_ - 1;
    const std::size_t close = detail::find_fragment_end(text_, pos_);
    if (close == std::string_view::npos) {
      fail(DiagCode::Unbalanced, open, 1, "fragment is missing its closing '}'", path);
    }
    std::string_view raw = text_.substr(pos_, close - pos_);
    std::string_view body = detail::trim(raw);
    const std::size_t body_offset =
        body.empty() ? pos_ : pos_ + static_cast<std::size_t>(body.data() - raw.data());
    Fragment fragment{std::string(body), kind};
    SourceSpan span = span_at(body_offset, body.size());
    if (auto problem = detail::check_fragment_kind(fragment)) {
      fail(DiagCode::Syntax, body_offset, body.size(), *problem, path);
    }
    pos_ = close + 1;
    return {std::move(fragment), span};
  }

  // ---- productions -----------------------------------------------------------

  void parse_contract() {
    expect_word("contract");
    Located name = expect_ident("contract name");
    model_.name = name.text;
    model_.source_map.record("name", name.span);
    expect_char('{');
    while (!at_char('}')) {
      auto word = peek_word();
      if (!word) unexpected("a declaration or '}'");
      if (*word == "states") {
        parse_states();
      } else if (*word == "plugins") {
        parse_plugins();
      } else if (*word == "struct") {
        parse_struct();
      } else if (*word == "var") {
        parse_var();
      } else if (*word == "transition") {
        parse_transition();
      } else if (*word == "timed") {
        parse_timed();
      } else {
        unexpected("states, plugins, struct, var, transition or timed");
      }
    }
    ++pos_;
    skip_ws();
    if (pos_ < text_.size()) unexpected("end of input after the contract");
  }

  void parse_states() {
    const std::size_t kw = pos_;
    expect_word("states");
    if (seen_states_) {
      note(DiagCode::DupDecl, span_at(kw, 6), "second 'states' block", "states");
    }
    seen_states_ = true;
    expect_char('{');
    do {
      if (at_char('}')) {
        if (model_.states.empty()) unexpected("a state name");
        break;
      }
      bool initial = false;
      if (at_word("initial")) {
        // `initial` alone is a state named "initial".
        const std::size_t save = pos_;
        pos_ += 7;
        if (at_char(';') || at_char('}')) {
          pos_ = save;
        } else {
          initial = true;
        }
      }
      Located state = expect_ident("a state name");
      const std::string path = "states[" + std::to_string(model_.states.size()) + "]";
      if (model_.has_state(state.text)) {
        note(DiagCode::DupDecl, state.span, "state '" + state.text + "' declared twice", path);
      } else {
        model_.source_map.record(path, state.span);
        model_.states.push_back(state.text);
      }
      if (initial) {
        if (!model_.initial_state.empty()) {
          note(DiagCode::DupDecl, state.span, "more than one initial state", "initial");
        } else {
          model_.initial_state = state.text;
          model_.source_map.record("initial", state.span);
        }
      }
    } while (at_char(';') && (++pos_, true));
    expect_char('}');
  }

  void parse_plugins() {
    const std::size_t kw = pos_;
    expect_word("plugins");
    if (seen_plugins_) note(DiagCode::DupDecl, span_at(kw, 7), "second 'plugins' block", "plugins");
    seen_plugins_ = true;
    model_.source_map.record("plugins", span_at(kw, 7));
    expect_char('{');
    std::set<Plugin> seen;
    do {
      if (at_char('}') && !seen.empty()) break;
      Located name = expect_ident("a plugin name");
      auto plugin = plugin_from_name(name.text);
      if (!plugin) {
        pos_ -= name.text.size();
        fail(DiagCode::Syntax, pos_, name.text.size(),
             "unknown plugin '" + name.text + "' (expected locking, counter, timed, access, events)",
             "plugins");
      }
      if (!seen.insert(*plugin).second) {
        note(DiagCode::DupDecl, name.span, "plugin '" + name.text + "' listed twice", "plugins");
      }
      model_.plugins.set(*plugin, true);
    } while (at_char(';') && (++pos_, true));
    expect_char('}');
  }

  void parse_struct() {
    expect_word("struct");
    Located name = expect_ident("a struct name");
    const std::string path = "structs[" + std::to_string(model_.structs.size()) + "]";
    model_.source_map.record(path, name.span);
    StructDef def{name.text, {}};
    expect_char('{');
    while (!at_char('}')) {
      auto [type, member] = typed_name(";", "struct member");
      expect_char(';');
      const std::string member_path = path + ".members[" + std::to_string(def.members.size()) + "]";
      auto dup = std::find_if(def.members.begin(), def.members.end(),
                              [&](const StructMember& m) { return m.name == member.text; });
      if (dup != def.members.end()) {
        note(DiagCode::DupDecl, member.span, "member '" + member.text + "' declared twice",
             member_path);
        continue;
      }
      model_.source_map.record(member_path, member.span);
      model_.source_map.record(member_path + ".type", type.span);
      def.members.push_back(StructMember{type.text, member.text});
    }
    ++pos_;
    model_.structs.push_back(std::move(def));
  }

  void parse_var() {
    expect_word("var");
    Visibility visibility;
    if (at_word("public")) {
      visibility = Visibility::Public;
      pos_ += 6;
    } else if (at_word("private")) {
      visibility = Visibility::Private;
      pos_ += 7;
    } else {
      unexpected("'public' or 'private'");
    }
    auto [type, name] = typed_name(";", "variable declaration");
    expect_char(';');
    const std::string path = "variables[" + std::to_string(model_.variables.size()) + "]";
    model_.source_map.record(path, name.span);
    model_.source_map.record(path + ".type", type.span);
    model_.variables.push_back(VariableDecl{name.text, type.text, visibility});
  }

  std::vector<Param> param_list(std::string_view keyword, const std::string& path) {
    expect_word(keyword);
    expect_char('(');
    std::vector<Param> params;
    if (at_char(')')) {
      ++pos_;
    } else {
      while (true) {
        auto [type, name] = typed_name(",)", "parameter");
        const std::string param_path = path + "[" + std::to_string(params.size()) + "]";
        model_.source_map.record(param_path, name.span);
        model_.source_map.record(param_path + ".type", type.span);
        params.push_back(Param{type.text, name.text});
        if (at_char(',')) {
          ++pos_;
          continue;
        }
        expect_char(')');
        break;
      }
    }
    expect_char(';');
    return params;
  }

  void endpoints(std::string& from, std::string& to, const std::string& path) {
    expect_word("from");
    Located f = expect_ident("a source state");
    expect_word("to");
    Located t = expect_ident("a target state");
    from = f.text;
    to = t.text;
    model_.source_map.record(path + ".from", f.span);
    model_.source_map.record(path + ".to", t.span);
  }

  void parse_transition() {
    expect_word("transition");
    Located name = expect_ident("a transition name");
    const std::string path = "transitions[" + std::to_string(model_.transitions.size()) + "]";
    model_.source_map.record(path, name.span);
    Transition t;
    t.name = name.text;
    endpoints(t.from, t.to, path);
    if (at_word("tags")) {
      pos_ += 4;
      expect_char('(');
      do {
        Located tag = expect_ident("a tag");
        model_.source_map.record(path + ".tags[" + std::to_string(t.tags.size()) + "]", tag.span);
        t.tags.push_back(tag.text);
      } while (at_char(',') && (++pos_, true));
      expect_char(')');
    }
    expect_char('{');
    if (at_word("input")) t.inputs = param_list("input", path + ".inputs");
    if (at_word("output")) t.outputs = param_list("output", path + ".outputs");
    if (at_word("locals")) t.locals = param_list("locals", path + ".locals");
    while (at_word("guard")) {
      pos_ += 5;
      const std::string p = path + ".guards[" + std::to_string(t.guards.size()) + "]";
      auto [fragment, span] = fragment_block(FragmentKind::Expr, p);
      model_.source_map.record(p, span);
      t.guards.push_back(std::move(fragment));
    }
    while (at_word("action")) {
      pos_ += 6;
      const std::string p = path + ".statements[" + std::to_string(t.statements.size()) + "]";
      auto [fragment, span] = fragment_block(FragmentKind::Stmt, p);
      model_.source_map.record(p, span);
      t.statements.push_back(std::move(fragment));
    }
    if (!at_char('}')) unexpected("input, output, locals, guard, action or '}' (in that order)");
    ++pos_;
    model_.transitions.push_back(std::move(t));
  }

  std::uint64_t duration() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (pos_ == start) unexpected("a duration");
    std::uint64_t amount = 0;
    for (std::size_t i = start; i < pos_; ++i) {
      const auto digit = static_cast<std::uint64_t>(text_[i] - '0');
      if (amount > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
        fail(DiagCode::Syntax, start, pos_ - start, "duration out of range");
      }
      amount = amount * 10 + digit;
    }
    if (pos_ < text_.size() && ident_tail(text_[pos_])) {
      fail(DiagCode::BadUnit, pos_, lexeme_length(pos_), "time unit must be separated from the number");
    }
    std::uint64_t unit = 1;
    if (auto word = peek_word()) {
      auto seconds = time_unit_seconds(*word);
      if (!seconds) {
        fail(DiagCode::BadUnit, pos_, word->size(),
             "unknown time unit '" + std::string(*word) +
                 "' (expected seconds, minutes, hours, days or weeks)");
      }
      unit = *seconds;
      pos_ += word->size();
    }
    if (amount > std::numeric_limits<std::uint64_t>::max() / unit) {
      fail(DiagCode::Syntax, start, pos_ - start, "duration out of range");
    }
    return amount * unit;
  }

  void parse_timed() {
    expect_word("timed");
    Located name = expect_ident("a timed transition name");
    const std::string path = "timed[" + std::to_string(model_.timed_transitions.size()) + "]";
    model_.source_map.record(path, name.span);
    TimedTransition t;
    t.name = name.text;
    endpoints(t.from, t.to, path);
    expect_word("at");
    t.at_seconds = duration();
    expect_char('{');
    if (at_word("guard")) {
      pos_ += 5;
      auto [fragment, span] = fragment_block(FragmentKind::Expr, path + ".guard");
      model_.source_map.record(path + ".guard", span);
      t.guard = std::move(fragment);
    }
    while (at_word("action")) {
      pos_ += 6;
      const std::string p = path + ".statements[" + std::to_string(t.statements.size()) + "]";
      auto [fragment, span] = fragment_block(FragmentKind::Stmt, p);
      model_.source_map.record(p, span);
      t.statements.push_back(std::move(fragment));
    }
    if (!at_char('}')) unexpected("guard, action or '}' (in that order)");
    ++pos_;
    model_.timed_transitions.push_back(std::move(t));
  }

  std::string_view text_;
  std::string_view file_;
  std::size_t pos_ = 0;
  std::size_t scan_pos_ = 0;
  int scan_line_ = 1;
  int scan_col_ = 1;
  bool seen_states_ = false;
  bool seen_plugins_ = false;
  ContractModel model_;
  std::vector<Diagnostic> diags_;
};

// ---- emission ----------------------------------------------------------------

std::string duration_text(std::uint64_t seconds) {
  static constexpr std::pair<std::uint64_t, std::string_view> units[] = {
      {604800, "weeks"}, {86400, "days"}, {3600, "hours"}, {60, "minutes"}};
  if (seconds == 0) return "0 seconds";
  for (const auto& [size, name] : units) {
    if (seconds % size == 0) return std::to_string(seconds / size) + " " + std::string(name);
  }
  return std::to_string(seconds) + " seconds";
}

void emit_fragment(std::ostringstream& out, std::string_view keyword, const Fragment& fragment,
                   std::string_view indent) {
  out << indent << keyword << " {";
  const bool inline_ok = fragment.text.find('\n') == std::string::npos &&
                         fragment.text.find("//") == std::string::npos;
  if (inline_ok) {
    out << ' ' << fragment.text << " }\n";
  } else {
    out << '\n' << indent << "    " << fragment.text << '\n' << indent << "}\n";
  }
}

void emit_params(std::ostringstream& out, std::string_view keyword, const std::vector<Param>& params) {
  if (params.empty()) return;
  out << "        " << keyword << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out << ", ";
    out << params[i].type << ' ' << params[i].name;
  }
  out << ");\n";
}

}  // namespace

Result<ContractModel> parse_dsl(std::string_view text, std::string_view file_name) {
  return DslParser(text, file_name).run();
}

std::string emit_dsl(const ContractModel& model) {
  std::ostringstream out;
  out << "contract " << model.name << " {\n";
  if (!model.states.empty()) {
    out << "    states {";
    for (const auto& s : model.states) {
      out << ' ' << (s == model.initial_state ? "initial " : "") << s << ';';
    }
    out << " }\n";
  }
  if (model.plugins.any()) {
    out << "    plugins {";
    for (Plugin p : kPluginOrder) {
      if (model.plugins.enabled(p)) out << ' ' << plugin_name(p) << ';';
    }
    out << " }\n";
  }
  for (const auto& def : model.structs) {
    out << "    struct " << def.name << " {\n";
    for (const auto& m : def.members) out << "        " << m.type << ' ' << m.name << ";\n";
    out << "    }\n";
  }
  for (const auto& v : model.variables) {
    out << "    var " << to_string(v.visibility) << ' ' << v.type << ' ' << v.name << ";\n";
  }
  for (const auto& t : model.transitions) {
    out << "\n    transition " << t.name << " from " << t.from << " to " << t.to;
    if (!t.tags.empty()) {
      out << " tags(";
      for (std::size_t i = 0; i < t.tags.size(); ++i) out << (i ? ", " : "") << t.tags[i];
      out << ')';
    }
    out << " {\n";
    emit_params(out, "input", t.inputs);
    emit_params(out, "output", t.outputs);
    emit_params(out, "locals", t.locals);
    for (const auto& g : t.guards) emit_fragment(out, "guard", g, "        ");
    for (const auto& s : t.statements) emit_fragment(out, "action", s, "        ");
    out << "    }\n";
  }
  for (const auto& t : model.timed_transitions) {
    out << "\n    timed " << t.name << " from " << t.from << " to " << t.to << " at "
        << duration_text(t.at_seconds) << " {\n";
    if (t.guard) emit_fragment(out, "guard", *t.guard, "        ");
    for (const auto& s : t.statements) emit_fragment(out, "action", s, "        ");
    out << "    }\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fsmforge
