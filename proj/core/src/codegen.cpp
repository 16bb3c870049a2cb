#include "fsmforge/codegen.hpp"

#include <algorithm>
#include <sstream>

#include "fragment_scan.hpp"

namespace fsmforge {

namespace {

class Writer {
 public:
  void line(int indent, std::string_view text) {
    if (!text.empty()) out_ << std::string(4 * indent, ' ') << text;
    out_ << '\n';
  }
  void blank() { out_ << '\n'; }

  // Multi-line fragments keep their relative layout under the new indent.
  void fragment(int indent, std::string_view text) {
    for (const auto& l : detail::fragment_lines(text)) line(indent, l);
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string param_list(const std::vector<Param>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].type + " " + params[i].name;
  }
  return out;
}

void emit_transition(Writer& w, const WovenContract& woven, const Transition& t) {
  w.line(1, "//Transition " + t.name);
  std::vector<Param> params = woven.injected(t.name);
  params.insert(params.end(), t.inputs.begin(), t.inputs.end());
  w.line(1, "function " + t.name + "(" + param_list(params) + ")");
  if (t.has_tag(kTagPayable)) w.line(2, "payable");
  for (const auto& modifier : woven.chain(t.name)) w.line(2, modifier);
  if (!t.outputs.empty()) w.line(2, "returns (" + param_list(t.outputs) + ")");
  w.line(1, "{");
  for (const auto& local : t.locals) w.line(2, local.type + " " + local.name + ";");
  w.line(2, "require(state == States." + t.from + ");");
  if (!t.guards.empty()) {
    w.line(2, "//Guards");
    w.fragment(2, guard_conjunction(t));
  }
  if (!t.statements.empty()) {
    w.line(2, "//Actions");
    for (const auto& stmt : t.statements) w.fragment(2, stmt.text);
  }
  if (t.to != t.from) {
    w.line(2, "//State change");
    w.line(2, "state = States." + t.to + ";");
  }
  w.line(1, "}");
}

std::string normalize_comment(std::string_view text) {
  std::string out;
  std::string_view body = text;
  std::string_view close;
  if (body.substr(0, 2) == "//") {
    out = "//";
    body.remove_prefix(2);
  } else {
    out = "/*";
    body.remove_prefix(2);
    if (body.size() >= 2 && body.substr(body.size() - 2) == "*/") {
      body.remove_suffix(2);
      close = "*/";
    }
  }
  bool pending_space = false;
  for (char c : detail::trim(body)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  out += close;
  return out;
}

}  // namespace

SourceText generate(const WovenContract& woven) {
  const ContractModel& m = woven.base;
  Writer w;
  w.line(0, "contract " + m.name + "{");
  w.line(1, "//States definition");
  w.line(1, "enum States {");
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    w.line(2, m.states[i] + (i + 1 < m.states.size() ? "," : ""));
  }
  w.line(1, "}");
  w.line(1, "States private state = States." + m.initial_state + ";");
  w.blank();

  w.line(1, "//Variables definition");
  for (const auto& s : m.structs) {
    w.line(1, "struct " + s.name + " {");
    for (const auto& member : s.members) w.line(2, member.type + " " + member.name + ";");
    w.line(1, "}");
  }
  for (const auto& v : m.variables) {
    w.line(1, v.type + " " + std::string(to_string(v.visibility)) + " " + v.name + ";");
  }
  w.line(1, "uint private creationTime = now;");

  for (const auto& fragment : woven.contract_fragments) {
    w.blank();
    w.line(1, fragment.banner);
    for (const auto& l : fragment.lines) w.line(1, l);
  }

  w.blank();
  w.line(1, "//Transitions");
  for (std::size_t i = 0; i < m.transitions.size(); ++i) {
    if (i) w.blank();
    emit_transition(w, woven, m.transitions[i]);
  }
  w.line(0, "}");
  return {w.str()};
}

Result<std::vector<Token>> tokenize_solidity(std::string_view text) {
  auto lexed = lex_fragment(text);
  if (!lexed.ok()) return lexed;
  std::vector<Token> tokens = std::move(lexed.value());
  for (auto& tok : tokens) {
    if (tok.kind == TokenKind::Comment) tok.text = normalize_comment(tok.text);
  }
  return tokens;
}

std::optional<std::size_t> first_token_mismatch(const std::vector<Token>& a,
                                                const std::vector<Token>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].text != b[i].text) return i;
  }
  if (a.size() != b.size()) return n;
  return std::nullopt;
}

std::optional<std::size_t> find_token_run(const std::vector<Token>& haystack,
                                          const std::vector<Token>& needle) {
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](const Token& a, const Token& b) { return a.text == b.text; });
  if (it == haystack.end() && !needle.empty()) return std::nullopt;
  return static_cast<std::size_t>(it - haystack.begin());
}

}  // namespace fsmforge
