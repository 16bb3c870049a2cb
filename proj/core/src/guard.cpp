#include "fsmforge/guard.hpp"

#include <algorithm>
#include <sstream>

#include "fsmforge/lexer.hpp"

namespace fsmforge {

std::string_view to_string(GuardOp op) {
  switch (op) {
    case GuardOp::Not: return "!";
    case GuardOp::Neg: return "-";
    case GuardOp::Add: return "+";
    case GuardOp::Sub: return "-";
    case GuardOp::Mul: return "*";
    case GuardOp::Div: return "/";
    case GuardOp::Mod: return "%";
    case GuardOp::Lt: return "<";
    case GuardOp::Le: return "<=";
    case GuardOp::Gt: return ">";
    case GuardOp::Ge: return ">=";
    case GuardOp::Eq: return "==";
    case GuardOp::Ne: return "!=";
    case GuardOp::And: return "&&";
    case GuardOp::Or: return "||";
  }
  return "?";
}

bool is_unary(GuardOp op) { return op == GuardOp::Not || op == GuardOp::Neg; }

GuardAst GuardAst::int_lit(BigInt v) {
  GuardAst a;
  a.kind = Kind::IntLit;
  a.value = std::move(v);
  return a;
}

GuardAst GuardAst::time_lit(BigInt seconds) {
  GuardAst a;
  a.kind = Kind::TimeLit;
  a.value = std::move(seconds);
  return a;
}

GuardAst GuardAst::var(std::string name) {
  GuardAst a;
  a.kind = Kind::Var;
  a.text = std::move(name);
  return a;
}

GuardAst GuardAst::now() {
  GuardAst a;
  a.kind = Kind::Now;
  return a;
}

GuardAst GuardAst::creation_time() {
  GuardAst a;
  a.kind = Kind::CreationTime;
  return a;
}

GuardAst GuardAst::unary(GuardOp op, GuardAst child) {
  GuardAst a;
  a.kind = Kind::Unary;
  a.op = op;
  a.operands.push_back(std::move(child));
  return a;
}

GuardAst GuardAst::binary(GuardOp op, GuardAst lhs, GuardAst rhs) {
  GuardAst a;
  a.kind = Kind::Binary;
  a.op = op;
  a.operands.push_back(std::move(lhs));
  a.operands.push_back(std::move(rhs));
  return a;
}

GuardAst GuardAst::opaque(std::string source) {
  GuardAst a;
  a.kind = Kind::Opaque;
  a.text = std::move(source);
  return a;
}

int GuardAst::depth() const {
  int deepest = 0;
  for (const auto& child : operands) deepest = std::max(deepest, child.depth());
  return deepest + 1;
}

std::string to_string(const GuardAst& ast) {
  using Kind = GuardAst::Kind;
  switch (ast.kind) {
    case Kind::IntLit: return ast.value.str();
    case Kind::TimeLit: return ast.value.str() + " seconds";
    case Kind::Var: return ast.text;
    case Kind::Now: return "now";
    case Kind::CreationTime: return "creationTime";
    case Kind::Unary: return std::string(to_string(ast.op)) + to_string(ast.operands[0]);
    case Kind::Binary:
      return "(" + to_string(ast.operands[0]) + " " + std::string(to_string(ast.op)) + " " +
             to_string(ast.operands[1]) + ")";
    case Kind::Opaque: return "opaque{" + ast.text + "}";
  }
  return {};
}

namespace {

struct OutsideSubset {};

class GuardParser {
 public:
  explicit GuardParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  GuardAst parse() {
    if (tokens_.empty()) throw OutsideSubset{};
    GuardAst ast = parse_or();
    if (pos_ != tokens_.size()) throw OutsideSubset{};
    return ast;
  }

 private:
  bool at_op(std::string_view op) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Operator &&
           tokens_[pos_].text == op;
  }

  template <std::size_t N>
  std::optional<GuardOp> match(const std::pair<std::string_view, GuardOp> (&table)[N]) {
    for (const auto& [text, op] : table) {
      if (at_op(text)) {
        ++pos_;
        return op;
      }
    }
    return std::nullopt;
  }

  template <std::size_t N>
  GuardAst left_assoc(const std::pair<std::string_view, GuardOp> (&table)[N],
                      GuardAst (GuardParser::*operand)()) {
    GuardAst lhs = (this->*operand)();
    while (auto op = match(table)) {
      GuardAst rhs = (this->*operand)();
      lhs = GuardAst::binary(*op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  GuardAst parse_or() {
    static constexpr std::pair<std::string_view, GuardOp> ops[] = {{"||", GuardOp::Or}};
    return left_assoc(ops, &GuardParser::parse_and);
  }
  GuardAst parse_and() {
    static constexpr std::pair<std::string_view, GuardOp> ops[] = {{"&&", GuardOp::And}};
    return left_assoc(ops, &GuardParser::parse_equality);
  }
  GuardAst parse_equality() {
    static constexpr std::pair<std::string_view, GuardOp> ops[] = {{"==", GuardOp::Eq},
                                                                   {"!=", GuardOp::Ne}};
    return left_assoc(ops, &GuardParser::parse_relational);
  }
  GuardAst parse_relational() {
    static constexpr std::pair<std::string_view, GuardOp> ops[] = {
        {"<=", GuardOp::Le}, {">=", GuardOp::Ge}, {"<", GuardOp::Lt}, {">", GuardOp::Gt}};
    return left_assoc(ops, &GuardParser::parse_additive);
  }
  GuardAst parse_additive() {
    static constexpr std::pair<std::string_view, GuardOp> ops[] = {{"+", GuardOp::Add},
                                                                   {"-", GuardOp::Sub}};
    return left_assoc(ops, &GuardParser::parse_multiplicative);
  }
  GuardAst parse_multiplicative() {
    static constexpr std::pair<std::string_view, GuardOp> ops[] = {
        {"*", GuardOp::Mul}, {"/", GuardOp::Div}, {"%", GuardOp::Mod}};
    return left_assoc(ops, &GuardParser::parse_unary);
  }

  GuardAst parse_unary() {
    if (at_op("!")) {
      ++pos_;
      return GuardAst::unary(GuardOp::Not, parse_unary());
    }
    if (at_op("-")) {
      ++pos_;
      return GuardAst::unary(GuardOp::Neg, parse_unary());
    }
    return parse_primary();
  }

  GuardAst parse_primary() {
    if (pos_ >= tokens_.size()) throw OutsideSubset{};
    const Token& tok = tokens_[pos_++];
    switch (tok.kind) {
      case TokenKind::Number:
        return GuardAst::int_lit(parse_integer(tok.text));
      case TokenKind::NumberWithUnit: {
        auto space = tok.text.find(' ');
        BigInt amount = parse_integer(tok.text.substr(0, space));
        auto unit = time_unit_seconds(std::string_view(tok.text).substr(space + 1));
        return GuardAst::time_lit(amount * BigInt(*unit));
      }
      case TokenKind::Identifier: {
        // Member access, indexing and calls are outside the subset.
        if (pos_ < tokens_.size()) {
          const Token& next = tokens_[pos_];
          if ((next.kind == TokenKind::Operator && next.text == ".") ||
              (next.kind == TokenKind::Delimiter && (next.text == "[" || next.text == "("))) {
            throw OutsideSubset{};
          }
        }
        if (tok.text == "now") return GuardAst::now();
        if (tok.text == "creationTime") return GuardAst::creation_time();
        if (tok.text == "true") return GuardAst::int_lit(1);
        if (tok.text == "false") return GuardAst::int_lit(0);
        return GuardAst::var(tok.text);
      }
      case TokenKind::Delimiter:
        if (tok.text == "(") {
          GuardAst inner = parse_or();
          if (pos_ >= tokens_.size() || tokens_[pos_].text != ")") throw OutsideSubset{};
          ++pos_;
          return inner;
        }
        throw OutsideSubset{};
      default:
        throw OutsideSubset{};
    }
  }

  static BigInt parse_integer(std::string text) {
    text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
    if (text.find_first_of(".eE") != std::string::npos &&
        !(text.size() > 1 && (text[1] == 'x' || text[1] == 'X'))) {
      throw OutsideSubset{};
    }
    return BigInt(text);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

GuardAst parse_guard_expr(std::string_view text) {
  auto lexed = lex_fragment(text);
  if (!lexed.ok()) return GuardAst::opaque(std::string(text));
  std::vector<Token> tokens;
  for (auto& tok : lexed.value()) {
    if (tok.kind != TokenKind::Comment) tokens.push_back(std::move(tok));
  }
  try {
    return GuardParser(std::move(tokens)).parse();
  } catch (const OutsideSubset&) {
    return GuardAst::opaque(std::string(text));
  }
}

GuardAst parse_guard_expr(const Fragment& fragment) { return parse_guard_expr(fragment.text); }

GuardEvalError::GuardEvalError(Kind kind, std::string detail)
    : std::runtime_error(std::move(detail)), kind_(kind) {}

BigInt evaluate(const GuardAst& ast, const GuardEnv& env) {
  using Kind = GuardAst::Kind;
  switch (ast.kind) {
    case Kind::IntLit:
    case Kind::TimeLit:
      return ast.value;
    case Kind::Now:
      return env.now;
    case Kind::CreationTime:
      return env.creation_time;
    case Kind::Var: {
      if (env.vars) {
        auto it = env.vars->find(ast.text);
        if (it != env.vars->end()) return it->second;
      }
      throw GuardEvalError(GuardEvalError::Kind::UnboundVar, "unbound variable '" + ast.text + "'");
    }
    case Kind::Opaque:
      throw GuardEvalError(GuardEvalError::Kind::MissingOverride,
                           "expression needs an override: " + ast.text);
    case Kind::Unary: {
      BigInt v = evaluate(ast.operands[0], env);
      return ast.op == GuardOp::Not ? BigInt(v == 0 ? 1 : 0) : BigInt(-v);
    }
    case Kind::Binary:
      break;
  }

  const GuardAst& lhs = ast.operands[0];
  const GuardAst& rhs = ast.operands[1];
  if (ast.op == GuardOp::And) {
    if (evaluate(lhs, env) == 0) return 0;
    return evaluate(rhs, env) != 0 ? 1 : 0;
  }
  if (ast.op == GuardOp::Or) {
    if (evaluate(lhs, env) != 0) return 1;
    return evaluate(rhs, env) != 0 ? 1 : 0;
  }

  const BigInt a = evaluate(lhs, env);
  const BigInt b = evaluate(rhs, env);
  switch (ast.op) {
    case GuardOp::Add: return a + b;
    case GuardOp::Sub: return a - b;
    case GuardOp::Mul: return a * b;
    case GuardOp::Div:
    case GuardOp::Mod:
      if (b == 0) throw GuardEvalError(GuardEvalError::Kind::DivisionByZero, "division by zero");
      // cpp_int truncates toward zero; the remainder takes the dividend's sign.
      return ast.op == GuardOp::Div ? BigInt(a / b) : BigInt(a % b);
    case GuardOp::Lt: return a < b ? 1 : 0;
    case GuardOp::Le: return a <= b ? 1 : 0;
    case GuardOp::Gt: return a > b ? 1 : 0;
    case GuardOp::Ge: return a >= b ? 1 : 0;
    case GuardOp::Eq: return a == b ? 1 : 0;
    case GuardOp::Ne: return a != b ? 1 : 0;
    default: break;
  }
  throw std::logic_error("evaluate: bad binary operator");
}

bool eval_guard(const GuardAst& ast, const GuardEnv& env, std::optional<bool> override_value) {
  if (override_value) return *override_value;
  return evaluate(ast, env) != 0;
}

}  // namespace fsmforge
