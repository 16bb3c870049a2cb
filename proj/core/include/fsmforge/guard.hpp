#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fsmforge/model.hpp"

namespace fsmforge {

using BigInt = boost::multiprecision::cpp_int;

enum class GuardOp { Not, Neg, Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

std::string_view to_string(GuardOp op);
bool is_unary(GuardOp op);

/// Guard expression in the evaluable subset. Anything outside the subset is
/// a single Opaque node holding the original text.
struct GuardAst {
  enum class Kind { IntLit, TimeLit, Var, Now, CreationTime, Unary, Binary, Opaque };

  Kind kind = Kind::IntLit;
  BigInt value;                   // IntLit, TimeLit (seconds)
  std::string text;               // Var name, Opaque source
  GuardOp op = GuardOp::Not;      // Unary, Binary
  std::vector<GuardAst> operands; // 1 for Unary, 2 for Binary

  static GuardAst int_lit(BigInt v);
  static GuardAst time_lit(BigInt seconds);
  static GuardAst var(std::string name);
  static GuardAst now();
  static GuardAst creation_time();
  static GuardAst unary(GuardOp op, GuardAst child);
  static GuardAst binary(GuardOp op, GuardAst lhs, GuardAst rhs);
  static GuardAst opaque(std::string source);

  bool is_opaque() const { return kind == Kind::Opaque; }
  int depth() const;

  friend bool operator==(const GuardAst&, const GuardAst&) = default;
};

/// Fully parenthesized rendering, used in test output and the REPL.
std::string to_string(const GuardAst& ast);

/// Precedence, loosest first: ||, &&, == !=, < <= > >=, + -, * / %, unary.
/// Total: falls back to Opaque instead of failing.
GuardAst parse_guard_expr(const Fragment& fragment);
GuardAst parse_guard_expr(std::string_view text);

struct GuardEnv {
  BigInt now;
  BigInt creation_time;
  const std::map<std::string, BigInt, std::less<>>* vars = nullptr;
};

class GuardEvalError : public std::runtime_error {
 public:
  enum class Kind { MissingOverride, UnboundVar, DivisionByZero };

  GuardEvalError(Kind kind, std::string detail);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Integer value of an expression; booleans are 0/1, && and || short-circuit,
/// division truncates toward zero. Throws GuardEvalError.
BigInt evaluate(const GuardAst& ast, const GuardEnv& env);

/// Truth of a guard. An override, when present, decides the guard outright;
/// an Opaque guard without one throws MissingOverride.
bool eval_guard(const GuardAst& ast, const GuardEnv& env, std::optional<bool> override_value);

}  // namespace fsmforge
