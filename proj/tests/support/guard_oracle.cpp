#include "guard_oracle.hpp"

#include <sstream>

namespace fsmforge::testing {

namespace {

constexpr GuardOp kUnary[] = {GuardOp::Not, GuardOp::Neg};
constexpr GuardOp kBinary[] = {GuardOp::Add, GuardOp::Sub, GuardOp::Mul, GuardOp::Div, GuardOp::Mod,
                               GuardOp::Lt,  GuardOp::Le,  GuardOp::Gt,  GuardOp::Ge,  GuardOp::Eq,
                               GuardOp::Ne,  GuardOp::And, GuardOp::Or};

const char* symbol(GuardOp op) {
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

// Solidity binding strength; larger binds tighter.
int precedence(const OracleExpr& e) {
  switch (e.kind) {
    case OracleExpr::Kind::Lit:
    case OracleExpr::Kind::Var: return 8;
    case OracleExpr::Kind::Unary: return 7;
    case OracleExpr::Kind::Binary: break;
  }
  switch (e.op) {
    case GuardOp::Or: return 1;
    case GuardOp::And: return 2;
    case GuardOp::Eq:
    case GuardOp::Ne: return 3;
    case GuardOp::Lt:
    case GuardOp::Le:
    case GuardOp::Gt:
    case GuardOp::Ge: return 4;
    case GuardOp::Add:
    case GuardOp::Sub: return 5;
    default: return 6;
  }
}

std::string to_text(__int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    s.insert(s.begin(), static_cast<char>('0' + (digit < 0 ? -digit : digit)));
    v /= 10;
  }
  return neg ? "-" + s : s;
}

OracleExpr leaf_var(std::string name) {
  OracleExpr e;
  e.kind = OracleExpr::Kind::Var;
  e.var = std::move(name);
  return e;
}

OracleExpr leaf_lit(long long v) {
  OracleExpr e;
  e.kind = OracleExpr::Kind::Lit;
  e.lit = v;
  return e;
}

OracleExpr make_unary(GuardOp op, OracleExpr child) {
  OracleExpr e;
  e.kind = OracleExpr::Kind::Unary;
  e.op = op;
  e.kids.push_back(std::move(child));
  return e;
}

OracleExpr make_binary(GuardOp op, OracleExpr l, OracleExpr r) {
  OracleExpr e;
  e.kind = OracleExpr::Kind::Binary;
  e.op = op;
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}

void collect(int depth, const std::vector<OracleExpr>& leaves, std::vector<std::vector<OracleExpr>>& by_depth) {
  // by_depth[d] holds trees of depth exactly d.
  by_depth.assign(depth + 1, {});
  by_depth[1] = leaves;
  for (int d = 2; d <= depth; ++d) {
    for (GuardOp op : kUnary) {
      for (const auto& c : by_depth[d - 1]) by_depth[d].push_back(make_unary(op, c));
    }
    for (GuardOp op : kBinary) {
      for (int dl = 1; dl < d; ++dl) {
        for (int dr = 1; dr < d; ++dr) {
          if (dl != d - 1 && dr != d - 1) continue;
          for (const auto& l : by_depth[dl]) {
            for (const auto& r : by_depth[dr]) by_depth[d].push_back(make_binary(op, l, r));
          }
        }
      }
    }
  }
}

struct Checker {
  OracleReport report;

  void check(const OracleExpr& e, const std::vector<std::map<std::string, long long>>& envs) {
    ++report.trees;
    const std::string text = render_minimal(e);
    const GuardAst parsed = parse_guard_expr(text);
    if (!(parsed == to_guard_ast(e))) {
      fail("parse of '" + text + "' gave " + to_string(parsed));
      return;
    }
    for (const auto& env : envs) {
      ++report.evaluations;
      std::map<std::string, BigInt, std::less<>> vars;
      for (const auto& [k, v] : env) vars.emplace(k, BigInt(v));
      const GuardEnv genv{BigInt(0), BigInt(0), &vars};
      const auto expected = oracle_eval(e, env);
      std::optional<BigInt> got;
      bool truth = false;
      try {
        got = evaluate(parsed, genv);
        truth = eval_guard(parsed, genv, std::nullopt);
      } catch (const GuardEvalError& err) {
        if (err.kind() != GuardEvalError::Kind::DivisionByZero) {
          fail("'" + text + "' threw " + err.what());
          continue;
        }
      }
      const bool same = expected ? (got && *got == BigInt(to_text(*expected)) && truth == (*expected != 0))
                                 : !got;
      if (!same) {
        std::ostringstream msg;
        msg << "'" << text << "' with";
        for (const auto& [k, v] : env) msg << ' ' << k << '=' << v;
        msg << ": oracle " << (expected ? to_text(*expected) : "div0") << ", library "
            << (got ? got->str() : "div0");
        fail(msg.str());
      }
    }
  }

  void fail(const std::string& what) {
    if (report.mismatches++ == 0) report.first_mismatch = what;
  }
};

}  // namespace

int OracleExpr::depth() const {
  int d = 0;
  for (const auto& k : kids) d = std::max(d, k.depth());
  return d + 1;
}

std::string render_minimal(const OracleExpr& e) {
  switch (e.kind) {
    case OracleExpr::Kind::Lit: return std::to_string(e.lit);
    case OracleExpr::Kind::Var: return e.var;
    case OracleExpr::Kind::Unary: {
      std::string child = render_minimal(e.kids[0]);
      // Wrap binaries, and keep `- -x` from lexing as a decrement.
      if (precedence(e.kids[0]) < 7 || (e.op == GuardOp::Neg && child.front() == '-')) {
        child = "(" + child + ")";
      }
      return symbol(e.op) + child;
    }
    case OracleExpr::Kind::Binary: break;
  }
  const int p = precedence(e);
  std::string l = render_minimal(e.kids[0]);
  std::string r = render_minimal(e.kids[1]);
  if (precedence(e.kids[0]) < p) l = "(" + l + ")";
  if (precedence(e.kids[1]) <= p) r = "(" + r + ")";
  return l + " " + symbol(e.op) + " " + r;
}

GuardAst to_guard_ast(const OracleExpr& e) {
  switch (e.kind) {
    case OracleExpr::Kind::Lit: return GuardAst::int_lit(BigInt(e.lit));
    case OracleExpr::Kind::Var: return GuardAst::var(e.var);
    case OracleExpr::Kind::Unary: return GuardAst::unary(e.op, to_guard_ast(e.kids[0]));
    case OracleExpr::Kind::Binary: break;
  }
  return GuardAst::binary(e.op, to_guard_ast(e.kids[0]), to_guard_ast(e.kids[1]));
}

std::optional<__int128> oracle_eval(const OracleExpr& e, const std::map<std::string, long long>& env) {
  switch (e.kind) {
    case OracleExpr::Kind::Lit: return e.lit;
    case OracleExpr::Kind::Var: return env.at(e.var);
    case OracleExpr::Kind::Unary: {
      auto v = oracle_eval(e.kids[0], env);
      if (!v) return std::nullopt;
      return e.op == GuardOp::Not ? __int128(*v == 0) : -*v;
    }
    case OracleExpr::Kind::Binary: break;
  }
  auto l = oracle_eval(e.kids[0], env);
  if (!l) return std::nullopt;
  if (e.op == GuardOp::And && *l == 0) return 0;
  if (e.op == GuardOp::Or && *l != 0) return 1;
  auto r = oracle_eval(e.kids[1], env);
  if (!r) return std::nullopt;
  switch (e.op) {
    case GuardOp::Add: return *l + *r;
    case GuardOp::Sub: return *l - *r;
    case GuardOp::Mul: return *l * *r;
    case GuardOp::Div:
      if (*r == 0) return std::nullopt;
      return *l / *r;
    case GuardOp::Mod:
      if (*r == 0) return std::nullopt;
      return *l % *r;
    case GuardOp::Lt: return __int128(*l < *r);
    case GuardOp::Le: return __int128(*l <= *r);
    case GuardOp::Gt: return __int128(*l > *r);
    case GuardOp::Ge: return __int128(*l >= *r);
    case GuardOp::Eq: return __int128(*l == *r);
    case GuardOp::Ne: return __int128(*l != *r);
    case GuardOp::And:
    case GuardOp::Or: return __int128(*r != 0);
    default: return std::nullopt;
  }
}

void enumerate_trees(int max_depth, const std::vector<OracleExpr>& leaves,
                     const std::function<void(const OracleExpr&)>& visit) {
  // Materialize up to max_depth - 1 and stream the last level.
  std::vector<std::vector<OracleExpr>> by_depth;
  collect(std::max(1, max_depth - 1), leaves, by_depth);
  for (const auto& level : by_depth) {
    for (const auto& e : level) visit(e);
  }
  if (max_depth < 2) return;
  const int d = max_depth;
  for (GuardOp op : kUnary) {
    for (const auto& c : by_depth[d - 1]) visit(make_unary(op, c));
  }
  for (GuardOp op : kBinary) {
    for (int dl = 1; dl < d; ++dl) {
      for (int dr = 1; dr < d; ++dr) {
        if (dl != d - 1 && dr != d - 1) continue;
        for (const auto& l : by_depth[dl]) {
          for (const auto& r : by_depth[dr]) visit(make_binary(op, l, r));
        }
      }
    }
  }
}

OracleExpr random_tree(std::mt19937_64& rng, int depth, const std::vector<std::string>& vars) {
  if (depth <= 1) {
    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
      return leaf_lit(std::uniform_int_distribution<long long>(0, 10)(rng));
    }
    return leaf_var(vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)]);
  }
  if (std::uniform_int_distribution<int>(0, 7)(rng) == 0) {
    return make_unary(kUnary[std::uniform_int_distribution<int>(0, 1)(rng)], random_tree(rng, depth - 1, vars));
  }
  const GuardOp op = kBinary[std::uniform_int_distribution<int>(0, 12)(rng)];
  // One side carries the full depth so the tree depth is exact.
  const int other = std::uniform_int_distribution<int>(1, depth - 1)(rng);
  if (std::uniform_int_distribution<int>(0, 1)(rng)) {
    return make_binary(op, random_tree(rng, depth - 1, vars), random_tree(rng, other, vars));
  }
  return make_binary(op, random_tree(rng, other, vars), random_tree(rng, depth - 1, vars));
}

OracleReport exhaustive_guard_check(int max_depth) {
  std::vector<std::map<std::string, long long>> envs;
  for (long long x = -2; x <= 2; ++x) {
    for (long long y = -2; y <= 2; ++y) envs.push_back({{"x", x}, {"y", y}});
  }
  Checker checker;
  enumerate_trees(max_depth, {leaf_var("x"), leaf_var("y"), leaf_lit(1)},
                  [&](const OracleExpr& e) { checker.check(e, envs); });
  return checker.report;
}

OracleReport random_guard_check(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> vars = {"x", "y", "z"};
  std::uniform_int_distribution<long long> value(-10, 10);
  Checker checker;
  for (std::size_t i = 0; i < cases; ++i) {
    const int depth = std::uniform_int_distribution<int>(4, 6)(rng);
    const OracleExpr e = random_tree(rng, depth, vars);
    std::vector<std::map<std::string, long long>> envs;
    for (int k = 0; k < 4; ++k) envs.push_back({{"x", value(rng)}, {"y", value(rng)}, {"z", value(rng)}});
    checker.check(e, envs);
  }
  return checker.report;
}

}  // namespace fsmforge::testing
