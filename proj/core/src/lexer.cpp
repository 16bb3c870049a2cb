#include "fsmforge/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace fsmforge {

namespace {

// Longest first so that a prefix scan picks the maximal munch.
constexpr std::string_view kOperators[] = {
    ">>>=", ">>>", "<<=", ">>=", "**", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
    "-=",   "*=",  "/=",  "%=",  "|=", "&=", "^=", "<<", ">>", "=>", "->", ":=", "+",  "-",
    "*",    "/",   "%",   "<",   ">",  "=",  "!",  "~",  "&",  "|",  "^",  "?",  ":",  "."};

bool ident_head(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' || c == '$';
}
bool ident_tail(char c) { return ident_head(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool hex_digit(char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }
bool space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

class Lexer {
 public:
  Lexer(std::string_view text, const LexOptions& options) : text_(text), options_(options) {
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Result<std::vector<Token>> run() {
    std::vector<Token> tokens;
    std::vector<Token> open;  // unmatched opening delimiters
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      auto token = next();
      if (!token.ok()) return token.diagnostics();
      Token tok = std::move(token.value());
      if (options_.check_balance && tok.kind == TokenKind::Delimiter) {
        const char c = tok.text[0];
        if (c == '(' || c == '[' || c == '{') {
          open.push_back(tok);
        } else if (c == ')' || c == ']' || c == '}') {
          const char want = c == ')' ? '(' : c == ']' ? '[' : '{';
          if (open.empty() || open.back().text[0] != want) {
            return make_diag(DiagCode::Unbalanced, "",
                             "unmatched '" + tok.text + "'", tok.span);
          }
          open.pop_back();
        }
      }
      tokens.push_back(std::move(tok));
    }
    if (options_.check_balance && !open.empty()) {
      return make_diag(DiagCode::Unbalanced, "", "unclosed '" + open.back().text + "'",
                       open.back().span);
    }
    return tokens;
  }

 private:
  SourceSpan span_at(std::size_t start, std::size_t end) const {
    SourceSpan span = options_.origin;
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), start);
    const int line = static_cast<int>(it - line_starts_.begin()) - 1;
    const std::size_t line_start = line_starts_[line];
    const int col = static_cast<int>(start - line_start);
    span.line = options_.origin.line + line;
    span.column = line == 0 ? options_.origin.column + col : col + 1;
    span.length = static_cast<int>(end - start);
    return span;
  }

  Token make(TokenKind kind, std::size_t start, std::size_t end, std::string text) const {
    return Token{kind, std::move(text), span_at(start, end)};
  }

  Diagnostic bad(std::size_t start, std::size_t end, std::string message) const {
    return make_diag(DiagCode::BadToken, "", std::move(message), span_at(start, end));
  }

  void skip_space() {
    while (pos_ < text_.size() && space(text_[pos_])) ++pos_;
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  Result<Token> next() {
    const std::size_t start = pos_;
    const char c = text_[pos_];

    if (c == '/' && peek(1) == '/') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      std::size_t end = pos_;
      while (end > start && (text_[end - 1] == '\r' || text_[end - 1] == ' ' || text_[end - 1] == '\t')) --end;
      return make(TokenKind::Comment, start, end, std::string(text_.substr(start, end - start)));
    }
    if (c == '/' && peek(1) == '*') {
      auto close = text_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) {
        pos_ = text_.size();
        return bad(start, start + 2, "unterminated block comment");
      }
      pos_ = close + 2;
      return make(TokenKind::Comment, start, pos_, std::string(text_.substr(start, pos_ - start)));
    }
    if (ident_head(c)) {
      while (pos_ < text_.size() && ident_tail(text_[pos_])) ++pos_;
      return make(TokenKind::Identifier, start, pos_, std::string(text_.substr(start, pos_ - start)));
    }
    if (digit(c) || (c == '.' && digit(peek(1)))) return number();
    if (c == '"' || c == '\'') return string_literal();

    switch (c) {
      case '(': case ')': case '[': case ']': case '{': case '}': case ';': case ',':
        ++pos_;
        return make(TokenKind::Delimiter, start, pos_, std::string(1, c));
      default:
        break;
    }
    for (std::string_view op : kOperators) {
      if (text_.substr(pos_, op.size()) == op) {
        pos_ += op.size();
        return make(TokenKind::Operator, start, pos_, std::string(op));
      }
    }
    ++pos_;
    return bad(start, pos_, "unexpected character");
  }

  Result<Token> number() {
    const std::size_t start = pos_;
    if (text_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      pos_ += 2;
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && (hex_digit(text_[pos_]) || text_[pos_] == '_')) ++pos_;
      if (pos_ == digits) return bad(start, pos_, "malformed hex literal");
    } else {
      while (pos_ < text_.size() && (digit(text_[pos_]) || text_[pos_] == '_')) ++pos_;
      if (peek() == '.' && digit(peek(1))) {
        ++pos_;
        while (pos_ < text_.size() && (digit(text_[pos_]) || text_[pos_] == '_')) ++pos_;
      }
      if ((peek() == 'e' || peek() == 'E') &&
          (digit(peek(1)) || (peek(1) == '-' && digit(peek(2))))) {
        pos_ += peek(1) == '-' ? 2 : 1;
        while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
      }
    }
    if (pos_ < text_.size() && ident_tail(text_[pos_])) {
      while (pos_ < text_.size() && ident_tail(text_[pos_])) ++pos_;
      return bad(start, pos_, "malformed number");
    }
    const std::size_t number_end = pos_;
    std::string number(text_.substr(start, number_end - start));

    // A following time unit word belongs to the literal.
    std::size_t look = pos_;
    while (look < text_.size() && space(text_[look])) ++look;
    std::size_t word_end = look;
    while (word_end < text_.size() && ident_tail(text_[word_end])) ++word_end;
    if (word_end > look && ident_head(text_[look])) {
      std::string_view unit = text_.substr(look, word_end - look);
      if (time_unit_seconds(unit)) {
        pos_ = word_end;
        return make(TokenKind::NumberWithUnit, start, pos_, number + " " + std::string(unit));
      }
    }
    return make(TokenKind::Number, start, number_end, std::move(number));
  }

  Result<Token> string_literal() {
    const std::size_t start = pos_;
    const char quote = text_[pos_++];
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (c == '\n') break;
      ++pos_;
      if (c == quote) {
        return make(TokenKind::String, start, pos_, std::string(text_.substr(start, pos_ - start)));
      }
    }
    pos_ = std::min(pos_, text_.size());
    return bad(start, start + 1, "unterminated string literal");
  }

  std::string_view text_;
  LexOptions options_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_{0};
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::NumberWithUnit: return "number-with-unit";
    case TokenKind::String: return "string";
    case TokenKind::Operator: return "operator";
    case TokenKind::Delimiter: return "delimiter";
    case TokenKind::Comment: return "comment";
  }
  return "";
}

std::optional<std::uint64_t> time_unit_seconds(std::string_view unit) {
  if (unit == "seconds") return 1;
  if (unit == "minutes") return 60;
  if (unit == "hours") return 3600;
  if (unit == "days") return 86400;
  if (unit == "weeks") return 604800;
  return std::nullopt;
}

Result<std::vector<Token>> lex_fragment(std::string_view text, const LexOptions& options) {
  return Lexer(text, options).run();
}

Result<std::vector<Token>> lex_fragment(const Fragment& fragment, const LexOptions& options) {
  return lex_fragment(std::string_view(fragment.text), options);
}

std::vector<std::string> free_identifiers(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  const Token* prev = nullptr;
  for (const Token& tok : tokens) {
    if (tok.kind == TokenKind::Comment) continue;
    if (tok.kind == TokenKind::Identifier &&
        !(prev && prev->kind == TokenKind::Operator && prev->text == ".")) {
      out.push_back(tok.text);
    }
    prev = &tok;
  }
  return out;
}

}  // namespace fsmforge
