#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsmforge/diagnostic.hpp"
#include "fsmforge/model.hpp"

namespace fsmforge {

enum class TokenKind { Identifier, Number, NumberWithUnit, String, Operator, Delimiter, Comment };

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;
  SourceSpan span;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Seconds per unit for seconds, minutes, hours, days, weeks.
std::optional<std::uint64_t> time_unit_seconds(std::string_view unit);

struct LexOptions {
  // Location of the first byte of the text. Columns are shifted on the first
  // line only.
  SourceSpan origin;
  // Checks that () [] {} nest properly.
  bool check_balance = true;
};

/// Tokenizes a Solidity fragment. Never throws on arbitrary input; malformed
/// text yields E_BAD_TOKEN or E_UNBALANCED.
Result<std::vector<Token>> lex_fragment(std::string_view text, const LexOptions& options = {});
Result<std::vector<Token>> lex_fragment(const Fragment& fragment, const LexOptions& options = {});

/// Identifiers not in member position (i.e. not directly after `.`).
std::vector<std::string> free_identifiers(const std::vector<Token>& tokens);

}  // namespace fsmforge
