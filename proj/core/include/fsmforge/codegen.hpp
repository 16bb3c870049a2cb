#pragma once

#include <string>
#include <vector>

#include "fsmforge/diagnostic.hpp"
#include "fsmforge/lexer.hpp"
#include "fsmforge/plugins.hpp"

namespace fsmforge {

/// Generated Solidity: LF newlines, four-space indent, one trailing newline.
struct SourceText {
  std::string text;
};

SourceText generate(const WovenContract& woven);

/// Whitespace-insensitive token stream for comparing listings. Comments are
/// kept as tokens with their inner whitespace normalized, so `// Transition x`
/// and `//Transition x` compare equal.
Result<std::vector<Token>> tokenize_solidity(std::string_view text);

/// First index where the token texts differ, or nullopt when equal.
std::optional<std::size_t> first_token_mismatch(const std::vector<Token>& a,
                                                const std::vector<Token>& b);

/// Offset of `needle` as a contiguous run inside `haystack` (texts only).
std::optional<std::size_t> find_token_run(const std::vector<Token>& haystack,
                                          const std::vector<Token>& needle);

}  // namespace fsmforge
