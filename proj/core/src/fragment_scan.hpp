#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fsmforge/model.hpp"

namespace fsmforge::detail {

/// Copy of `text` with comment bodies and string literal contents blanked
/// out, so that structural characters can be searched for directly.
std::string blank_comments_and_strings(std::string_view text);

/// Index of the `}` closing a fragment whose `{` sits just before `start`,
/// honoring strings and comments. npos when unterminated.
std::size_t find_fragment_end(std::string_view text, std::size_t start);

/// Expr: nonempty, no top-level `;`. Stmt: nonempty, ends in `;` or `}`.
/// Returns a message when the fragment does not fit its kind.
std::optional<std::string> check_fragment_kind(const Fragment& fragment);

std::string_view trim(std::string_view text);

/// Splits a fragment into lines. Continuation lines lose their common
/// leading indent so the caller can re-indent the block as a whole.
std::vector<std::string> fragment_lines(std::string_view text);

}  // namespace fsmforge::detail
