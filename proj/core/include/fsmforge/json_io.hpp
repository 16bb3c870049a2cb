#pragma once

#include <string>
#include <string_view>

#include "fsmforge/diagnostic.hpp"
#include "fsmforge/model.hpp"

namespace fsmforge {

/// Canonical JSON interchange form. Unknown or missing fields are E_JSON_SHAPE.
Result<ContractModel> parse_json(std::string_view text, std::string_view file_name = "<input>");

/// Pretty-printed with two-space indentation and a trailing newline.
std::string emit_json(const ContractModel& model);

}  // namespace fsmforge
