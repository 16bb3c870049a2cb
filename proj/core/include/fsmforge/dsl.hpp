#pragma once

#include <string>
#include <string_view>

#include "fsmforge/diagnostic.hpp"
#include "fsmforge/model.hpp"

namespace fsmforge {

/// Parses the contract DSL. On success the model is canonicalized and its
/// SourceMap holds the location of every named node and fragment.
Result<ContractModel> parse_dsl(std::string_view text, std::string_view file_name = "<input>");

/// Deterministic DSL rendering; parse_dsl(emit_dsl(m)) equals m.
std::string emit_dsl(const ContractModel& model);

}  // namespace fsmforge
