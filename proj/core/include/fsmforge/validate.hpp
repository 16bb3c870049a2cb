#pragma once

#include <set>
#include <string>
#include <vector>

#include "fsmforge/diagnostic.hpp"
#include "fsmforge/model.hpp"

namespace fsmforge {

/// Names the generator emits for this model's enabled plugins, plus the
/// always-emitted `state`, `States`, `creationTime` and the contract name.
std::set<std::string, std::less<>> reserved_names(const ContractModel& model);

/// Semantic checks. Returns diagnostics in model declaration order, sorted by
/// code within a node. An empty list means the model is ready for generation.
std::vector<Diagnostic> validate(const ContractModel& model);

}  // namespace fsmforge
