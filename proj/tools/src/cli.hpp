#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsmforge::cli {

// Exit codes: 0 success, 1 diagnostics or failed expectations, 2 usage errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. `args` excludes the program name. stdout carries
/// artifacts and reports, stderr carries diagnostics.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// Bundled corpus files, as absolute paths.
std::vector<std::string> corpus_paths();

}  // namespace fsmforge::cli
