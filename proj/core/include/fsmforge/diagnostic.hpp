#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fsmforge {

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

/// Stable diagnostic codes. The string form (E_* / W_*) is part of the CLI
/// output and must not change.
enum class DiagCode {
  // frontend
  Syntax,
  DupDecl,
  BadUnit,
  JsonShape,
  Unbalanced,
  BadToken,
  // validate
  NoInitial,
  UnknownState,
  DupName,
  BadTag,
  TagNeedsPlugin,
  TimedNeedsPlugin,
  TimedIo,
  Reserved,
  UndeclaredIdent,
};

std::string_view to_string(DiagCode code);
std::optional<DiagCode> diag_code_from_string(std::string_view text);
Severity default_severity(DiagCode code);

/// Every code in declaration order.
const std::vector<DiagCode>& all_diag_codes();

struct Diagnostic {
  DiagCode code = DiagCode::Syntax;
  Severity severity = Severity::Error;
  std::string path;  // model path, e.g. "transitions[3].guards[0]"; may be empty for parse errors
  std::optional<SourceSpan> span;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Diagnostic make_diag(DiagCode code, std::string path, std::string message,
                     std::optional<SourceSpan> span = std::nullopt);

bool has_errors(const std::vector<Diagnostic>& diags);

/// `<severity> <code> at <file>:<line>:<col> (<path>): <message>`
/// Unknown locations render as `<file>:0:0`.
std::string render(const Diagnostic& diag, std::string_view file_fallback, bool color = false);

/// Either a value or a nonempty list of diagnostics, never both.
template <typename T>
class Result {
 public:
  Result(T value) : data_(std::move(value)) {}
  Result(std::vector<Diagnostic> diags) : data_(std::move(diags)) {
    if (std::get<1>(data_).empty()) throw std::logic_error("Result: empty diagnostic list");
  }
  Result(Diagnostic diag) : data_(std::vector<Diagnostic>{std::move(diag)}) {}

  bool ok() const noexcept { return data_.index() == 0; }
  explicit operator bool() const noexcept { return ok(); }

  T& value() & { return std::get<0>(data_); }
  const T& value() const& { return std::get<0>(data_); }
  T&& value() && { return std::get<0>(std::move(data_)); }

  const std::vector<Diagnostic>& diagnostics() const { return std::get<1>(data_); }

 private:
  std::variant<T, std::vector<Diagnostic>> data_;
};

}  // namespace fsmforge
