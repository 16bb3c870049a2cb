#include "fsmforge/diagnostic.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace fsmforge {

namespace {

struct CodeInfo {
  DiagCode code;
  std::string_view name;
  Severity severity;
};

constexpr std::array kCodes = {
    CodeInfo{DiagCode::Syntax, "E_SYNTAX", Severity::Error},
    CodeInfo{DiagCode::DupDecl, "E_DUP_DECL", Severity::Error},
    CodeInfo{DiagCode::BadUnit, "E_BAD_UNIT", Severity::Error},
    CodeInfo{DiagCode::JsonShape, "E_JSON_SHAPE", Severity::Error},
    CodeInfo{DiagCode::Unbalanced, "E_UNBALANCED", Severity::Error},
    CodeInfo{DiagCode::BadToken, "E_BAD_TOKEN", Severity::Error},
    CodeInfo{DiagCode::NoInitial, "E_NO_INITIAL", Severity::Error},
    CodeInfo{DiagCode::UnknownState, "E_UNKNOWN_STATE", Severity::Error},
    CodeInfo{DiagCode::DupName, "E_DUP_NAME", Severity::Error},
    CodeInfo{DiagCode::BadTag, "E_BAD_TAG", Severity::Error},
    CodeInfo{DiagCode::TagNeedsPlugin, "E_TAG_NEEDS_PLUGIN", Severity::Error},
    CodeInfo{DiagCode::TimedNeedsPlugin, "E_TIMED_NEEDS_PLUGIN", Severity::Error},
    CodeInfo{DiagCode::TimedIo, "E_TIMED_IO", Severity::Error},
    CodeInfo{DiagCode::Reserved, "E_RESERVED", Severity::Error},
    CodeInfo{DiagCode::UndeclaredIdent, "W_UNDECLARED_IDENT", Severity::Warning},
};

const CodeInfo& info(DiagCode code) {
  return *std::find_if(kCodes.begin(), kCodes.end(),
                       [code](const CodeInfo& c) { return c.code == code; });
}

}  // namespace

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::string_view to_string(DiagCode code) { return info(code).name; }

std::optional<DiagCode> diag_code_from_string(std::string_view text) {
  for (const auto& c : kCodes) {
    if (c.name == text) return c.code;
  }
  return std::nullopt;
}

Severity default_severity(DiagCode code) { return info(code).severity; }

const std::vector<DiagCode>& all_diag_codes() {
  static const std::vector<DiagCode> codes = [] {
    std::vector<DiagCode> out;
    for (const auto& c : kCodes) out.push_back(c.code);
    return out;
  }();
  return codes;
}

Diagnostic make_diag(DiagCode code, std::string path, std::string message,
                     std::optional<SourceSpan> span) {
  return Diagnostic{code, default_severity(code), std::move(path), std::move(span),
                    std::move(message)};
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string render(const Diagnostic& diag, std::string_view file_fallback, bool color) {
  std::ostringstream out;
  if (color) out << (diag.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m");
  out << to_string(diag.severity);
  if (color) out << "\x1b[0m";
  out << ' ' << to_string(diag.code) << " at ";
  if (diag.span) {
    out << (diag.span->file.empty() ? file_fallback : std::string_view(diag.span->file)) << ':'
        << diag.span->line << ':' << diag.span->column;
  } else {
    out << file_fallback << ":0:0";
  }
  out << " (" << diag.path << "): " << diag.message;
  return out.str();
}

}  // namespace fsmforge
