#include "fragment_scan.hpp"

#include <algorithm>

namespace fsmforge::detail {

std::string blank_comments_and_strings(std::string_view text) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    const char c = out[i];
    if (c == '/' && i + 1 < out.size() && out[i + 1] == '/') {
      while (i < out.size() && out[i] != '\n') out[i++] = ' ';
    } else if (c == '/' && i + 1 < out.size() && out[i + 1] == '*') {
      auto close = text.find("*/", i + 2);
      const std::size_t end = close == std::string_view::npos ? out.size() : close + 2;
      for (; i < end; ++i) {
        if (out[i] != '\n') out[i] = ' ';
      }
    } else if (c == '"' || c == '\'') {
      ++i;
      while (i < out.size() && out[i] != c && out[i] != '\n') {
        if (out[i] == '\\' && i + 1 < out.size() && out[i + 1] != '\n') out[i++] = ' ';
        out[i++] = ' ';
      }
      if (i < out.size() && out[i] == c) ++i;
    } else {
      ++i;
    }
  }
  return out;
}

std::size_t find_fragment_end(std::string_view text, std::size_t start) {
  const std::string plain = blank_comments_and_strings(text.substr(start));
  int depth = 0;
  for (std::size_t i = 0; i < plain.size(); ++i) {
    if (plain[i] == '{') {
      ++depth;
    } else if (plain[i] == '}') {
      if (depth == 0) return start + i;
      --depth;
    }
  }
  return std::string_view::npos;
}

std::string_view trim(std::string_view text) {
  const char* ws = " \t\r\n\f\v";
  auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

std::optional<std::string> check_fragment_kind(const Fragment& fragment) {
  const std::string plain = blank_comments_and_strings(fragment.text);
  const std::string_view body = trim(plain);
  if (trim(fragment.text).empty()) return std::string("empty fragment");
  if (fragment.kind == FragmentKind::Expr) {
    int depth = 0;
    for (char c : plain) {
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') --depth;
      if (c == ';' && depth <= 0) return std::string("guard expression contains ';'");
    }
    if (body.empty()) return std::string("guard expression is only a comment");
    return std::nullopt;
  }
  if (body.empty() || (body.back() != ';' && body.back() != '}')) {
    return std::string("statement must end with ';' or '}'");
  }
  return std::nullopt;
}

std::vector<std::string> fragment_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (true) {
    auto nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  std::size_t common = std::string::npos;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto first = lines[i].find_first_not_of(" \t");
    if (first != std::string::npos) common = std::min(common, first);
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto first = lines[i].find_first_not_of(" \t");
    if (first == std::string::npos) {
      lines[i].clear();
    } else {
      lines[i].erase(0, common);
    }
    while (!lines[i].empty() && (lines[i].back() == ' ' || lines[i].back() == '\t')) lines[i].pop_back();
  }
  return lines;
}

}  // namespace fsmforge::detail
