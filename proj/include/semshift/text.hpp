#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace semshift {

// ASCII-only case folding. Model answers are matched against ASCII label
// alphabets, so full Unicode folding buys nothing here.
inline char fold_char(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string casefold(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = fold_char(c);
  return out;
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Decoration stripped from answer-token candidates: quotes, markdown
// emphasis, brackets, terminal punctuation. Peeled from both ends until
// fixpoint, e.g. "'identical.'" -> identical, "**Different**" -> different.
inline constexpr std::string_view kLabelStripSet = "'\"`*_()[]{}.,;:!?";

inline std::string_view strip_decoration(std::string_view s) {
  auto strippable = [](char c) {
    return kLabelStripSet.find(c) != std::string_view::npos;
  };
  while (!s.empty() && strippable(s.front())) s.remove_prefix(1);
  while (!s.empty() && strippable(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(s.substr(start));
      break;
    }
    lines.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline std::vector<std::string_view> whitespace_tokens(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

// A run of dashes on its own line separates reasoning steps.
inline bool is_separator_line(std::string_view line) {
  line = trim(line);
  if (line.size() < 3) return false;
  for (char c : line)
    if (c != '-') return false;
  return true;
}

inline std::size_t common_prefix_len(std::string_view a, std::string_view b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

}  // namespace semshift
