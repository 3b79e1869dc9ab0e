#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semshift/text.hpp"

namespace semshift {

// The three change poles. Each has a closed answer alphabet; everything a
// model says is eventually mapped into one of these labels or a ParseError.
enum class Pole { Dimension, Relation, Orientation };

inline constexpr std::array<Pole, 3> kAllPoles = {
    Pole::Dimension, Pole::Relation, Pole::Orientation};

inline std::string_view pole_name(Pole p) {
  switch (p) {
    case Pole::Dimension: return "dimension";
    case Pole::Relation: return "relation";
    case Pole::Orientation: return "orientation";
  }
  return "?";
}

inline std::optional<Pole> parse_pole(std::string_view s) {
  std::string f = casefold(trim(s));
  if (f == "dimension") return Pole::Dimension;
  if (f == "relation") return Pole::Relation;
  if (f == "orientation") return Pole::Orientation;
  return std::nullopt;
}

// Alphabet order is load-bearing: confusion matrices and report columns
// index by it.
inline const std::vector<std::string>& label_alphabet(Pole p) {
  static const std::vector<std::string> dim = {"identical", "different"};
  static const std::vector<std::string> rel = {"metaphor", "metonymy",
                                               "unrelated"};
  static const std::vector<std::string> ori = {"positive", "negative",
                                               "neutral"};
  switch (p) {
    case Pole::Dimension: return dim;
    case Pole::Relation: return rel;
    case Pole::Orientation: return ori;
  }
  return dim;
}

inline bool in_alphabet(Pole p, std::string_view label) {
  for (const auto& l : label_alphabet(p))
    if (l == label) return true;
  return false;
}

// "'identical' or 'different'" / "'metaphor', 'metonymy', or 'unrelated'"
inline std::string quoted_label_list(Pole p) {
  const auto& a = label_alphabet(p);
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) out += a.size() > 2 ? ", " : " ";
    if (i + 1 == a.size()) out += "or ";
    out += "'" + a[i] + "'";
  }
  return out;
}

// Majority judgments with no strict winner are reported under this name.
inline constexpr std::string_view kUndecided = "undecided";

}  // namespace semshift
