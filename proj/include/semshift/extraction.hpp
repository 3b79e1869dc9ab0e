#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semshift/labels.hpp"
#include "semshift/text.hpp"

namespace semshift {

enum class ExtractionMode { Strict, Lenient };

inline std::string_view extraction_mode_name(ExtractionMode m) {
  return m == ExtractionMode::Strict ? "strict" : "lenient";
}

inline std::optional<ExtractionMode> parse_extraction_mode(
    std::string_view s) {
  std::string f = casefold(trim(s));
  if (f == "strict") return ExtractionMode::Strict;
  if (f == "lenient") return ExtractionMode::Lenient;
  return std::nullopt;
}

enum class ParseErrorKind {
  MissingAnswer,               // no answer cue / no label anywhere
  UnknownLabel,                // cue present but following text has no label
  MultipleConflictingLabels,   // strict mode saw more than one distinct label
};

inline std::string_view parse_error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::MissingAnswer: return "MissingAnswer";
    case ParseErrorKind::UnknownLabel: return "UnknownLabel";
    case ParseErrorKind::MultipleConflictingLabels:
      return "MultipleConflictingLabels";
  }
  return "?";
}

inline std::optional<ParseErrorKind> parse_error_kind_from(
    std::string_view s) {
  if (s == "MissingAnswer") return ParseErrorKind::MissingAnswer;
  if (s == "UnknownLabel") return ParseErrorKind::UnknownLabel;
  if (s == "MultipleConflictingLabels")
    return ParseErrorKind::MultipleConflictingLabels;
  return std::nullopt;
}

struct ParseError {
  ParseErrorKind kind;
  std::string context;  // offending excerpt of the raw response

  bool operator==(const ParseError& o) const {
    return kind == o.kind && context == o.context;
  }
};

// Either a canonical lowercase label from the pole's alphabet, or an error.
using ExtractOutcome = std::variant<std::string, ParseError>;

// Single answer token -> canonical label. Trims, peels decoration from both
// ends, case-folds, then checks alphabet membership.
inline std::optional<std::string> normalize_label(std::string_view token,
                                                  Pole pole) {
  std::string t = casefold(strip_decoration(trim(token)));
  if (in_alphabet(pole, t)) return t;
  return std::nullopt;
}

namespace detail {

// End offsets of every answer cue in folded text: "a:" at a word boundary,
// and the phrase "final answer". Offsets are valid in the unfolded original
// too (ASCII folding preserves length).
inline std::vector<std::size_t> find_answer_cues(std::string_view folded) {
  std::vector<std::size_t> ends;
  for (std::size_t i = 0; i + 1 < folded.size(); ++i) {
    if (folded[i] == 'a' && folded[i + 1] == ':' &&
        (i == 0 || !is_alnum(folded[i - 1]))) {
      ends.push_back(i + 2);
    }
  }
  static constexpr std::string_view phrase = "final answer";
  for (std::size_t pos = folded.find(phrase); pos != std::string_view::npos;
       pos = folded.find(phrase, pos + 1)) {
    ends.push_back(pos + phrase.size());
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  return ends;
}

// Count of "a:" cues only; two or more means the response carries duplicate
// answer lines, which is flagged as an anomaly.
inline std::size_t count_answer_lines(std::string_view folded) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < folded.size(); ++i) {
    if (folded[i] == 'a' && folded[i + 1] == ':' &&
        (i == 0 || !is_alnum(folded[i - 1]))) {
      ++n;
    }
  }
  return n;
}

// Alphabet labels among the whitespace tokens of a region, in order.
inline std::vector<std::string> labels_in(std::string_view region,
                                          Pole pole) {
  std::vector<std::string> found;
  for (auto tok : whitespace_tokens(region)) {
    if (auto l = normalize_label(tok, pole)) found.push_back(*l);
  }
  return found;
}

inline std::string excerpt(std::string_view s, std::size_t limit = 80) {
  s = trim(s);
  if (s.size() <= limit) return std::string(s);
  return std::string(s.substr(0, limit)) + "...";
}

inline std::string tail_excerpt(std::string_view s, std::size_t limit = 80) {
  s = trim(s);
  if (s.size() <= limit) return std::string(s);
  return "..." + std::string(s.substr(s.size() - limit));
}

}  // namespace detail

// Pull the final label out of a raw model response.
//
// Strict: an answer cue is required; only the text after the FIRST cue
// counts; exactly one distinct label may appear there.
// Lenient: the strict reading is tried first, so the modes can never
// disagree on an input strict accepts. Failing that, text after the LAST
// cue (last label wins), then the whole response.
inline ExtractOutcome extract_answer(std::string_view raw, Pole pole,
                                     ExtractionMode mode) {
  std::string folded = casefold(raw);
  auto cues = detail::find_answer_cues(folded);

  auto strict = [&]() -> ExtractOutcome {
    if (cues.empty()) {
      return ParseError{ParseErrorKind::MissingAnswer,
                        detail::tail_excerpt(raw)};
    }
    std::string_view region = std::string_view(raw).substr(cues.front());
    auto found = detail::labels_in(region, pole);
    if (found.empty()) {
      if (trim(region).empty()) {
        return ParseError{ParseErrorKind::MissingAnswer,
                          "empty text after answer cue"};
      }
      return ParseError{ParseErrorKind::UnknownLabel,
                        detail::excerpt(region)};
    }
    for (const auto& l : found) {
      if (l != found.front()) {
        return ParseError{ParseErrorKind::MultipleConflictingLabels,
                          detail::excerpt(region)};
      }
    }
    return found.front();
  };

  if (mode == ExtractionMode::Strict) return strict();

  {
    auto s = strict();
    if (auto* label = std::get_if<std::string>(&s)) return *label;
  }
  if (!cues.empty()) {
    std::string_view region = std::string_view(raw).substr(cues.back());
    auto found = detail::labels_in(region, pole);
    if (!found.empty()) return found.back();
  }
  auto found = detail::labels_in(raw, pole);
  if (!found.empty()) return found.back();
  return ParseError{ParseErrorKind::MissingAnswer, detail::tail_excerpt(raw)};
}

struct StepSplit {
  std::vector<std::string> steps;
  bool structured = false;  // false: no delimiter of any kind was found
};

// Split a rationale into reasoning steps. Dash separator lines win; failing
// that, "Step N." / "Step N:" headings; failing that, the whole text is one
// step and the response is flagged unstructured.
inline StepSplit parse_steps(std::string_view raw) {
  StepSplit out;

  // Pass 1: "---" separator lines.
  {
    std::vector<std::pair<std::size_t, std::size_t>> segs;  // [begin, end)
    std::size_t seg_start = 0;
    std::size_t pos = 0;
    bool any_sep = false;
    auto lines = split_lines(raw);
    for (auto line : lines) {
      std::size_t line_begin = pos;
      pos += line.size() + 1;  // +1 for the '\n' (harmless on last line)
      if (is_separator_line(line)) {
        any_sep = true;
        segs.emplace_back(seg_start, line_begin);
        seg_start = std::min(pos, raw.size());
      }
    }
    segs.emplace_back(seg_start, raw.size());
    if (any_sep) {
      for (auto [b, e] : segs) {
        auto t = trim(raw.substr(b, e - b));
        if (!t.empty()) out.steps.emplace_back(t);
      }
      out.structured = true;
      return out;
    }
  }

  // Pass 2: numbered step headings.
  {
    std::string folded = casefold(raw);
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i + 4 < folded.size(); ++i) {
      if (folded.compare(i, 4, "step") != 0) continue;
      if (i > 0 && is_alnum(folded[i - 1])) continue;
      std::size_t j = i + 4;
      while (j < folded.size() && (folded[j] == ' ' || folded[j] == '\t')) ++j;
      std::size_t digits = j;
      while (j < folded.size() && folded[j] >= '0' && folded[j] <= '9') ++j;
      if (j == digits) continue;
      while (j < folded.size() && (folded[j] == ' ' || folded[j] == '\t')) ++j;
      if (j < folded.size() && (folded[j] == '.' || folded[j] == ':')) {
        starts.push_back(i);
      }
    }
    if (!starts.empty()) {
      auto prologue = trim(raw.substr(0, starts.front()));
      if (!prologue.empty()) out.steps.emplace_back(prologue);
      for (std::size_t k = 0; k < starts.size(); ++k) {
        std::size_t b = starts[k];
        std::size_t e = (k + 1 < starts.size()) ? starts[k + 1] : raw.size();
        auto t = trim(raw.substr(b, e - b));
        if (!t.empty()) out.steps.emplace_back(t);
      }
      out.structured = true;
      return out;
    }
  }

  auto whole = trim(raw);
  out.steps.emplace_back(whole);
  out.structured = false;
  return out;
}

struct ParsedResponse {
  std::vector<std::string> steps;
  std::optional<std::string> final_label;
  std::optional<ParseError> error;
  std::vector<std::string> anomalies;  // "missing-step", "duplicate-answer-line"
};

inline ParsedResponse parse_response(std::string_view raw, Pole pole,
                                     ExtractionMode mode) {
  ParsedResponse out;
  auto split = parse_steps(raw);
  out.steps = std::move(split.steps);
  if (!split.structured) out.anomalies.emplace_back("missing-step");
  if (detail::count_answer_lines(casefold(raw)) >= 2) {
    out.anomalies.emplace_back("duplicate-answer-line");
  }
  auto res = extract_answer(raw, pole, mode);
  if (std::holds_alternative<std::string>(res)) {
    out.final_label = std::get<std::string>(res);
  } else {
    out.error = std::get<ParseError>(res);
  }
  return out;
}

}  // namespace semshift
