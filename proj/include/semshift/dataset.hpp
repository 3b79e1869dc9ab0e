#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "semshift/errors.hpp"
#include "semshift/extraction.hpp"
#include "semshift/labels.hpp"
#include "semshift/text.hpp"

namespace semshift {

// One usage pair. Span offsets are byte offsets into the UTF-8 sentence,
// half-open [start, end), selecting the target word form.
struct SentencePairItem {
  std::string id;
  std::string lemma;
  std::string sentence1;
  std::size_t span1_start = 0;
  std::size_t span1_end = 0;
  std::string sentence2;
  std::size_t span2_start = 0;
  std::size_t span2_end = 0;
  Pole pole = Pole::Dimension;
  std::string gold;  // canonical lowercase label

  bool operator==(const SentencePairItem&) const = default;
};

struct GlossRecord {
  std::string gloss1;
  std::string gloss2;
  std::string rationale;
};

struct FewShotExample {
  SentencePairItem item;
  std::string gloss1;
  std::string gloss2;
  std::string rationale;
};

struct Dataset {
  Pole pole = Pole::Dimension;
  std::vector<SentencePairItem> items;
  std::vector<FewShotExample> fewshot_pool;
  std::map<std::string, GlossRecord> glosses;
};

// ---------------------------------------------------------------------------
// Per-record validation

enum class IssueKind {
  MissingField,
  SpanOutOfBounds,
  SpanLemmaMismatch,
  UnknownLabel,
  UnknownPole,
  PoleMismatch,
};

inline std::string_view issue_kind_name(IssueKind k) {
  switch (k) {
    case IssueKind::MissingField: return "MissingField";
    case IssueKind::SpanOutOfBounds: return "SpanOutOfBounds";
    case IssueKind::SpanLemmaMismatch: return "SpanLemmaMismatch";
    case IssueKind::UnknownLabel: return "UnknownLabel";
    case IssueKind::UnknownPole: return "UnknownPole";
    case IssueKind::PoleMismatch: return "PoleMismatch";
  }
  return "?";
}

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

// Raw record as read from file, every field stringified. Validation owns all
// parsing so one bad record can report every problem it has at once.
using RawRecord = std::map<std::string, std::string>;

struct ItemValidation {
  std::optional<SentencePairItem> item;  // set iff issues is empty
  std::vector<ValidationIssue> issues;
};

namespace detail {

inline bool parse_offset(const std::string& s, std::size_t& out) {
  if (s.empty() || s.size() > 18) return false;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  out = v;
  return true;
}

// Shared-stem test between the configured lemma and the span text: exact
// case-folded match, or a common prefix of at least 4 characters. "salty" /
// "salts" passes; "cup" / "cap" does not.
inline bool lemma_matches_span(std::string_view lemma,
                               std::string_view span_text) {
  std::string l = casefold(lemma);
  std::string s = casefold(span_text);
  if (l == s) return true;
  return common_prefix_len(l, s) >= 4;
}

}  // namespace detail

inline ItemValidation validate_item(const RawRecord& record, Pole pole) {
  ItemValidation out;
  auto issue = [&](IssueKind k, std::string msg) {
    out.issues.push_back({k, std::move(msg)});
  };
  auto field = [&](const char* name) -> const std::string* {
    auto it = record.find(name);
    if (it == record.end()) {
      issue(IssueKind::MissingField, std::string("missing field '") + name +
                                         "'");
      return nullptr;
    }
    return &it->second;
  };

  const std::string* id = field("id");
  const std::string* lemma = field("lemma");
  const std::string* s1 = field("sentence1");
  const std::string* s2 = field("sentence2");
  const std::string* sp1s = field("span1_start");
  const std::string* sp1e = field("span1_end");
  const std::string* sp2s = field("span2_start");
  const std::string* sp2e = field("span2_end");
  const std::string* pole_s = field("pole");
  const std::string* gold = field("gold");

  if (id && trim(*id).empty())
    issue(IssueKind::MissingField, "field 'id' is empty");
  if (lemma && trim(*lemma).empty())
    issue(IssueKind::MissingField, "field 'lemma' is empty");
  if (s1 && s1->empty())
    issue(IssueKind::MissingField, "field 'sentence1' is empty");
  if (s2 && s2->empty())
    issue(IssueKind::MissingField, "field 'sentence2' is empty");

  // Spans: parse, bounds-check against their sentence, then stem-check the
  // selected text against the lemma.
  auto check_span = [&](int which, const std::string* sent,
                        const std::string* ss, const std::string* se,
                        std::size_t& b, std::size_t& e) -> bool {
    bool ok = true;
    if (ss && !detail::parse_offset(*ss, b)) {
      issue(IssueKind::SpanOutOfBounds,
            "span" + std::to_string(which) + "_start '" + *ss +
                "' is not a valid offset");
      ok = false;
    }
    if (se && !detail::parse_offset(*se, e)) {
      issue(IssueKind::SpanOutOfBounds,
            "span" + std::to_string(which) + "_end '" + *se +
                "' is not a valid offset");
      ok = false;
    }
    if (!ss || !se || !sent) return false;
    if (!ok) return false;
    if (b >= e || e > sent->size()) {
      issue(IssueKind::SpanOutOfBounds,
            "span" + std::to_string(which) + " [" + std::to_string(b) + "," +
                std::to_string(e) + ") out of bounds for sentence of length " +
                std::to_string(sent->size()));
      return false;
    }
    return true;
  };

  std::size_t b1 = 0, e1 = 0, b2 = 0, e2 = 0;
  bool span1_ok = check_span(1, s1, sp1s, sp1e, b1, e1);
  bool span2_ok = check_span(2, s2, sp2s, sp2e, b2, e2);

  if (lemma && !trim(*lemma).empty()) {
    if (span1_ok &&
        !detail::lemma_matches_span(*lemma, std::string_view(*s1).substr(
                                                b1, e1 - b1))) {
      issue(IssueKind::SpanLemmaMismatch,
            "span1 text '" + s1->substr(b1, e1 - b1) +
                "' does not share a stem with lemma '" + *lemma + "'");
    }
    if (span2_ok &&
        !detail::lemma_matches_span(*lemma, std::string_view(*s2).substr(
                                                b2, e2 - b2))) {
      issue(IssueKind::SpanLemmaMismatch,
            "span2 text '" + s2->substr(b2, e2 - b2) +
                "' does not share a stem with lemma '" + *lemma + "'");
    }
  }

  if (pole_s) {
    auto parsed = parse_pole(*pole_s);
    if (!parsed) {
      issue(IssueKind::UnknownPole, "unknown pole '" + *pole_s + "'");
    } else if (*parsed != pole) {
      issue(IssueKind::PoleMismatch,
            "record pole '" + std::string(pole_name(*parsed)) +
                "' does not match dataset pole '" +
                std::string(pole_name(pole)) + "'");
    }
  }

  std::string canonical_gold;
  if (gold) {
    auto norm = normalize_label(*gold, pole);
    if (!norm) {
      std::string alphabet;
      for (const auto& l : label_alphabet(pole)) {
        if (!alphabet.empty()) alphabet += ", ";
        alphabet += l;
      }
      issue(IssueKind::UnknownLabel, "gold '" + *gold + "' not in {" +
                                         alphabet + "}");
    } else {
      canonical_gold = *norm;
    }
  }

  if (!out.issues.empty()) return out;

  SentencePairItem item;
  item.id = *id;
  item.lemma = *lemma;
  item.sentence1 = *s1;
  item.span1_start = b1;
  item.span1_end = e1;
  item.sentence2 = *s2;
  item.span2_start = b2;
  item.span2_end = e2;
  item.pole = pole;
  item.gold = canonical_gold;
  out.item = std::move(item);
  return out;
}

// ---------------------------------------------------------------------------
// JSONL IO

namespace detail {

inline std::string stringify_json_field(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  return v.dump();
}

inline RawRecord json_to_raw(const nlohmann::json& obj) {
  RawRecord rec;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    rec[it.key()] = stringify_json_field(it.value());
  }
  return rec;
}

inline bool skippable_line(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace detail

// Loads a usage-pair JSONL file. Blank lines and '#' comment lines are
// skipped. Every malformed line is collected; any at all means the load
// fails with the full list.
inline Dataset load_dataset(const std::string& path, Pole pole) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read dataset file: " + path);

  Dataset d;
  d.pole = pole;
  std::vector<SchemaIssue> issues;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable_line(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      issues.push_back({line_no, "invalid record: not a JSON object"});
      continue;
    }
    if (!obj.is_object()) {
      issues.push_back({line_no, "invalid record: not a JSON object"});
      continue;
    }
    auto validation = validate_item(detail::json_to_raw(obj), pole);
    if (!validation.issues.empty()) {
      for (const auto& vi : validation.issues) {
        issues.push_back({line_no, std::string(issue_kind_name(vi.kind)) +
                                       ": " + vi.message});
      }
      continue;
    }
    auto& item = *validation.item;
    if (!seen_ids.insert(item.id).second) {
      issues.push_back({line_no, "duplicate id '" + item.id + "'"});
      continue;
    }
    d.items.push_back(std::move(item));
  }
  if (!issues.empty()) throw SchemaLoadError(path, std::move(issues));
  return d;
}

inline void write_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  out << "#semshift-dataset-v1\n";
  for (const auto& it : d.items) {
    nlohmann::json obj = {
        {"id", it.id},
        {"lemma", it.lemma},
        {"sentence1", it.sentence1},
        {"span1_start", it.span1_start},
        {"span1_end", it.span1_end},
        {"sentence2", it.sentence2},
        {"span2_start", it.span2_start},
        {"span2_end", it.span2_end},
        {"pole", std::string(pole_name(it.pole))},
        {"gold", it.gold},
    };
    out << obj.dump() << "\n";
  }
}

// Sidecar with sense glosses and a worked rationale per item, keyed by id.
inline std::map<std::string, GlossRecord> load_gloss_sidecar(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read sidecar file: " + path);
  std::map<std::string, GlossRecord> out;
  std::vector<SchemaIssue> issues;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable_line(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      issues.push_back({line_no, "invalid record: not a JSON object"});
      continue;
    }
    bool ok = obj.is_object();
    for (const char* f : {"id", "gloss1", "gloss2", "rationale"}) {
      if (ok && (!obj.contains(f) || !obj[f].is_string())) {
        issues.push_back({line_no, std::string("missing field '") + f + "'"});
        ok = false;
      }
    }
    if (!ok) {
      if (!obj.is_object())
        issues.push_back({line_no, "invalid record: not a JSON object"});
      continue;
    }
    std::string id = obj["id"].get<std::string>();
    if (out.count(id)) {
      issues.push_back({line_no, "duplicate id '" + id + "'"});
      continue;
    }
    out[id] = GlossRecord{obj["gloss1"].get<std::string>(),
                          obj["gloss2"].get<std::string>(),
                          obj["rationale"].get<std::string>()};
  }
  if (!issues.empty()) throw SchemaLoadError(path, std::move(issues));
  return out;
}

inline void write_gloss_sidecar(const std::map<std::string, GlossRecord>& m,
                                const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write sidecar file: " + path);
  out << "#semshift-sidecar-v1\n";
  for (const auto& [id, g] : m) {
    nlohmann::json obj = {{"id", id},
                          {"gloss1", g.gloss1},
                          {"gloss2", g.gloss2},
                          {"rationale", g.rationale}};
    out << obj.dump() << "\n";
  }
}

// ---------------------------------------------------------------------------
// Stats and fewshot selection

struct StatsSummary {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_label;  // every alphabet label keyed
};

inline StatsSummary dataset_stats(const Dataset& d) {
  StatsSummary s;
  for (const auto& l : label_alphabet(d.pole)) s.per_label[l] = 0;
  for (const auto& it : d.items) {
    ++s.total;
    ++s.per_label[it.gold];
  }
  return s;
}

// Moves the three identified items out of the eval set and into the fewshot
// pool, attaching glosses and rationales from the sidecar map. Returns a new
// Dataset; the input is not modified. Deterministic: pool order follows the
// ids argument, the remaining items keep file order.
inline Dataset select_fewshot(const Dataset& d,
                              const std::vector<std::string>& ids) {
  if (ids.size() != 3) {
    throw DataError(DataError::Kind::BadArgument,
                    "fewshot selection requires exactly 3 ids, got " +
                        std::to_string(ids.size()));
  }
  std::set<std::string> distinct(ids.begin(), ids.end());
  if (distinct.size() != ids.size()) {
    throw DataError(DataError::Kind::DuplicateId,
                    "fewshot ids must be 3 distinct ids");
  }

  Dataset out;
  out.pole = d.pole;
  out.glosses = d.glosses;

  for (const auto& id : ids) {
    const SentencePairItem* found = nullptr;
    for (const auto& it : d.items) {
      if (it.id == id) {
        found = &it;
        break;
      }
    }
    if (!found) {
      throw DataError(DataError::Kind::IdNotFound,
                      "fewshot id '" + id + "' not present in dataset");
    }
    auto git = d.glosses.find(id);
    if (git == d.glosses.end()) {
      throw DataError(DataError::Kind::MissingGloss,
                      "no sidecar gloss record for fewshot id '" + id + "'");
    }
    const GlossRecord& g = git->second;
    if (trim(g.gloss1).empty() || trim(g.gloss2).empty()) {
      throw DataError(DataError::Kind::MissingGloss,
                      "empty gloss for fewshot id '" + id + "'");
    }
    // The worked rationale must end by committing to the gold label.
    auto res = extract_answer(g.rationale, d.pole, ExtractionMode::Lenient);
    if (!std::holds_alternative<std::string>(res) ||
        std::get<std::string>(res) != found->gold) {
      throw DataError(DataError::Kind::RationaleMismatch,
                      "rationale for fewshot id '" + id +
                          "' does not conclude with gold label '" +
                          found->gold + "'");
    }
    out.fewshot_pool.push_back(
        FewShotExample{*found, g.gloss1, g.gloss2, g.rationale});
  }

  for (const auto& it : d.items) {
    bool selected = distinct.count(it.id) > 0;
    if (!selected) out.items.push_back(it);
  }
  return out;
}

}  // namespace semshift
