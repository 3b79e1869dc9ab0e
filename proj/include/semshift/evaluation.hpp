#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semshift/backend.hpp"
#include "semshift/dataset.hpp"
#include "semshift/errors.hpp"
#include "semshift/labels.hpp"

namespace semshift {

// ---------------------------------------------------------------------------
// Accuracy

struct MetricsReport {
  Pole pole = Pole::Dimension;
  int n_items = 0;
  int n_samples = 0;
  int n_parse_errors = 0;
  std::vector<double> per_sample_accuracy;
  double mean = 0.0;
  double stddev = 0.0;  // sample std (n-1); 0 when n_samples == 1
  // Square over alphabet + "undecided" (last row/col). Rows are gold, so the
  // undecided row is structurally zero; the column absorbs tied majorities.
  // Cells sum to n_items.
  std::vector<std::string> confusion_labels;
  std::vector<std::vector<std::size_t>> confusion;
};

// Strict plurality over parsed labels. ParseErrors carry no vote and can
// never win; a tie (or nothing but errors) is Undecided.
inline std::optional<std::string> majority_label(
    const std::vector<std::optional<std::string>>& samples) {
  std::map<std::string, std::size_t> counts;
  for (const auto& s : samples) {
    if (s) ++counts[*s];
  }
  if (counts.empty()) return std::nullopt;
  std::size_t best = 0;
  for (const auto& [label, n] : counts) best = std::max(best, n);
  std::optional<std::string> winner;
  for (const auto& [label, n] : counts) {
    if (n == best) {
      if (winner) return std::nullopt;  // tie
      winner = label;
    }
  }
  return winner;
}

// Scores one run against its evaluation items. Every (item, sample) cell
// must be present; ParseError cells count as wrong with the denominator
// unchanged, so parse failures depress accuracy instead of shrinking n.
inline MetricsReport score_run(const RunResult& result,
                               const Dataset& eval) {
  if (eval.items.empty()) {
    throw ConfigError("score_run: dataset has no evaluation items");
  }
  const int n_samples = result.n_samples;
  if (n_samples < 1) throw ConfigError("score_run: n_samples < 1");

  std::map<std::string, std::vector<const StoredRecord*>> by_item;
  for (const auto& rec : result.records) {
    by_item[rec.stored.item_id].push_back(&rec.stored);
  }

  std::vector<std::string> missing;
  for (const auto& item : eval.items) {
    auto it = by_item.find(item.id);
    std::size_t have = it == by_item.end() ? 0 : it->second.size();
    if (have != static_cast<std::size_t>(n_samples)) {
      missing.push_back(item.id + " (" + std::to_string(have) + "/" +
                        std::to_string(n_samples) + " samples)");
    }
  }
  if (!missing.empty() ||
      result.records.size() !=
          eval.items.size() * static_cast<std::size_t>(n_samples)) {
    std::string detail;
    for (std::size_t i = 0; i < missing.size() && i < 5; ++i) {
      detail += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 5) detail += ", ...";
    if (detail.empty()) detail = "record/item sets do not match";
    throw IncompleteRunError("run is incomplete: " + detail);
  }

  MetricsReport report;
  report.pole = eval.pole;
  report.n_items = static_cast<int>(eval.items.size());
  report.n_samples = n_samples;

  report.per_sample_accuracy.assign(static_cast<std::size_t>(n_samples), 0.0);
  std::vector<std::size_t> correct(static_cast<std::size_t>(n_samples), 0);
  for (const auto& item : eval.items) {
    // Records arrive in cell order but index by sample anyway.
    for (const StoredRecord* rec : by_item[item.id]) {
      if (rec->error) ++report.n_parse_errors;
      if (rec->label && *rec->label == item.gold) {
        ++correct[static_cast<std::size_t>(rec->sample_index)];
      }
    }
  }
  for (int k = 0; k < n_samples; ++k) {
    report.per_sample_accuracy[static_cast<std::size_t>(k)] =
        static_cast<double>(correct[static_cast<std::size_t>(k)]) /
        static_cast<double>(eval.items.size());
  }

  double sum = 0.0;
  for (double a : report.per_sample_accuracy) sum += a;
  report.mean = sum / static_cast<double>(n_samples);
  if (n_samples > 1) {
    double ss = 0.0;
    for (double a : report.per_sample_accuracy) {
      ss += (a - report.mean) * (a - report.mean);
    }
    report.stddev = std::sqrt(ss / static_cast<double>(n_samples - 1));
  }

  const auto& alphabet = label_alphabet(eval.pole);
  report.confusion_labels = alphabet;
  report.confusion_labels.emplace_back(kUndecided);
  const std::size_t n = report.confusion_labels.size();
  report.confusion.assign(n, std::vector<std::size_t>(n, 0));
  auto index_of = [&](const std::optional<std::string>& l) {
    if (!l) return n - 1;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (alphabet[i] == *l) return i;
    }
    return n - 1;
  };
  for (const auto& item : eval.items) {
    std::vector<std::optional<std::string>> labels;
    labels.reserve(static_cast<std::size_t>(n_samples));
    for (const StoredRecord* rec : by_item[item.id]) {
      labels.push_back(rec->label);
    }
    auto maj = majority_label(labels);
    report.confusion[index_of(item.gold)][index_of(maj)] += 1;
  }
  return report;
}

// Per-item majority labels for one run, used for run-vs-run comparison.
struct RunLabels {
  std::string run_id;
  std::vector<std::pair<std::string, std::optional<std::string>>> majorities;
};

inline RunLabels majorities_from_run(const RunResult& result,
                                     const Dataset& eval,
                                     std::string run_id) {
  std::map<std::string, std::vector<std::optional<std::string>>> by_item;
  for (const auto& rec : result.records) {
    by_item[rec.stored.item_id].push_back(rec.stored.label);
  }
  RunLabels out;
  out.run_id = std::move(run_id);
  for (const auto& item : eval.items) {
    auto it = by_item.find(item.id);
    if (it == by_item.end()) {
      throw IncompleteRunError("no records for item '" + item.id + "'");
    }
    out.majorities.emplace_back(item.id, majority_label(it->second));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Agreement

struct AgreementResult {
  double raw = 0.0;
  // Cohen's kappa; empty when chance agreement is 1 (both runs degenerate
  // on a single category), where kappa is undefined.
  std::optional<double> kappa;
};

// Index-aligned agreement. Undecided is a category of its own: two runs
// that both punt on an item agree on it.
inline AgreementResult agreement(
    const std::vector<std::optional<std::string>>& a,
    const std::vector<std::optional<std::string>>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw DataError(DataError::Kind::ItemSetMismatch,
                    "agreement requires two equal-length, non-empty runs");
  }
  const double n = static_cast<double>(a.size());
  auto cat = [](const std::optional<std::string>& l) {
    return l ? *l : std::string(kUndecided);
  };
  std::size_t matches = 0;
  std::map<std::string, std::size_t> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (cat(a[i]) == cat(b[i])) ++matches;
    ++ca[cat(a[i])];
    ++cb[cat(b[i])];
  }
  AgreementResult out;
  out.raw = static_cast<double>(matches) / n;
  double pe = 0.0;
  for (const auto& [label, na] : ca) {
    auto it = cb.find(label);
    if (it == cb.end()) continue;
    pe += (static_cast<double>(na) / n) *
          (static_cast<double>(it->second) / n);
  }
  if (pe < 1.0) out.kappa = (out.raw - pe) / (1.0 - pe);
  return out;
}

inline AgreementResult agreement(const RunLabels& a, const RunLabels& b) {
  if (a.majorities.size() != b.majorities.size()) {
    throw DataError(DataError::Kind::ItemSetMismatch,
                    "runs '" + a.run_id + "' and '" + b.run_id +
                        "' cover different item sets");
  }
  std::map<std::string, std::optional<std::string>> bm;
  for (const auto& [id, l] : b.majorities) bm[id] = l;
  std::vector<std::optional<std::string>> va, vb;
  for (const auto& [id, l] : a.majorities) {
    auto it = bm.find(id);
    if (it == bm.end()) {
      throw DataError(DataError::Kind::ItemSetMismatch,
                      "item '" + id + "' present in run '" + a.run_id +
                          "' but not in run '" + b.run_id + "'");
    }
    va.push_back(l);
    vb.push_back(it->second);
  }
  return agreement(va, vb);
}

struct AgreementMatrix {
  std::vector<std::string> run_ids;
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<std::optional<double>>> kappa;
};

inline AgreementMatrix agreement_matrix(const std::vector<RunLabels>& runs) {
  if (runs.size() < 2) {
    throw DataError(DataError::Kind::BadArgument,
                    "agreement matrix needs at least 2 runs");
  }
  AgreementMatrix m;
  for (const auto& r : runs) m.run_ids.push_back(r.run_id);
  const std::size_t n = runs.size();
  m.raw.assign(n, std::vector<double>(n, 0.0));
  m.kappa.assign(n, std::vector<std::optional<double>>(n, std::nullopt));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto res = agreement(runs[i], runs[j]);
      m.raw[i][j] = res.raw;
      m.kappa[i][j] = res.kappa;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Typology

enum class ChangeClass {
  Broadening,
  Narrowing,
  Amelioration,
  Pejoration,
  Metaphorization,
  Metonymization,
};

inline std::string_view change_class_name(ChangeClass c) {
  switch (c) {
    case ChangeClass::Broadening: return "broadening";
    case ChangeClass::Narrowing: return "narrowing";
    case ChangeClass::Amelioration: return "amelioration";
    case ChangeClass::Pejoration: return "pejoration";
    case ChangeClass::Metaphorization: return "metaphorization";
    case ChangeClass::Metonymization: return "metonymization";
  }
  return "?";
}

// Which corpus is treated as the earlier one. Reversed flips the direction-
// sensitive classes (broadening/narrowing, amelioration/pejoration); the
// relation classes name the mechanism and do not flip.
enum class Direction { Forward, Reversed };

inline std::string_view direction_name(Direction d) {
  return d == Direction::Forward ? "forward" : "reversed";
}

inline std::optional<Direction> parse_direction(std::string_view s) {
  std::string f = casefold(trim(s));
  if (f == "forward") return Direction::Forward;
  if (f == "reversed") return Direction::Reversed;
  return std::nullopt;
}

// All per-pair majority judgments for one lemma, grouped by pole. Entries
// are majority labels; nullopt is an undecided pair.
struct PoleJudgments {
  std::vector<std::optional<std::string>> dimension;
  std::vector<std::optional<std::string>> relation;
  std::vector<std::optional<std::string>> orientation;
};

struct TypologyVerdict {
  std::string word;
  std::vector<ChangeClass> classes;  // canonical order, possibly empty
  // "dimension:identical" -> count, including ":undecided" entries, for
  // every pole that had any judgments.
  std::map<std::string, std::size_t> evidence;
};

// Aggregates pair judgments into word-level change classes.
//
// Dimension: with no "identical" pair at all (and at least one "different")
// the word's earlier senses have no surviving match -> narrowing. Otherwise
// a "different" fraction strictly above theta_d -> broadening. The else-if
// makes the two mutually exclusive; sense disappearance is the more specific
// signal, so it wins when both would fire.
// Relation: strict plurality of metaphor -> metaphorization, metonymy ->
// metonymization; "unrelated" plurality or a tie names no mechanism.
// Orientation: strict plurality of positive -> amelioration, negative ->
// pejoration; neutral plurality or a tie names no class.
inline TypologyVerdict characterize_word(const std::string& word,
                                         const PoleJudgments& judgments,
                                         Direction direction =
                                             Direction::Forward,
                                         double theta_d = 0.5) {
  if (judgments.dimension.empty() && judgments.relation.empty() &&
      judgments.orientation.empty()) {
    throw DataError(DataError::Kind::EmptyJudgments,
                    "no judgments for word '" + word + "'");
  }

  TypologyVerdict v;
  v.word = word;

  auto count = [](const std::vector<std::optional<std::string>>& js,
                  std::string_view label) {
    std::size_t n = 0;
    for (const auto& j : js) {
      if (j && *j == label) ++n;
    }
    return n;
  };
  auto undecided = [](const std::vector<std::optional<std::string>>& js) {
    std::size_t n = 0;
    for (const auto& j : js) {
      if (!j) ++n;
    }
    return n;
  };
  auto record_evidence = [&](Pole pole,
                             const std::vector<std::optional<std::string>>&
                                 js) {
    if (js.empty()) return;
    std::string prefix = std::string(pole_name(pole)) + ":";
    for (const auto& l : label_alphabet(pole)) {
      v.evidence[prefix + l] = count(js, l);
    }
    v.evidence[prefix + std::string(kUndecided)] = undecided(js);
  };
  record_evidence(Pole::Dimension, judgments.dimension);
  record_evidence(Pole::Relation, judgments.relation);
  record_evidence(Pole::Orientation, judgments.orientation);

  // Strict plurality among real labels; nullopt on tie or no votes.
  auto plurality = [&](const std::vector<std::optional<std::string>>& js,
                       Pole pole) -> std::optional<std::string> {
    std::optional<std::string> best;
    std::size_t best_n = 0;
    bool tied = false;
    for (const auto& l : label_alphabet(pole)) {
      std::size_t n = count(js, l);
      if (n == 0) continue;
      if (n > best_n) {
        best = l;
        best_n = n;
        tied = false;
      } else if (n == best_n) {
        tied = true;
      }
    }
    if (tied) return std::nullopt;
    return best;
  };

  bool reversed = direction == Direction::Reversed;

  if (!judgments.dimension.empty()) {
    const auto& js = judgments.dimension;
    std::size_t d = count(js, "different");
    std::size_t i = count(js, "identical");
    std::size_t n = js.size();
    ChangeClass more = reversed ? ChangeClass::Narrowing
                                : ChangeClass::Broadening;
    ChangeClass fewer = reversed ? ChangeClass::Broadening
                                 : ChangeClass::Narrowing;
    if (i == 0 && d > 0) {
      v.classes.push_back(fewer);
    } else if (static_cast<double>(d) / static_cast<double>(n) > theta_d) {
      v.classes.push_back(more);
    }
  }

  if (!judgments.relation.empty()) {
    auto p = plurality(judgments.relation, Pole::Relation);
    if (p == "metaphor") v.classes.push_back(ChangeClass::Metaphorization);
    if (p == "metonymy") v.classes.push_back(ChangeClass::Metonymization);
  }

  if (!judgments.orientation.empty()) {
    auto p = plurality(judgments.orientation, Pole::Orientation);
    ChangeClass up = reversed ? ChangeClass::Pejoration
                              : ChangeClass::Amelioration;
    ChangeClass down = reversed ? ChangeClass::Amelioration
                                : ChangeClass::Pejoration;
    if (p == "positive") v.classes.push_back(up);
    if (p == "negative") v.classes.push_back(down);
  }

  std::sort(v.classes.begin(), v.classes.end());
  return v;
}

}  // namespace semshift
