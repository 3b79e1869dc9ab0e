#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semshift/evaluation.hpp"
#include "semshift/labels.hpp"
#include "semshift/prompting.hpp"

namespace semshift {

// ".78±.01" style: two decimals, leading zero dropped below one.
inline std::string format_mean_std(double mean, double stddev) {
  char m[32], s[32];
  std::snprintf(m, sizeof m, "%.2f", mean);
  std::snprintf(s, sizeof s, "%.2f", stddev);
  auto strip = [](std::string v) {
    if (v.rfind("0.", 0) == 0) v.erase(0, 1);
    return v;
  };
  return strip(m) + "±" + strip(s);
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string format_double2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  bool needs_quote = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quote) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

// ---------------------------------------------------------------------------
// Score tables: one row per method, one column per model.

struct ScoreCell {
  PromptMethod method = PromptMethod::FewShot;
  std::string model_id;
  MetricsReport report;
};

inline std::string metrics_table_csv(Pole pole,
                                     const std::vector<ScoreCell>& cells) {
  std::string out = "#semshift-metrics-v1\n";
  out += "pole,method,model,mean,std,cell,n_items,n_samples,n_parse_errors\n";
  for (const auto& c : cells) {
    out += std::string(pole_name(pole)) + "," +
           std::string(method_name(c.method)) + "," + csv_field(c.model_id) +
           "," + format_double(c.report.mean) + "," +
           format_double(c.report.stddev) + "," +
           format_mean_std(c.report.mean, c.report.stddev) + "," +
           std::to_string(c.report.n_items) + "," +
           std::to_string(c.report.n_samples) + "," +
           std::to_string(c.report.n_parse_errors) + "\n";
  }
  return out;
}

inline std::string metrics_table_text(Pole pole,
                                      const std::vector<ScoreCell>& cells) {
  // Collect row/column orders as first seen.
  std::vector<PromptMethod> methods;
  std::vector<std::string> models;
  std::map<std::string, std::string> values;  // method|model -> cell
  for (const auto& c : cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
      methods.push_back(c.method);
    if (std::find(models.begin(), models.end(), c.model_id) == models.end())
      models.push_back(c.model_id);
    values[std::string(method_name(c.method)) + "|" + c.model_id] =
        format_mean_std(c.report.mean, c.report.stddev);
  }

  std::size_t row_w = 8;  // "Rhetoric"
  for (auto m : methods)
    row_w = std::max(row_w, std::string(method_display_name(m)).size());
  std::vector<std::size_t> col_w;
  for (const auto& m : models) col_w.push_back(std::max<std::size_t>(8, m.size()));

  auto pad = [](const std::string& s, std::size_t w) {
    std::string out = s;
    while (out.size() < w) out += ' ';
    return out;
  };

  std::string out = "#semshift-metrics-v1 pole=" +
                    std::string(pole_name(pole)) + "\n";
  out += pad("Method", row_w + 2);
  for (std::size_t j = 0; j < models.size(); ++j) {
    out += pad(models[j], col_w[j] + 2);
  }
  out += "\n";
  for (auto m : methods) {
    out += pad(std::string(method_display_name(m)), row_w + 2);
    for (std::size_t j = 0; j < models.size(); ++j) {
      auto it = values.find(std::string(method_name(m)) + "|" + models[j]);
      // The +-sign is multibyte; pad by display width, not bytes.
      std::string cell = it == values.end() ? std::string("-") : it->second;
      std::size_t display = cell.size();
      if (it != values.end()) display -= 1;  // UTF-8 "±" is 2 bytes, 1 column
      out += cell;
      for (std::size_t k = display; k < col_w[j] + 2; ++k) out += ' ';
    }
    out += "\n";
  }
  return out;
}

// Per-item detail lines for one run: gold, majority, per-sample labels.
inline std::string details_csv(const RunResult& result, const Dataset& eval) {
  std::map<std::string, std::vector<const StoredRecord*>> by_item;
  for (const auto& rec : result.records)
    by_item[rec.stored.item_id].push_back(&rec.stored);

  std::string out = "#semshift-details-v1\n";
  out += "item_id,lemma,gold,majority,correct";
  for (int k = 0; k < result.n_samples; ++k)
    out += ",s" + std::to_string(k);
  out += "\n";
  for (const auto& item : eval.items) {
    auto it = by_item.find(item.id);
    std::vector<std::optional<std::string>> labels;
    if (it != by_item.end()) {
      for (const StoredRecord* r : it->second) labels.push_back(r->label);
    }
    auto maj = majority_label(labels);
    std::string maj_s = maj ? *maj : std::string(kUndecided);
    out += csv_field(item.id) + "," + csv_field(item.lemma) + "," + item.gold +
           "," + maj_s + "," + ((maj && *maj == item.gold) ? "1" : "0");
    if (it != by_item.end()) {
      for (const StoredRecord* r : it->second) {
        out += ",";
        out += r->label ? *r->label
                        : "!" + std::string(parse_error_kind_name(
                                    r->error->kind));
      }
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Agreement outputs

inline std::string agreement_csv(Pole pole, const std::string& family,
                                 const AgreementMatrix& m) {
  std::string out = "#semshift-agreement-v1\n";
  out += "pole,family,run_a,run_b,raw,kappa\n";
  for (std::size_t i = 0; i < m.run_ids.size(); ++i) {
    for (std::size_t j = 0; j < m.run_ids.size(); ++j) {
      out += std::string(pole_name(pole)) + "," + csv_field(family) + "," +
             csv_field(m.run_ids[i]) + "," + csv_field(m.run_ids[j]) + "," +
             format_double(m.raw[i][j]) + "," +
             (m.kappa[i][j] ? format_double(*m.kappa[i][j])
                            : std::string("NA")) +
             "\n";
    }
  }
  return out;
}

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string heat_color(double v) {
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  // white -> steel blue
  int r = static_cast<int>(255 + v * (33 - 255));
  int g = static_cast<int>(255 + v * (102 - 255));
  int b = static_cast<int>(255 + v * (172 - 255));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace detail

// Deterministic, dependency-free heatmap of raw agreement. Cells are
// annotated with the raw value.
inline std::string heatmap_svg(const std::string& title,
                               const AgreementMatrix& m) {
  const std::size_t n = m.run_ids.size();
  const int cell = 72;
  const int left = 140;
  const int top = 56;
  const int width = left + cell * static_cast<int>(n) + 16;
  const int height = top + cell * static_cast<int>(n) + 16;

  std::string out = "<!-- semshift-heatmap-v1 -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"8\" y=\"18\" font-size=\"13\">" +
         detail::svg_escape(title) + "</text>\n";
  for (std::size_t j = 0; j < n; ++j) {
    out += "<text x=\"" +
           std::to_string(left + cell * static_cast<int>(j) + cell / 2) +
           "\" y=\"" + std::to_string(top - 8) +
           "\" text-anchor=\"middle\">" + detail::svg_escape(m.run_ids[j]) +
           "</text>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    out += "<text x=\"" + std::to_string(left - 8) + "\" y=\"" +
           std::to_string(top + cell * static_cast<int>(i) + cell / 2 + 4) +
           "\" text-anchor=\"end\">" + detail::svg_escape(m.run_ids[i]) +
           "</text>\n";
    for (std::size_t j = 0; j < n; ++j) {
      double v = m.raw[i][j];
      int x = left + cell * static_cast<int>(j);
      int y = top + cell * static_cast<int>(i);
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" +
             std::to_string(y) + "\" width=\"" + std::to_string(cell) +
             "\" height=\"" + std::to_string(cell) + "\" fill=\"" +
             detail::heat_color(v) + "\" stroke=\"#999\"/>\n";
      std::string text_fill = v > 0.6 ? "white" : "black";
      out += "<text x=\"" + std::to_string(x + cell / 2) + "\" y=\"" +
             std::to_string(y + cell / 2 + 4) +
             "\" text-anchor=\"middle\" fill=\"" + text_fill + "\">" +
             format_double2(v) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Typology report

inline std::string typology_report(const std::string& model_id,
                                   PromptMethod method, Direction direction,
                                   const std::vector<TypologyVerdict>&
                                       verdicts) {
  std::string out = "#semshift-typology-v1\n";
  out += "model=" + model_id + " method=" +
         std::string(method_name(method)) + " direction=" +
         std::string(direction_name(direction)) + "\n";
  for (const auto& v : verdicts) {
    out += v.word + "\t";
    if (v.classes.empty()) {
      out += "stable";
    } else {
      for (std::size_t i = 0; i < v.classes.size(); ++i) {
        if (i) out += ", ";
        out += std::string(change_class_name(v.classes[i]));
      }
    }
    // Evidence counts, grouped by pole in canonical order.
    out += "\t";
    bool first_pole = true;
    for (Pole p : kAllPoles) {
      std::string prefix = std::string(pole_name(p)) + ":";
      bool has = false;
      for (const auto& [k, n] : v.evidence) {
        if (k.rfind(prefix, 0) == 0) { has = true; break; }
      }
      if (!has) continue;
      if (!first_pole) out += " | ";
      first_pole = false;
      out += std::string(pole_name(p)) + ":";
      auto emit = [&](const std::string& label) {
        auto it = v.evidence.find(prefix + label);
        if (it == v.evidence.end()) return;
        out += " " + label + "=" + std::to_string(it->second);
      };
      for (const auto& l : label_alphabet(p)) emit(l);
      emit(std::string(kUndecided));
    }
    out += "\n";
  }
  return out;
}

}  // namespace semshift
