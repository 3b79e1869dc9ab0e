#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semshift/backend.hpp"
#include "semshift/cache.hpp"
#include "semshift/dataset.hpp"
#include "semshift/errors.hpp"
#include "semshift/evaluation.hpp"
#include "semshift/http_backend.hpp"
#include "semshift/manifest.hpp"
#include "semshift/prompting.hpp"
#include "semshift/reporting.hpp"

namespace semshift {

struct CmdOptions {
  std::optional<Pole> only_pole;
};

// "--only pole=dimension"
inline CmdOptions parse_only_filter(const std::string& spec) {
  CmdOptions opts;
  if (spec.empty()) return opts;
  auto eq = spec.find('=');
  if (eq == std::string::npos || spec.substr(0, eq) != "pole") {
    throw ConfigError("--only expects pole=<name>, got '" + spec + "'");
  }
  auto pole = parse_pole(spec.substr(eq + 1));
  if (!pole) {
    throw ConfigError("--only: unknown pole '" + spec.substr(eq + 1) + "'");
  }
  opts.only_pole = pole;
  return opts;
}

namespace detail {

inline std::vector<Pole> poles_in_scope(const RunManifest& m,
                                        const CmdOptions& opts) {
  std::vector<Pole> out;
  for (Pole p : kAllPoles) {
    if (!m.datasets.count(p)) continue;
    if (opts.only_pole && *opts.only_pole != p) continue;
    out.push_back(p);
  }
  if (out.empty()) {
    throw ConfigError(opts.only_pole
                          ? "manifest has no dataset for the requested pole"
                          : "manifest has no datasets");
  }
  return out;
}

inline std::string sanitize_filename(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += (is_alnum(c) || c == '-' || c == '_' || c == '.') ? c : '-';
  }
  return out.empty() ? std::string("x") : out;
}

inline std::filesystem::path run_dir(const RunManifest& m) {
  return resolve_path(m, m.output_dir) / "runs" / manifest_hash(m);
}

inline std::filesystem::path reports_dir(const RunManifest& m) {
  return resolve_path(m, m.output_dir) / "reports";
}

inline std::filesystem::path run_log_path(const RunManifest& m,
                                          const std::string& model_id,
                                          Pole pole, PromptMethod method) {
  return run_dir(m) / (sanitize_filename(model_id) + "__" +
                       std::string(pole_name(pole)) + "__" +
                       std::string(method_name(method)) + ".jsonl");
}

// Loads a pole's dataset with the fewshot pool selected per the manifest.
inline Dataset load_pole_dataset(const RunManifest& m, Pole pole) {
  const auto& cfg = m.datasets.at(pole);
  Dataset d = load_dataset(resolve_path(m, cfg.path).string(), pole);
  d.glosses = load_gloss_sidecar(resolve_path(m, cfg.sidecar).string());
  return select_fewshot(
      d, {cfg.fewshot[0], cfg.fewshot[1], cfg.fewshot[2]});
}

inline std::unique_ptr<ChatBackend> make_backend(const RunManifest& m,
                                                 const EndpointConfig& e) {
  if (e.kind == "mock") {
    return load_mock_fixture(resolve_path(m, e.fixture).string(), e.model_id);
  }
  return std::make_unique<HttpChatBackend>(e.http);
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write: " + path.string());
  out << content;
}

// Rebuilds a RunResult from a persisted log, verifying the header matches
// what the manifest would produce today.
inline RunResult run_from_log(const RunManifest& m,
                              const std::string& model_id, Pole pole,
                              PromptMethod method) {
  auto path = run_log_path(m, model_id, pole, method);
  if (!std::filesystem::exists(path)) {
    throw IncompleteRunError(
        "no run log for model=" + model_id + " pole=" +
        std::string(pole_name(pole)) + " method=" +
        std::string(method_name(method)) + " (expected " + path.string() +
        "); run 'run' first");
  }
  auto [header, records] = RecordLog::read(path);
  if (header.template_version != kTemplateVersion) {
    throw ConfigError("log " + path.string() +
                      " was produced under template_version '" +
                      header.template_version + "'");
  }
  RunResult result;
  result.pole = pole;
  result.method = method;
  result.model_id = model_id;
  result.n_samples = header.n_samples;
  result.complete = true;
  for (auto& rec : records) {
    result.records.push_back(SampleRecord{std::move(rec), true, 0.0});
  }
  return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// validate: load datasets and sidecars, report totals and per-label counts,
// list every malformed line.

inline int cmd_validate(const RunManifest& m, const CmdOptions& opts,
                        std::ostream& out, std::ostream& err) {
  int rc = kExitOk;
  for (Pole pole : detail::poles_in_scope(m, opts)) {
    const auto& cfg = m.datasets.at(pole);
    auto path = resolve_path(m, cfg.path);
    try {
      Dataset d = load_dataset(path.string(), pole);
      d.glosses = load_gloss_sidecar(resolve_path(m, cfg.sidecar).string());
      auto stats = dataset_stats(d);
      out << pole_name(pole) << ": total=" << stats.total;
      for (const auto& l : label_alphabet(pole)) {
        out << " " << l << "=" << stats.per_label.at(l);
      }
      out << "\n";
      Dataset selected = select_fewshot(
          d, {cfg.fewshot[0], cfg.fewshot[1], cfg.fewshot[2]});
      out << pole_name(pole) << ": fewshot ok (" << cfg.fewshot[0] << ", "
          << cfg.fewshot[1] << ", " << cfg.fewshot[2] << "); eval items "
          << selected.items.size() << "\n";
    } catch (const SchemaLoadError& e) {
      for (const auto& issue : e.issues()) {
        err << e.path() << ":" << issue.line << ": " << issue.reason << "\n";
      }
      rc = std::max(rc, kExitData);
    } catch (const DataError& e) {
      err << pole_name(pole) << ": " << e.what() << "\n";
      rc = std::max(rc, kExitData);
    } catch (const ConfigError& e) {
      err << pole_name(pole) << ": " << e.what() << "\n";
      rc = std::max(rc, kExitConfig);
    }
  }
  return rc;
}

// ---------------------------------------------------------------------------
// run: execute every endpoint x pole x method combination, resuming from
// any existing logs under the same manifest hash.

inline int cmd_run(const RunManifest& m, const CmdOptions& opts,
                   std::ostream& out, std::ostream& err) {
  auto poles = detail::poles_in_scope(m, opts);

  // Fail before any network call if anything referenced is missing.
  for (Pole pole : poles) {
    const auto& cfg = m.datasets.at(pole);
    for (const auto& p : {cfg.path, cfg.sidecar}) {
      if (!std::filesystem::exists(resolve_path(m, p))) {
        throw ConfigError("missing file referenced by manifest: " + p);
      }
    }
  }
  for (const auto& e : m.endpoints) {
    if (e.kind == "mock" &&
        !std::filesystem::exists(resolve_path(m, e.fixture))) {
      throw ConfigError("missing mock fixture: " + e.fixture);
    }
  }

  std::map<Pole, Dataset> datasets;
  for (Pole pole : poles) {
    datasets.emplace(pole, detail::load_pole_dataset(m, pole));
  }

  out << "run directory: " << detail::run_dir(m).string() << "\n";
  bool incomplete = false;
  for (const auto& e : m.endpoints) {
    auto backend = detail::make_backend(m, e);
    for (Pole pole : poles) {
      const Dataset& d = datasets.at(pole);
      for (PromptMethod method : m.methods) {
        RunLogHeader header{e.model_id, pole, method, m.params.n_samples,
                            static_cast<int>(d.items.size()),
                            std::string(kTemplateVersion)};
        RecordLog log(detail::run_log_path(m, e.model_id, pole, method),
                      header);
        RunTaskOptions task_opts;
        task_opts.completion.mode = m.extraction_mode;
        task_opts.templates = m.templates;
        task_opts.max_parallel = e.http.max_parallel;
        RunResult result =
            run_task(*backend, d, method, m.params, &log, task_opts);
        out << e.model_id << " " << pole_name(pole) << " "
            << method_name(method) << ": " << result.records.size() << "/"
            << d.items.size() * static_cast<std::size_t>(m.params.n_samples)
            << " records (" << result.n_cache_hits << " cached, "
            << result.n_executed << " new)";
        if (!result.complete) {
          out << " INCOMPLETE";
          incomplete = true;
          if (!result.failures.empty()) {
            err << "transport failure: " << result.failures.front().reason
                << "\n";
          }
        }
        out << "\n";
      }
    }
  }
  if (incomplete) {
    err << "run incomplete; rerun to resume from the logs\n";
    return kExitIncomplete;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score: accuracy tables from the logs.

inline int cmd_score(const RunManifest& m, const CmdOptions& opts,
                     std::ostream& out, std::ostream& err) {
  (void)err;
  auto reports = detail::reports_dir(m);
  for (Pole pole : detail::poles_in_scope(m, opts)) {
    Dataset d = detail::load_pole_dataset(m, pole);
    std::vector<ScoreCell> cells;
    for (PromptMethod method : m.methods) {
      for (const auto& e : m.endpoints) {
        RunResult result = detail::run_from_log(m, e.model_id, pole, method);
        MetricsReport report = score_run(result, d);
        cells.push_back(ScoreCell{method, e.model_id, report});
        detail::write_text_file(
            reports / ("details-" + std::string(pole_name(pole)) + "-" +
                       detail::sanitize_filename(e.model_id) + "-" +
                       std::string(method_name(method)) + ".csv"),
            details_csv(result, d));
      }
    }
    detail::write_text_file(
        reports / ("metrics-" + std::string(pole_name(pole)) + ".csv"),
        metrics_table_csv(pole, cells));
    std::string table = metrics_table_text(pole, cells);
    detail::write_text_file(
        reports / ("metrics-" + std::string(pole_name(pole)) + ".txt"),
        table);
    out << table << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// correlate: agreement matrices within the two comparison families.

inline int cmd_correlate(const RunManifest& m, const CmdOptions& opts,
                         std::ostream& out, std::ostream& err) {
  (void)err;
  auto reports = detail::reports_dir(m);
  for (Pole pole : detail::poles_in_scope(m, opts)) {
    Dataset d = detail::load_pole_dataset(m, pole);
    // Majorities for every run once.
    std::map<std::string, RunLabels> by_run;
    for (const auto& e : m.endpoints) {
      for (PromptMethod method : m.methods) {
        RunResult result = detail::run_from_log(m, e.model_id, pole, method);
        std::string key =
            e.model_id + "|" + std::string(method_name(method));
        by_run.emplace(key,
                       majorities_from_run(result, d,
                                           std::string(method_name(method))));
      }
    }

    // Family 1: methods compared within each model.
    if (m.methods.size() >= 2) {
      for (const auto& e : m.endpoints) {
        std::vector<RunLabels> runs;
        for (PromptMethod method : m.methods) {
          auto r = by_run.at(e.model_id + "|" +
                             std::string(method_name(method)));
          runs.push_back(std::move(r));
        }
        auto matrix = agreement_matrix(runs);
        std::string stem = "agreement-" + std::string(pole_name(pole)) +
                           "-methods-" +
                           detail::sanitize_filename(e.model_id);
        detail::write_text_file(
            reports / (stem + ".csv"),
            agreement_csv(pole, "methods@" + e.model_id, matrix));
        detail::write_text_file(
            reports / (stem + ".svg"),
            heatmap_svg(std::string(pole_name(pole)) + " / " + e.model_id +
                            ": method agreement",
                        matrix));
        out << "wrote " << (reports / (stem + ".csv")).string() << "\n";
      }
    }

    // Family 2: models compared within each method.
    if (m.endpoints.size() >= 2) {
      for (PromptMethod method : m.methods) {
        std::vector<RunLabels> runs;
        for (const auto& e : m.endpoints) {
          auto r = by_run.at(e.model_id + "|" +
                             std::string(method_name(method)));
          r.run_id = e.model_id;
          runs.push_back(std::move(r));
        }
        auto matrix = agreement_matrix(runs);
        std::string stem = "agreement-" + std::string(pole_name(pole)) +
                           "-models-" + std::string(method_name(method));
        detail::write_text_file(
            reports / (stem + ".csv"),
            agreement_csv(pole,
                          "models@" + std::string(method_name(method)),
                          matrix));
        detail::write_text_file(
            reports / (stem + ".svg"),
            heatmap_svg(std::string(pole_name(pole)) + " / " +
                            std::string(method_name(method)) +
                            ": model agreement",
                        matrix));
        out << "wrote " << (reports / (stem + ".csv")).string() << "\n";
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// characterize: word-level change typology per (model, method).

inline int cmd_characterize(const RunManifest& m, const CmdOptions& opts,
                            std::ostream& out, std::ostream& err) {
  auto poles = detail::poles_in_scope(m, opts);
  auto reports = detail::reports_dir(m);
  std::map<Pole, Dataset> datasets;
  for (Pole pole : poles) {
    datasets.emplace(pole, detail::load_pole_dataset(m, pole));
  }

  for (const auto& e : m.endpoints) {
    for (PromptMethod method : m.methods) {
      std::map<std::string, PoleJudgments> by_lemma;
      for (Pole pole : poles) {
        const Dataset& d = datasets.at(pole);
        RunResult result = detail::run_from_log(m, e.model_id, pole, method);
        RunLabels labels = majorities_from_run(result, d, "run");
        std::map<std::string, std::optional<std::string>> by_id;
        for (const auto& [id, l] : labels.majorities) by_id[id] = l;
        for (const auto& item : d.items) {
          auto& j = by_lemma[item.lemma];
          auto& vec = pole == Pole::Dimension  ? j.dimension
                      : pole == Pole::Relation ? j.relation
                                               : j.orientation;
          vec.push_back(by_id.at(item.id));
        }
      }

      std::vector<TypologyVerdict> verdicts;
      for (const auto& [lemma, judgments] : by_lemma) {
        try {
          verdicts.push_back(
              characterize_word(lemma, judgments, m.direction));
        } catch (const DataError& de) {
          // Reported, never fatal: the word simply has no judgments.
          err << "characterize: " << de.what() << "\n";
        }
      }
      std::string text =
          typology_report(e.model_id, method, m.direction, verdicts);
      detail::write_text_file(
          reports / ("typology-" + detail::sanitize_filename(e.model_id) +
                     "-" + std::string(method_name(method)) + ".txt"),
          text);
      out << text << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// render: print the exact bundle for one item.

inline int cmd_render(const RunManifest& m, Pole pole, PromptMethod method,
                      const std::string& item_id, std::ostream& out) {
  if (!m.datasets.count(pole)) {
    throw ConfigError("manifest has no dataset for pole '" +
                      std::string(pole_name(pole)) + "'");
  }
  Dataset d = detail::load_pole_dataset(m, pole);
  const SentencePairItem* item = nullptr;
  for (const auto& it : d.items) {
    if (it.id == item_id) {
      item = &it;
      break;
    }
  }
  if (!item) {
    for (const auto& ex : d.fewshot_pool) {
      if (ex.item.id == item_id) {
        throw DataError(DataError::Kind::IdNotFound,
                        "item '" + item_id +
                            "' is a fewshot example, not an eval item");
      }
    }
    throw DataError(DataError::Kind::IdNotFound,
                    "no item with id '" + item_id + "'");
  }
  PromptBundle b = render_prompt(*item, method, d.fewshot_pool, m.templates);
  out << "# item " << b.item_id << " pole=" << pole_name(b.pole)
      << " method=" << method_name(b.method) << "\n";
  out << "--- instruction ---\n" << b.instruction_text << "\n";
  out << "--- shots ---\n" << b.shots_text << "\n";
  out << "--- query ---\n" << b.query_text << "\n";
  out << "--- answer prefix ---\n" << b.answer_prefix << "\n";
  out << "--- alphabet ---\n";
  for (const auto& l : b.answer_alphabet) out << l << "\n";
  return kExitOk;
}

// Shared exception-to-exit-code mapping.
template <typename F>
inline int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const SchemaLoadError& e) {
    for (const auto& issue : e.issues()) {
      err << e.path() << ":" << issue.line << ": " << issue.reason << "\n";
    }
    return kExitData;
  } catch (const IncompleteRunError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace semshift
