#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "semshift/errors.hpp"
#include "semshift/extraction.hpp"
#include "semshift/labels.hpp"
#include "semshift/prompting.hpp"

namespace semshift {

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char hexd[] = "0123456789abcdef";
  std::string out;
  out.reserve(static_cast<std::size_t>(len) * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hexd[digest[i] >> 4]);
    out.push_back(hexd[digest[i] & 0xF]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persisted sample records. A record log IS the response cache: one JSONL
// file per (model, pole, method) run, append-only, every line deterministic.
// Runtime-only observations (latency, cache-hit flags) deliberately never
// reach disk so a resumed log is byte-identical to an uninterrupted one.

struct StoredRecord {
  std::string cache_key;
  std::string item_id;
  std::string model_id;
  PromptMethod method = PromptMethod::FewShot;
  int sample_index = 0;
  std::string rationale;  // phase-1 text, verbatim
  std::string answer;     // phase-2 text, verbatim (last attempt)
  std::optional<std::string> label;  // exactly one of label / error is set
  std::optional<ParseError> error;

  bool operator==(const StoredRecord& o) const {
    return cache_key == o.cache_key && item_id == o.item_id &&
           model_id == o.model_id && method == o.method &&
           sample_index == o.sample_index && rationale == o.rationale &&
           answer == o.answer && label == o.label && error == o.error;
  }
};

inline nlohmann::json record_to_json(const StoredRecord& r) {
  nlohmann::json obj = {
      {"cache_key", r.cache_key},
      {"item_id", r.item_id},
      {"model", r.model_id},
      {"method", std::string(method_name(r.method))},
      {"sample_index", r.sample_index},
      {"rationale", r.rationale},
      {"answer", r.answer},
  };
  if (r.label) {
    obj["label"] = *r.label;
  } else if (r.error) {
    obj["error"] = std::string(parse_error_kind_name(r.error->kind));
    obj["error_context"] = r.error->context;
  }
  return obj;
}

inline StoredRecord record_from_json(const nlohmann::json& obj) {
  StoredRecord r;
  r.cache_key = obj.at("cache_key").get<std::string>();
  r.item_id = obj.at("item_id").get<std::string>();
  r.model_id = obj.at("model").get<std::string>();
  auto m = parse_method(obj.at("method").get<std::string>());
  if (!m) throw ConfigError("record has unknown method");
  r.method = *m;
  r.sample_index = obj.at("sample_index").get<int>();
  r.rationale = obj.at("rationale").get<std::string>();
  r.answer = obj.at("answer").get<std::string>();
  if (obj.contains("label")) {
    r.label = obj.at("label").get<std::string>();
  } else if (obj.contains("error")) {
    auto kind = parse_error_kind_from(obj.at("error").get<std::string>());
    if (!kind) throw ConfigError("record has unknown error kind");
    std::string ctx = obj.contains("error_context")
                          ? obj.at("error_context").get<std::string>()
                          : std::string();
    r.error = ParseError{*kind, ctx};
  } else {
    throw ConfigError("record carries neither label nor error");
  }
  return r;
}

struct RunLogHeader {
  std::string model_id;
  Pole pole = Pole::Dimension;
  PromptMethod method = PromptMethod::FewShot;
  int n_samples = 0;
  int n_items = 0;
  std::string template_version;

  bool operator==(const RunLogHeader&) const = default;
};

inline nlohmann::json header_to_json(const RunLogHeader& h) {
  return nlohmann::json{
      {"format", "semshift-run-log"},
      {"version", 1},
      {"model", h.model_id},
      {"pole", std::string(pole_name(h.pole))},
      {"method", std::string(method_name(h.method))},
      {"n_samples", h.n_samples},
      {"n_items", h.n_items},
      {"template_version", h.template_version},
  };
}

inline RunLogHeader header_from_json(const nlohmann::json& obj) {
  if (!obj.is_object() || obj.value("format", "") != "semshift-run-log") {
    throw ConfigError("not a run log: bad header line");
  }
  if (obj.value("version", 0) != 1) {
    throw ConfigError("unsupported run log version");
  }
  RunLogHeader h;
  h.model_id = obj.at("model").get<std::string>();
  auto p = parse_pole(obj.at("pole").get<std::string>());
  auto m = parse_method(obj.at("method").get<std::string>());
  if (!p || !m) throw ConfigError("run log header has unknown pole/method");
  h.pole = *p;
  h.method = *m;
  h.n_samples = obj.at("n_samples").get<int>();
  h.n_items = obj.at("n_items").get<int>();
  h.template_version = obj.at("template_version").get<std::string>();
  return h;
}

// Append-only JSONL log, first line a version header. Opening an existing
// file verifies the header and indexes the records already present, which is
// all the resume machinery there is. Appends are mutex-guarded; ordering
// across cells is the caller's job (run_task writes strictly in cell order).
class RecordLog {
 public:
  RecordLog(const std::filesystem::path& path, const RunLogHeader& header)
      : path_(path) {
    namespace fs = std::filesystem;
    if (fs::exists(path_)) {
      auto [existing, records] = read(path_);
      if (!(existing == header)) {
        throw ConfigError("existing log " + path_.string() +
                          " was written for a different run configuration");
      }
      records_ = std::move(records);
      for (std::size_t i = 0; i < records_.size(); ++i) {
        index_.emplace(records_[i].cache_key, i);
      }
      out_.open(path_, std::ios::binary | std::ios::app);
      if (!out_) throw ConfigError("cannot append to log: " + path_.string());
    } else {
      if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
      out_.open(path_, std::ios::binary | std::ios::trunc);
      if (!out_) throw ConfigError("cannot create log: " + path_.string());
      out_ << header_to_json(header).dump() << "\n";
      out_.flush();
    }
  }

  static std::pair<RunLogHeader, std::vector<StoredRecord>> read(
      const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read log: " + path.string());
    std::string line;
    if (!std::getline(in, line)) {
      throw ConfigError("empty log file: " + path.string());
    }
    RunLogHeader header;
    try {
      header = header_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("not a run log: bad header line in " + path.string());
    }
    std::vector<StoredRecord> records;
    std::map<std::string, bool> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
        auto rec = record_from_json(obj);
        if (seen.emplace(rec.cache_key, true).second) {
          records.push_back(std::move(rec));
        }
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("corrupt record at " + path.string() + ":" +
                          std::to_string(line_no));
      }
    }
    return {header, std::move(records)};
  }

  bool contains(const std::string& cache_key) const {
    std::lock_guard<std::mutex> lock(mu_);
    return index_.count(cache_key) > 0;
  }

  std::optional<StoredRecord> find(const std::string& cache_key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(cache_key);
    if (it == index_.end()) return std::nullopt;
    return records_[it->second];
  }

  void append(const StoredRecord& rec) {
    std::lock_guard<std::mutex> lock(mu_);
    if (index_.count(rec.cache_key)) return;  // already persisted
    out_ << record_to_json(rec).dump() << "\n";
    out_.flush();
    index_.emplace(rec.cache_key, records_.size());
    records_.push_back(rec);
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return records_.size();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> index_;
  std::vector<StoredRecord> records_;
};

}  // namespace semshift
