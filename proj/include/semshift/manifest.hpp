#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semshift/backend.hpp"
#include "semshift/errors.hpp"
#include "semshift/evaluation.hpp"
#include "semshift/extraction.hpp"
#include "semshift/http_backend.hpp"
#include "semshift/labels.hpp"
#include "semshift/prompting.hpp"
#include "semshift/version.hpp"

namespace semshift {

struct DatasetConfig {
  std::string path;
  std::string sidecar;
  std::array<std::string, 3> fewshot;
};

struct EndpointConfig {
  std::string kind;  // "http" | "mock"
  std::string model_id;
  ModelEndpoint http;   // kind == http
  std::string fixture;  // kind == mock
};

// Every experiment knob lives here. The template_version pin refuses to mix
// logs produced under different prompt text.
struct RunManifest {
  std::map<Pole, DatasetConfig> datasets;
  std::vector<EndpointConfig> endpoints;
  std::vector<PromptMethod> methods;
  GenerationParams params;
  ExtractionMode extraction_mode = ExtractionMode::Lenient;
  TemplateOptions templates;
  Direction direction = Direction::Forward;
  std::string template_version;
  std::string output_dir;
  std::filesystem::path base_dir;  // manifest location; relative paths anchor here
};

inline std::filesystem::path resolve_path(const RunManifest& m,
                                          const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute()) return path;
  return m.base_dir / path;
}

inline RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read manifest: " + path);
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in, nullptr, true, true);  // allow comments
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest is not valid JSON: " + path + ": " +
                      e.what());
  }
  if (!obj.is_object()) throw ConfigError("manifest must be a JSON object");

  RunManifest m;
  m.base_dir = std::filesystem::absolute(std::filesystem::path(path))
                   .parent_path();

  if (!obj.contains("template_version") ||
      !obj["template_version"].is_string()) {
    throw ConfigError("manifest missing 'template_version'");
  }
  m.template_version = obj["template_version"].get<std::string>();
  if (m.template_version != kTemplateVersion) {
    throw ConfigError("manifest pins template_version '" +
                      m.template_version + "' but this build ships '" +
                      std::string(kTemplateVersion) + "'");
  }

  if (!obj.contains("output_dir") || !obj["output_dir"].is_string()) {
    throw ConfigError("manifest missing 'output_dir'");
  }
  m.output_dir = obj["output_dir"].get<std::string>();

  if (!obj.contains("datasets") || !obj["datasets"].is_object() ||
      obj["datasets"].empty()) {
    throw ConfigError("manifest needs a non-empty 'datasets' object");
  }
  for (auto it = obj["datasets"].begin(); it != obj["datasets"].end(); ++it) {
    auto pole = parse_pole(it.key());
    if (!pole) throw ConfigError("unknown pole '" + it.key() + "'");
    const auto& d = it.value();
    DatasetConfig cfg;
    if (!d.contains("path") || !d["path"].is_string()) {
      throw ConfigError("dataset '" + it.key() + "' missing 'path'");
    }
    cfg.path = d["path"].get<std::string>();
    if (!d.contains("sidecar") || !d["sidecar"].is_string()) {
      throw ConfigError("dataset '" + it.key() + "' missing 'sidecar'");
    }
    cfg.sidecar = d["sidecar"].get<std::string>();
    if (!d.contains("fewshot") || !d["fewshot"].is_array() ||
        d["fewshot"].size() != 3) {
      throw ConfigError("dataset '" + it.key() +
                        "' needs a 'fewshot' array of exactly 3 ids");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!d["fewshot"][i].is_string()) {
        throw ConfigError("dataset '" + it.key() + "' fewshot ids must be "
                          "strings");
      }
      cfg.fewshot[i] = d["fewshot"][i].get<std::string>();
    }
    m.datasets[*pole] = std::move(cfg);
  }

  if (!obj.contains("endpoints") || !obj["endpoints"].is_array() ||
      obj["endpoints"].empty()) {
    throw ConfigError("manifest needs a non-empty 'endpoints' array");
  }
  std::map<std::string, bool> model_ids;
  for (const auto& e : obj["endpoints"]) {
    EndpointConfig cfg;
    cfg.kind = e.value("kind", "");
    if (cfg.kind != "http" && cfg.kind != "mock") {
      throw ConfigError("endpoint kind must be 'http' or 'mock'");
    }
    if (!e.contains("model_id") || !e["model_id"].is_string()) {
      throw ConfigError("endpoint missing 'model_id'");
    }
    cfg.model_id = e["model_id"].get<std::string>();
    if (!model_ids.emplace(cfg.model_id, true).second) {
      throw ConfigError("duplicate endpoint model_id '" + cfg.model_id + "'");
    }
    if (cfg.kind == "http") {
      if (!e.contains("base_url") || !e["base_url"].is_string()) {
        throw ConfigError("http endpoint '" + cfg.model_id +
                          "' missing 'base_url'");
      }
      cfg.http.base_url = e["base_url"].get<std::string>();
      cfg.http.model_id = cfg.model_id;
      cfg.http.auth_env = e.value("auth_env", "");
      cfg.http.timeout_s = e.value("timeout_s", 120.0);
      cfg.http.max_parallel = e.value("max_parallel", 1);
      if (cfg.http.max_parallel < 1) {
        throw ConfigError("endpoint '" + cfg.model_id +
                          "': max_parallel must be >= 1");
      }
    } else {
      if (!e.contains("fixture") || !e["fixture"].is_string()) {
        throw ConfigError("mock endpoint '" + cfg.model_id +
                          "' missing 'fixture'");
      }
      cfg.fixture = e["fixture"].get<std::string>();
      cfg.http.max_parallel = e.value("max_parallel", 1);
    }
    m.endpoints.push_back(std::move(cfg));
  }

  if (!obj.contains("methods") || !obj["methods"].is_array() ||
      obj["methods"].empty()) {
    throw ConfigError("manifest needs a non-empty 'methods' array");
  }
  for (const auto& name : obj["methods"]) {
    if (!name.is_string()) throw ConfigError("method names must be strings");
    auto method = parse_method(name.get<std::string>());
    if (!method) {
      throw ConfigError("unknown method '" + name.get<std::string>() + "'");
    }
    for (auto existing : m.methods) {
      if (existing == *method) {
        throw ConfigError("method '" + name.get<std::string>() +
                          "' listed twice");
      }
    }
    m.methods.push_back(*method);
  }

  if (obj.contains("params")) {
    const auto& p = obj["params"];
    m.params.temperature = p.value("temperature", 0.7);
    m.params.n_samples = p.value("n_samples", 5);
    m.params.max_rationale_tokens = p.value("max_rationale_tokens", 512);
    if (p.contains("seed")) m.params.seed = p["seed"].get<long>();
    if (m.params.n_samples < 1) {
      throw ConfigError("params.n_samples must be >= 1");
    }
    if (m.params.max_rationale_tokens < 1) {
      throw ConfigError("params.max_rationale_tokens must be >= 1");
    }
    if (m.params.temperature < 0.0) {
      throw ConfigError("params.temperature must be >= 0");
    }
  }

  if (obj.contains("extraction_mode")) {
    auto mode = parse_extraction_mode(obj["extraction_mode"].get<std::string>());
    if (!mode) {
      throw ConfigError("extraction_mode must be 'strict' or 'lenient'");
    }
    m.extraction_mode = *mode;
  }

  if (obj.contains("orientation_device")) {
    auto dev =
        parse_orientation_device(obj["orientation_device"].get<std::string>());
    if (!dev) {
      throw ConfigError(
          "orientation_device must be 'antithesis' or 'antanagoge'");
    }
    m.templates.orientation_device = *dev;
  }

  if (obj.contains("direction")) {
    auto dir = parse_direction(obj["direction"].get<std::string>());
    if (!dir) throw ConfigError("direction must be 'forward' or 'reversed'");
    m.direction = *dir;
  }

  return m;
}

// Short content hash naming the run directory: any change to what would be
// asked of a model lands the run in a fresh directory.
inline std::string manifest_hash(const RunManifest& m) {
  nlohmann::json obj;
  auto& datasets = obj["datasets"] = nlohmann::json::object();
  for (const auto& [pole, cfg] : m.datasets) {
    datasets[std::string(pole_name(pole))] = {
        {"path", cfg.path},
        {"sidecar", cfg.sidecar},
        {"fewshot", cfg.fewshot},
    };
  }
  auto& endpoints = obj["endpoints"] = nlohmann::json::array();
  for (const auto& e : m.endpoints) {
    endpoints.push_back({{"kind", e.kind},
                         {"model_id", e.model_id},
                         {"base_url", e.http.base_url},
                         {"fixture", e.fixture}});
  }
  auto& methods = obj["methods"] = nlohmann::json::array();
  for (auto method : m.methods) {
    methods.push_back(std::string(method_name(method)));
  }
  obj["params"] = {
      {"temperature", m.params.temperature},
      {"n_samples", m.params.n_samples},
      {"max_rationale_tokens", m.params.max_rationale_tokens},
      {"seed", m.params.seed ? nlohmann::json(*m.params.seed)
                             : nlohmann::json(nullptr)},
  };
  obj["extraction_mode"] =
      std::string(extraction_mode_name(m.extraction_mode));
  obj["orientation_device"] =
      std::string(orientation_device_name(m.templates.orientation_device));
  obj["direction"] = std::string(direction_name(m.direction));
  obj["template_version"] = m.template_version;
  return sha256_hex(obj.dump()).substr(0, 12);
}

}  // namespace semshift
