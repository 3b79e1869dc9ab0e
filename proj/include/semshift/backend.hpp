#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "semshift/cache.hpp"
#include "semshift/dataset.hpp"
#include "semshift/errors.hpp"
#include "semshift/extraction.hpp"
#include "semshift/prompting.hpp"
#include "semshift/version.hpp"

namespace semshift {

struct GenerationParams {
  double temperature = 0.7;
  int n_samples = 5;
  int max_rationale_tokens = 512;
  std::optional<long> seed;  // per-sample request seed is seed + sample_index
};

struct ChatMessage {
  std::string role;  // "user" | "assistant"
  std::string content;
};

// Carried alongside every request so scripted backends can key on it.
struct SampleContext {
  std::string item_id;
  PromptMethod method = PromptMethod::FewShot;
  int sample_index = 0;
  int phase = 1;    // 1 = rationale, 2 = answer
  int attempt = 1;  // phase-2 re-ask counter
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  int max_tokens = 0;
  std::optional<long> seed;
  SampleContext context;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string chat(const ChatRequest& request) = 0;
  virtual const std::string& model_id() const = 0;
};

// ---------------------------------------------------------------------------
// Deterministic mock oracle. Responses are scripted by (item_id, method,
// sample_index); "*" wildcards the method, -1 wildcards the sample index.
// Thread-safe: the script table is immutable after setup, the call counter
// is atomic.

struct MockScript {
  std::string rationale;
  std::string answer;
};

class MockOracle : public ChatBackend {
 public:
  explicit MockOracle(std::string model_id)
      : model_id_(std::move(model_id)) {}

  void add(const std::string& item_id, const std::string& method,
           int sample_index, MockScript script) {
    scripts_[key(item_id, method, sample_index)] = std::move(script);
  }

  void set_default(MockScript script) { default_ = std::move(script); }

  std::string chat(const ChatRequest& request) override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    const auto& ctx = request.context;
    const MockScript* s = lookup(ctx);
    if (!s) {
      throw FixtureMiss("no scripted response for item '" + ctx.item_id +
                        "' method '" + std::string(method_name(ctx.method)) +
                        "' sample " + std::to_string(ctx.sample_index));
    }
    return ctx.phase == 1 ? s->rationale : s->answer;
  }

  const std::string& model_id() const override { return model_id_; }

  long calls() const { return calls_.load(std::memory_order_relaxed); }

 private:
  static std::string key(const std::string& item, const std::string& method,
                         int sample) {
    return item + "\x1f" + method + "\x1f" + std::to_string(sample);
  }

  const MockScript* lookup(const SampleContext& ctx) const {
    std::string m{method_name(ctx.method)};
    for (const auto& k :
         {key(ctx.item_id, m, ctx.sample_index), key(ctx.item_id, m, -1),
          key(ctx.item_id, "*", ctx.sample_index), key(ctx.item_id, "*", -1)}) {
      auto it = scripts_.find(k);
      if (it != scripts_.end()) return &it->second;
    }
    if (default_) return &*default_;
    return nullptr;
  }

  std::string model_id_;
  std::map<std::string, MockScript> scripts_;
  std::optional<MockScript> default_;
  std::atomic<long> calls_{0};
};

// Mock fixture file: JSONL of {item_id, method, sample_index, rationale,
// answer} entries, or {"default": {rationale, answer}}.
inline std::unique_ptr<MockOracle> load_mock_fixture(
    const std::string& path, const std::string& model_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read mock fixture: " + path);
  auto oracle = std::make_unique<MockOracle>(model_id);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("bad mock fixture line " + std::to_string(line_no) +
                        " in " + path);
    }
    if (obj.contains("default")) {
      const auto& d = obj["default"];
      oracle->set_default(MockScript{d.value("rationale", ""),
                                     d.value("answer", "")});
      continue;
    }
    oracle->add(obj.at("item_id").get<std::string>(),
                obj.value("method", "*"), obj.value("sample_index", -1),
                MockScript{obj.value("rationale", ""),
                           obj.at("answer").get<std::string>()});
  }
  return oracle;
}

// ---------------------------------------------------------------------------
// Cache keys

inline std::string cache_key(const std::string& model_id,
                             const std::string& prompt_text,
                             const GenerationParams& params,
                             int sample_index) {
  std::string buf;
  buf.reserve(prompt_text.size() + 128);
  auto put = [&buf](std::string_view tag, std::string_view value) {
    buf += tag;
    buf += '=';
    buf += std::to_string(value.size());
    buf += ':';
    buf += value;
    buf += ';';
  };
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.6g", params.temperature);
  put("model", model_id);
  put("prompt", prompt_text);
  put("temperature", tmp);
  put("max_tokens", std::to_string(params.max_rationale_tokens));
  put("sample", std::to_string(sample_index));
  put("template", kTemplateVersion);
  put("seed", params.seed ? std::to_string(*params.seed) : "none");
  return sha256_hex(buf);
}

// ---------------------------------------------------------------------------
// Two-phase sampling

struct SampleRecord {
  StoredRecord stored;
  bool from_cache = false;
  double latency_ms = 0.0;
};

struct CompletionOptions {
  ExtractionMode mode = ExtractionMode::Lenient;
  int reask_limit = 3;  // total phase-2 attempts
};

namespace detail {

inline std::string answer_request_text(Pole pole) {
  return "Based on the previous reasoning give your final answer. Respond "
         "with exactly one of the following words: " +
         quoted_label_list(pole) + ".\nA:";
}

inline std::string retry_request_text(Pole pole) {
  return "That is not a valid answer. Respond with exactly one of the "
         "following words: " +
         quoted_label_list(pole) + ".\nA:";
}

// Answer turns are tiny; the budget only has to fit one label plus noise.
inline constexpr int kAnswerMaxTokens = 16;

}  // namespace detail

// Draws one sample: a free-form rationale turn, then a primed answer turn
// re-asked up to opts.reask_limit times until a label parses. A still-
// unparseable answer is recorded as a ParseError, which is a result, not a
// failure: it is cached and scored like any other record. Transport errors
// propagate and leave nothing behind.
inline SampleRecord complete_sample(ChatBackend& backend,
                                    const PromptBundle& bundle,
                                    const GenerationParams& params,
                                    int sample_index,
                                    RecordLog* log = nullptr,
                                    const CompletionOptions& opts = {}) {
  if (sample_index < 0 || sample_index >= params.n_samples) {
    throw DataError(DataError::Kind::BadArgument,
                    "sample_index " + std::to_string(sample_index) +
                        " out of range for n_samples " +
                        std::to_string(params.n_samples));
  }

  const std::string prompt = full_prompt_text(bundle);
  const std::string key =
      cache_key(backend.model_id(), prompt, params, sample_index);
  if (log) {
    if (auto hit = log->find(key)) {
      return SampleRecord{*hit, true, 0.0};
    }
  }

  auto started = std::chrono::steady_clock::now();
  std::optional<long> seed;
  if (params.seed) seed = *params.seed + sample_index;

  SampleContext ctx{bundle.item_id, bundle.method, sample_index, 1, 1};

  ChatRequest phase1;
  phase1.messages = {{"user", prompt}};
  phase1.temperature = params.temperature;
  phase1.max_tokens = params.max_rationale_tokens;
  phase1.seed = seed;
  phase1.context = ctx;
  std::string rationale = backend.chat(phase1);

  std::vector<ChatMessage> convo = {{"user", prompt},
                                    {"assistant", rationale},
                                    {"user",
                                     detail::answer_request_text(bundle.pole)}};

  std::string answer;
  std::optional<std::string> label;
  std::optional<ParseError> error;
  for (int attempt = 1; attempt <= opts.reask_limit; ++attempt) {
    ChatRequest phase2;
    phase2.messages = convo;
    phase2.temperature = params.temperature;
    phase2.max_tokens = detail::kAnswerMaxTokens;
    phase2.seed = seed;
    phase2.context = ctx;
    phase2.context.phase = 2;
    phase2.context.attempt = attempt;
    answer = backend.chat(phase2);

    auto res = extract_answer(bundle.answer_prefix + answer, bundle.pole,
                              opts.mode);
    if (std::holds_alternative<std::string>(res)) {
      label = std::get<std::string>(res);
      error.reset();
      break;
    }
    error = std::get<ParseError>(res);
    convo.push_back({"assistant", answer});
    convo.push_back({"user", detail::retry_request_text(bundle.pole)});
  }

  SampleRecord out;
  out.stored = StoredRecord{key,      bundle.item_id, backend.model_id(),
                            bundle.method, sample_index, rationale,
                            answer,   label,          error};
  out.from_cache = false;
  out.latency_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  if (log) log->append(out.stored);
  return out;
}

// ---------------------------------------------------------------------------
// Whole-run driver

struct TransportFailure {
  std::string item_id;
  int sample_index = 0;
  std::string reason;
};

struct RunResult {
  Pole pole = Pole::Dimension;
  PromptMethod method = PromptMethod::FewShot;
  std::string model_id;
  int n_samples = 0;
  std::vector<SampleRecord> records;  // cell order; a prefix if incomplete
  bool complete = false;
  std::vector<TransportFailure> failures;
  std::size_t n_cache_hits = 0;
  std::size_t n_executed = 0;
};

struct RunTaskOptions {
  CompletionOptions completion;
  TemplateOptions templates;
  int max_parallel = 1;
};

// Runs method x dataset x n_samples. Cells are (item, sample) pairs walked
// item-major. Missing cells are sampled by up to max_parallel workers, but
// records are appended to the log strictly in cell order; on the first
// transport failure the remaining cells' results are discarded (a resumed
// run recomputes them), which keeps every log an exact prefix of the
// uninterrupted run's log.
inline RunResult run_task(ChatBackend& backend, const Dataset& dataset,
                          PromptMethod method, const GenerationParams& params,
                          RecordLog* log = nullptr,
                          const RunTaskOptions& opts = {}) {
  if (dataset.items.empty()) {
    throw ConfigError("run_task: dataset has no evaluation items");
  }
  if (dataset.fewshot_pool.size() != 3) {
    throw ConfigError("run_task: dataset has no 3-shot pool selected");
  }
  if (params.n_samples < 1) {
    throw ConfigError("run_task: n_samples must be >= 1");
  }

  std::vector<PromptBundle> bundles;
  bundles.reserve(dataset.items.size());
  for (const auto& item : dataset.items) {
    bundles.push_back(
        render_prompt(item, method, dataset.fewshot_pool, opts.templates));
  }

  struct Cell {
    std::size_t bundle_index;
    int sample_index;
    std::string key;
  };
  std::vector<Cell> cells;
  cells.reserve(bundles.size() * static_cast<std::size_t>(params.n_samples));
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    const std::string prompt = full_prompt_text(bundles[i]);
    for (int k = 0; k < params.n_samples; ++k) {
      cells.push_back(
          {i, k, cache_key(backend.model_id(), prompt, params, k)});
    }
  }

  RunResult result;
  result.pole = dataset.pole;
  result.method = method;
  result.model_id = backend.model_id();
  result.n_samples = params.n_samples;

  using Slot = std::variant<std::monostate, SampleRecord, TransportFailure>;
  std::vector<Slot> slots(cells.size());
  std::vector<std::size_t> pending;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (log && log->contains(cells[c].key)) continue;
    pending.push_back(c);
  }

  if (!pending.empty()) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        std::size_t w = next.fetch_add(1, std::memory_order_relaxed);
        if (w >= pending.size()) return;
        std::size_t c = pending[w];
        const Cell& cell = cells[c];
        try {
          // Workers never touch the log; the ordered writer below does.
          slots[c] = complete_sample(backend, bundles[cell.bundle_index],
                                     params, cell.sample_index, nullptr,
                                     opts.completion);
        } catch (const TransportError& e) {
          slots[c] = TransportFailure{bundles[cell.bundle_index].item_id,
                                      cell.sample_index, e.what()};
        }
      }
    };
    std::size_t n_threads = std::min<std::size_t>(
        std::max(1, opts.max_parallel), pending.size());
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  bool stopped = false;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (std::holds_alternative<TransportFailure>(slots[c])) {
      result.failures.push_back(std::get<TransportFailure>(slots[c]));
      stopped = true;
      continue;
    }
    if (stopped) continue;
    if (std::holds_alternative<SampleRecord>(slots[c])) {
      auto& rec = std::get<SampleRecord>(slots[c]);
      if (log) log->append(rec.stored);
      ++result.n_executed;
      result.records.push_back(std::move(rec));
    } else {
      std::optional<StoredRecord> hit;
      if (log) hit = log->find(cells[c].key);
      if (!hit) {
        // Unreachable by construction; guard anyway.
        throw std::logic_error("run_task: cell neither computed nor cached");
      }
      ++result.n_cache_hits;
      result.records.push_back(SampleRecord{*hit, true, 0.0});
    }
  }
  result.complete = !stopped && result.records.size() == cells.size();
  return result;
}

}  // namespace semshift
