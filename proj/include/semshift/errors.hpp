#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semshift {

// Configuration problems (bad manifest, unreadable file, version pin
// mismatch). CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data-level problems (bad ids, mismatched item sets). Exit code 1.
class DataError : public std::runtime_error {
 public:
  enum class Kind {
    BadArgument,
    IdNotFound,
    DuplicateId,
    MissingGloss,
    RationaleMismatch,
    PoleMismatch,
    ItemSetMismatch,
    EmptyJudgments,
  };

  DataError(Kind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// One malformed line in a JSONL file.
struct SchemaIssue {
  std::size_t line = 0;  // 1-based physical line number
  std::string reason;
};

// Aggregate of every malformed line found in one file; nothing is loaded.
class SchemaLoadError : public std::runtime_error {
 public:
  SchemaLoadError(std::string path, std::vector<SchemaIssue> issues)
      : std::runtime_error(path + ": " + std::to_string(issues.size()) +
                           " invalid record(s)"),
        path_(std::move(path)),
        issues_(std::move(issues)) {}

  const std::string& path() const { return path_; }
  const std::vector<SchemaIssue>& issues() const { return issues_; }

 private:
  std::string path_;
  std::vector<SchemaIssue> issues_;
};

// A run that cannot be scored: missing records, missing log files. Exit 3.
class IncompleteRunError : public std::runtime_error {
 public:
  explicit IncompleteRunError(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Transport layer. Never persisted; the cell stays pending.
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

class EndpointUnreachable : public TransportError {
 public:
  explicit EndpointUnreachable(const std::string& msg) : TransportError(msg) {}
};

class TimeoutError : public TransportError {
 public:
  explicit TimeoutError(const std::string& msg) : TransportError(msg) {}
};

// Mock oracle has no scripted response for a requested key.
class FixtureMiss : public std::runtime_error {
 public:
  explicit FixtureMiss(const std::string& msg) : std::runtime_error(msg) {}
};

// Process exit contract shared by the CLI and the test suites.
inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIncomplete = 3;

}  // namespace semshift
