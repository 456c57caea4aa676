#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flakyfix/codebleu.hpp"
#include "flakyfix/embeddings.hpp"
#include "flakyfix/fewshot.hpp"
#include "flakyfix/repair.hpp"

namespace flakyfix {

// Tool configuration. The file form is JSON with one object per section:
//
//   {"seed": 42,
//    "labeler":    {"rules": "rules.json", "min_literal_length": 8},
//    "embeddings": {"provider": "local", "dim": 768, "max_tokens": 510,
//                   "base_url": "...", "model": "...", "timeout_ms": 30000},
//    "train":      {"method": "fsl", "learning_rate": 1e-5, "epochs": 50, ...},
//    "repair":     {"base_url": "...", "model": "gpt-3.5-turbo", "temperature": 0,
//                   "concurrency": 2, "rate_per_second": 3, "max_attempts": 5,
//                   "base_delay_ms": 1000, "timeout_ms": 60000, "examples": 5},
//    "metrics":    {"alpha": 0.25, "beta": 0.25, "gamma": 0.25, "delta": 0.25,
//                   "keyword_weight": 5},
//    "stats":      {"bootstrap_iterations": 10000, "level": 0.95}}
//
// Every key is optional. Secrets come from the environment only.
struct Config {
  std::uint64_t seed = 42;

  std::string rules_path;  // empty: bundled rules
  std::optional<std::size_t> min_literal_length;

  std::string provider = "local";  // "local" or "remote"
  std::size_t embedding_dim = 768;
  std::size_t max_tokens = 510;
  RemoteEmbeddingConfig remote;

  std::string method = "fsl";  // "fsl" or "fnn"
  TrainConfig train;

  std::string endpoint = "https://api.openai.com";
  long request_timeout_ms = 60000;
  std::size_t incontext_examples = 5;
  RepairConfig repair;

  CodeBleuOptions metrics;

  std::size_t bootstrap_iterations = 10000;
  double level = 0.95;

  /// Throws flakyfix::UsageError on unknown sections/keys or bad values.
  static Config parse(const std::string& json_text);
  static Config load(const std::string& path);
  std::string to_json() const;
  void validate() const;
};

std::unique_ptr<EmbeddingProvider> make_provider(const Config& config);

// Record of one CLI invocation, written next to its main output.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::string config_json;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> inputs;  // path -> sha256
  std::vector<std::string> outputs;
  std::string version;
  std::string started_at;
  std::string finished_at;
  int exit_code = 0;
  std::string error;

  std::string to_json() const;
};

/// Writes to a temporary sibling and renames it into place.
void write_file_atomically(const std::string& path, const std::string& data);
void write_manifest(const RunManifest& manifest, const std::string& path);

/// ISO-8601 UTC with seconds, e.g. 2024-01-31T12:00:00Z.
std::string utc_timestamp();

std::string read_text_file(const std::string& path);

std::string_view tool_version();

}  // namespace flakyfix
