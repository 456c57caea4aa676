#include "flakyfix/config.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "flakyfix/error.hpp"

#ifndef FLAKYFIX_VERSION
#define FLAKYFIX_VERSION "0.0.0"
#endif

namespace flakyfix {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw UsageError(fmt::format("config: section '{}' must be an object", section));
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw UsageError(fmt::format("config: unknown key '{}' in section '{}'", key, section));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) target = obj.at(key).get<T>();
}

}  // namespace

Config Config::parse(const std::string& json_text) {
  Config c;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  check_keys(j, "<top>", {"seed", "labeler", "embeddings", "train", "repair", "metrics", "stats"});
  try {
    read(j, "seed", c.seed);
    if (j.contains("labeler")) {
      const auto& s = j["labeler"];
      check_keys(s, "labeler", {"rules", "min_literal_length"});
      read(s, "rules", c.rules_path);
      if (s.contains("min_literal_length")) c.min_literal_length = s["min_literal_length"].get<std::size_t>();
    }
    if (j.contains("embeddings")) {
      const auto& s = j["embeddings"];
      check_keys(s, "embeddings", {"provider", "dim", "max_tokens", "base_url", "model", "timeout_ms", "retries",
                                   "max_concurrency"});
      read(s, "provider", c.provider);
      read(s, "dim", c.embedding_dim);
      read(s, "max_tokens", c.max_tokens);
      read(s, "base_url", c.remote.base_url);
      read(s, "model", c.remote.model);
      read(s, "retries", c.remote.retries);
      read(s, "max_concurrency", c.remote.max_concurrency);
      if (s.contains("timeout_ms")) c.remote.timeout = std::chrono::milliseconds(s["timeout_ms"].get<long>());
    }
    if (j.contains("train")) {
      const auto& s = j["train"];
      check_keys(s, "train", {"method", "learning_rate", "batch_size", "margin", "epochs", "patience", "dropout",
                              "projection_dim", "hidden_dim", "per_anchor", "support_k", "weight_decay"});
      read(s, "method", c.method);
      read(s, "learning_rate", c.train.learning_rate);
      read(s, "batch_size", c.train.batch_size);
      read(s, "margin", c.train.margin);
      read(s, "epochs", c.train.epochs);
      read(s, "patience", c.train.patience);
      read(s, "dropout", c.train.dropout);
      read(s, "projection_dim", c.train.projection_dim);
      read(s, "hidden_dim", c.train.hidden_dim);
      read(s, "per_anchor", c.train.per_anchor);
      read(s, "support_k", c.train.support_k);
      read(s, "weight_decay", c.train.optimizer.weight_decay);
    }
    if (j.contains("repair")) {
      const auto& s = j["repair"];
      check_keys(s, "repair", {"base_url", "model", "temperature", "concurrency", "rate_per_second", "burst",
                               "max_attempts", "base_delay_ms", "timeout_ms", "examples"});
      read(s, "base_url", c.endpoint);
      read(s, "model", c.repair.model);
      read(s, "temperature", c.repair.temperature);
      read(s, "concurrency", c.repair.concurrency);
      read(s, "rate_per_second", c.repair.rate_per_second);
      read(s, "burst", c.repair.burst);
      read(s, "max_attempts", c.repair.retry.max_attempts);
      if (s.contains("base_delay_ms")) c.repair.retry.base_delay = std::chrono::milliseconds(s["base_delay_ms"].get<long>());
      read(s, "timeout_ms", c.request_timeout_ms);
      read(s, "examples", c.incontext_examples);
    }
    if (j.contains("metrics")) {
      const auto& s = j["metrics"];
      check_keys(s, "metrics", {"alpha", "beta", "gamma", "delta", "keyword_weight"});
      read(s, "alpha", c.metrics.weights.alpha);
      read(s, "beta", c.metrics.weights.beta);
      read(s, "gamma", c.metrics.weights.gamma);
      read(s, "delta", c.metrics.weights.delta);
      read(s, "keyword_weight", c.metrics.keyword_weight);
    }
    if (j.contains("stats")) {
      const auto& s = j["stats"];
      check_keys(s, "stats", {"bootstrap_iterations", "level"});
      read(s, "bootstrap_iterations", c.bootstrap_iterations);
      read(s, "level", c.level);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path);
  return parse({std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

void Config::validate() const {
  if (provider != "local" && provider != "remote") throw UsageError("config: provider must be local or remote");
  if (method != "fsl" && method != "fnn") throw UsageError("config: method must be fsl or fnn");
  if (embedding_dim == 0) throw UsageError("config: embedding dim must be positive");
  if (!(level > 0 && level < 1)) throw UsageError("config: level must lie in (0, 1)");
  if (bootstrap_iterations == 0) throw UsageError("config: bootstrap_iterations must be positive");
  if (repair.concurrency == 0) throw UsageError("config: concurrency must be positive");
  if (repair.retry.max_attempts < 1) throw UsageError("config: max_attempts must be at least 1");
  try {
    validate_weights(metrics.weights);
    train.validate();
    TokenBudget{max_tokens}.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

std::string Config::to_json() const {
  const json j = {
      {"seed", seed},
      {"labeler", {{"rules", rules_path}, {"min_literal_length", min_literal_length ? json(*min_literal_length) : json(nullptr)}}},
      {"embeddings",
       {{"provider", provider},
        {"dim", embedding_dim},
        {"max_tokens", max_tokens},
        {"base_url", remote.base_url},
        {"model", remote.model},
        {"timeout_ms", remote.timeout.count()},
        {"retries", remote.retries},
        {"max_concurrency", remote.max_concurrency}}},
      {"train",
       {{"method", method},
        {"learning_rate", train.learning_rate},
        {"batch_size", train.batch_size},
        {"margin", train.margin},
        {"epochs", train.epochs},
        {"patience", train.patience},
        {"dropout", train.dropout},
        {"projection_dim", train.projection_dim},
        {"hidden_dim", train.hidden_dim},
        {"per_anchor", train.per_anchor},
        {"support_k", train.support_k},
        {"weight_decay", train.optimizer.weight_decay}}},
      {"repair",
       {{"base_url", endpoint},
        {"model", repair.model},
        {"temperature", repair.temperature},
        {"concurrency", repair.concurrency},
        {"rate_per_second", repair.rate_per_second},
        {"burst", repair.burst},
        {"max_attempts", repair.retry.max_attempts},
        {"base_delay_ms", repair.retry.base_delay.count()},
        {"timeout_ms", request_timeout_ms},
        {"examples", incontext_examples}}},
      {"metrics",
       {{"alpha", metrics.weights.alpha},
        {"beta", metrics.weights.beta},
        {"gamma", metrics.weights.gamma},
        {"delta", metrics.weights.delta},
        {"keyword_weight", metrics.keyword_weight}}},
      {"stats", {{"bootstrap_iterations", bootstrap_iterations}, {"level", level}}}};
  return j.dump(1);
}

std::unique_ptr<EmbeddingProvider> make_provider(const Config& config) {
  if (config.provider == "local") return std::make_unique<LocalHashingProvider>(config.embedding_dim);
  RemoteEmbeddingConfig rc = config.remote;
  rc.dim = config.embedding_dim;
  if (rc.base_url.empty()) throw UsageError("remote embedding provider needs embeddings.base_url");
  return std::make_unique<RemoteEmbeddingProvider>(rc);
}

std::string RunManifest::to_json() const {
  json cfg = config_json.empty() ? json(nullptr) : json::parse(config_json);
  const json j = {{"command", command},   {"arguments", arguments},   {"config", cfg},
                  {"seeds", seeds},       {"inputs", inputs},         {"outputs", outputs},
                  {"version", version},   {"started_at", started_at}, {"finished_at", finished_at},
                  {"exit_code", exit_code}, {"error", error}};
  return j.dump(1);
}

void write_file_atomically(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << data;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  write_file_atomically(path, manifest.to_json());
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string_view tool_version() { return FLAKYFIX_VERSION; }

}  // namespace flakyfix
