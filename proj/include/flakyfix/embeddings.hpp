#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "flakyfix/http.hpp"

namespace flakyfix {

struct Embedding {
  std::vector<double> values;
  std::string provider_id;

  std::size_t dim() const { return values.size(); }
};

struct TokenBudget {
  std::size_t max_tokens = 510;  // tail tokens beyond this are dropped

  /// Throws flakyfix::Error when max_tokens < 16.
  void validate() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  /// Embeds already-budgeted code.
  virtual Embedding embed_text(std::string_view code) = 0;
};

// Signed feature hashing of lexer tokens followed by L2 normalization. A
// function of the token multiset only.
class LocalHashingProvider final : public EmbeddingProvider {
 public:
  explicit LocalHashingProvider(std::size_t dim = 768);
  std::string id() const override;
  std::size_t dim() const override { return dim_; }
  Embedding embed_text(std::string_view code) override;

 private:
  std::size_t dim_;
};

struct RemoteEmbeddingConfig {
  std::string base_url;
  std::string model;
  std::size_t dim = 768;
  std::chrono::milliseconds timeout{30000};
  int retries = 2;             // extra attempts after the first
  int max_concurrency = 4;
  std::string api_key_env = "FLAKYFIX_EMBED_KEY";
};

// POST <base>/embed {"input","model"} -> {"embedding":[...]}.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteEmbeddingConfig config);
  RemoteEmbeddingProvider(RemoteEmbeddingConfig config, std::unique_ptr<HttpClient> client);
  std::string id() const override;
  std::size_t dim() const override { return config_.dim; }
  /// Thread-safe; at most max_concurrency requests are in flight.
  Embedding embed_text(std::string_view code) override;

 private:
  RemoteEmbeddingConfig config_;
  std::unique_ptr<HttpClient> client_;
  std::counting_semaphore<1024> slots_;
};

struct EmbedResult {
  Embedding embedding;
  bool truncated = false;
  std::size_t token_count = 0;  // before truncation
};

/// Truncates to the budget (tail drop, cut at the end of the last kept
/// token), embeds, and checks the dimension against the provider.
EmbedResult embed(std::string_view code, EmbeddingProvider& provider, const TokenBudget& budget = {});

/// Prefix of `code` that ends with its `max_tokens`-th token.
std::string truncate_to_tokens(std::string_view code, std::size_t max_tokens, bool* truncated = nullptr);

/// Throws flakyfix::Error on a dimension mismatch or a zero vector.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);
double cosine_similarity(const Embedding& a, const Embedding& b);

}  // namespace flakyfix
