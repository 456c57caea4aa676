#include "flakyfix/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "flakyfix/error.hpp"
#include "flakyfix/hashing.hpp"
#include "flakyfix/java_lexer.hpp"

namespace flakyfix {

void TokenBudget::validate() const {
  if (max_tokens < 16) throw Error("token budget must allow at least 16 tokens");
}

LocalHashingProvider::LocalHashingProvider(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error("embedding dimension must be positive");
}

std::string LocalHashingProvider::id() const { return "local-hash-" + std::to_string(dim_); }

Embedding LocalHashingProvider::embed_text(std::string_view code) {
  const TokenSeq tokens = tokenize_java(code);
  if (tokens.empty()) throw Error("cannot embed code without tokens");
  std::vector<double> v(dim_, 0.0);
  for (const auto& t : tokens.tokens) {
    const std::uint64_t h = fnv1a64(t.text);
    const double sign = (h >> 63) ? -1.0 : 1.0;
    v[h % dim_] += sign;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw Error("embedding collapsed to the zero vector");
  for (double& x : v) x /= norm;
  return {std::move(v), id()};
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteEmbeddingConfig config)
    : RemoteEmbeddingProvider(config, make_http_client(config.base_url, config.timeout)) {}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteEmbeddingConfig config,
                                                 std::unique_ptr<HttpClient> client)
    : config_(std::move(config)),
      client_(std::move(client)),
      slots_(std::clamp(config_.max_concurrency, 1, 1024)) {
  if (config_.dim == 0) throw Error("embedding dimension must be positive");
}

std::string RemoteEmbeddingProvider::id() const {
  return "remote:" + config_.model + ":" + std::to_string(config_.dim);
}

Embedding RemoteEmbeddingProvider::embed_text(std::string_view code) {
  const nlohmann::json request = {{"input", std::string(code)}, {"model", config_.model}};
  const std::string body = request.dump();
  const std::string key = env_or_empty(config_.api_key_env.c_str());
  std::string last_error;
  for (int attempt = 0; attempt <= std::max(0, config_.retries); ++attempt) {
    HttpResponse res;
    {
      slots_.acquire();
      try {
        res = client_->post_json("/embed", body, key);
      } catch (...) {
        slots_.release();
        throw;
      }
      slots_.release();
    }
    if (res.status == 0) {
      last_error = "transport failure: " + res.error;
      continue;
    }
    if (res.status < 200 || res.status >= 300) {
      last_error = "embedding service returned HTTP " + std::to_string(res.status);
      if (res.status >= 500 || res.status == 429) continue;
      throw Error(last_error);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(res.body);
    } catch (const nlohmann::json::exception&) {
      throw Error("embedding service returned malformed JSON");
    }
    if (!j.contains("embedding") || !j["embedding"].is_array()) {
      throw Error("embedding service response lacks an 'embedding' array");
    }
    std::vector<double> values;
    for (const auto& x : j["embedding"]) {
      if (!x.is_number()) throw Error("embedding service returned a non-numeric value");
      values.push_back(x.get<double>());
    }
    if (values.size() != config_.dim) {
      throw Error("embedding dimension mismatch: provider " + id() + " declares " +
                  std::to_string(config_.dim) + ", service returned " + std::to_string(values.size()));
    }
    return {std::move(values), id()};
  }
  throw Error("embedding request failed: " + last_error);
}

std::string truncate_to_tokens(std::string_view code, std::size_t max_tokens, bool* truncated) {
  const TokenSeq tokens = tokenize_java(code);
  const bool cut = tokens.size() > max_tokens;
  if (truncated) *truncated = cut;
  if (!cut) return std::string(code);
  if (max_tokens == 0) return {};
  const Token& last = tokens.tokens[max_tokens - 1];
  return std::string(code.substr(0, last.offset + last.text.size()));
}

EmbedResult embed(std::string_view code, EmbeddingProvider& provider, const TokenBudget& budget) {
  budget.validate();
  if (code.empty()) throw Error("cannot embed empty code");
  EmbedResult out;
  out.token_count = tokenize_java(code).size();
  const std::string kept = truncate_to_tokens(code, budget.max_tokens, &out.truncated);
  out.embedding = provider.embed_text(kept);
  if (out.embedding.dim() != provider.dim()) {
    throw Error("embedding dimension mismatch for provider " + provider.id());
  }
  for (double x : out.embedding.values) {
    if (!std::isfinite(x)) throw Error("embedding contains a non-finite value");
  }
  return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("cosine_similarity: dimension mismatch");
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error("cosine_similarity: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  return cosine_similarity(a.values, b.values);
}

}  // namespace flakyfix
