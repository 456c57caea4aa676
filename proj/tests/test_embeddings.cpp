#include <gtest/gtest.h>

#include <cmath>
#include <mutex>

#include <json.hpp>

#include "flakyfix/embeddings.hpp"
#include "flakyfix/error.hpp"

using namespace flakyfix;

namespace {

struct FakeHttp final : HttpClient {
  std::vector<HttpResponse> script;
  std::vector<std::string> paths, bodies;
  std::mutex mu;

  HttpResponse post_json(const std::string& path, const std::string& body, const std::string&) override {
    std::lock_guard lock(mu);
    paths.push_back(path);
    bodies.push_back(body);
    if (script.empty()) return {0, "", "script exhausted"};
    auto r = script.front();
    script.erase(script.begin());
    return r;
  }
};

std::string vector_body(std::size_t dim, double v = 0.5) {
  return nlohmann::json{{"embedding", std::vector<double>(dim, v)}}.dump();
}

RemoteEmbeddingConfig remote_config(std::size_t dim) {
  RemoteEmbeddingConfig c;
  c.base_url = "http://unused";
  c.model = "m";
  c.dim = dim;
  return c;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST(LocalEmbedding, DeterministicAndNormalized) {
  LocalHashingProvider p(64);
  const auto a = embed("void t() { assertEquals(1, x); }", p);
  const auto b = embed("void t() { assertEquals(1, x); }", p);
  EXPECT_EQ(a.embedding.values, b.embedding.values);
  EXPECT_EQ(a.embedding.dim(), 64u);
  EXPECT_NEAR(norm(a.embedding.values), 1.0, 1e-12);
  EXPECT_EQ(a.embedding.provider_id, p.id());
}

TEST(LocalEmbedding, DependsOnTokensNotLayout) {
  LocalHashingProvider p(64);
  EXPECT_EQ(embed("a(b);", p).embedding.values, embed("a ( b ) ;  // c", p).embedding.values);
  EXPECT_NE(embed("a(b);", p).embedding.values, embed("a(c);", p).embedding.values);
}

TEST(LocalEmbedding, SimilarCodeIsCloser) {
  LocalHashingProvider p(256);
  const auto base = embed("Map<String, Integer> m = new HashMap<>(); m.put(k, v); assertEquals(v, m.get(k));", p);
  const auto near = embed("Map<String, Integer> m = new LinkedHashMap<>(); m.put(k, v); assertEquals(v, m.get(k));", p);
  const auto far = embed("Thread.sleep(1000); server.stop(); latch.await();", p);
  EXPECT_GT(cosine_similarity(base.embedding, near.embedding), cosine_similarity(base.embedding, far.embedding));
}

TEST(LocalEmbedding, RejectsEmptyInput) {
  LocalHashingProvider p(16);
  EXPECT_THROW(embed("", p), Error);
  EXPECT_THROW(embed("// comment only", p), Error);
  EXPECT_THROW(LocalHashingProvider(0), Error);
}

TEST(Budget, TruncatesAtTokenBoundary) {
  bool cut = false;
  EXPECT_EQ(truncate_to_tokens("a  b  c  d", 2, &cut), "a  b");
  EXPECT_TRUE(cut);
  EXPECT_EQ(truncate_to_tokens("a b", 5, &cut), "a b");
  EXPECT_FALSE(cut);

  std::string long_code;
  for (int i = 0; i < 600; ++i) long_code += "x" + std::to_string(i) + " ";
  LocalHashingProvider p(32);
  const auto r = embed(long_code, p, TokenBudget{510});
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.token_count, 600u);
  EXPECT_EQ(r.embedding.values, embed(truncate_to_tokens(long_code, 510), p).embedding.values);
  EXPECT_THROW(embed("x", p, TokenBudget{8}), Error);
}

TEST(Cosine, Errors) {
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 2}), 0.0);
  EXPECT_NEAR(cosine_similarity(std::vector<double>{1, 1}, std::vector<double>{2, 2}), 1.0, 1e-15);
  EXPECT_THROW(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{1, 0, 0}), Error);
  EXPECT_THROW(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}), Error);
}

TEST(RemoteEmbedding, ParsesVectorAndSendsModel) {
  auto http = std::make_unique<FakeHttp>();
  auto* raw = http.get();
  raw->script.push_back({200, vector_body(4), ""});
  RemoteEmbeddingProvider p(remote_config(4), std::move(http));
  const auto r = embed("x = 1;", p);
  EXPECT_EQ(r.embedding.values, std::vector<double>(4, 0.5));
  EXPECT_EQ(r.embedding.provider_id, "remote:m:4");
  ASSERT_EQ(raw->paths.size(), 1u);
  EXPECT_EQ(raw->paths[0], "/embed");
  const auto sent = nlohmann::json::parse(raw->bodies[0]);
  EXPECT_EQ(sent["input"], "x = 1;");
  EXPECT_EQ(sent["model"], "m");
}

TEST(RemoteEmbedding, RetriesServerErrorsThenSucceeds) {
  auto http = std::make_unique<FakeHttp>();
  auto* raw = http.get();
  raw->script = {{503, "", ""}, {0, "", "refused"}, {200, vector_body(3), ""}};
  RemoteEmbeddingProvider p(remote_config(3), std::move(http));
  EXPECT_NO_THROW(embed("x;", p));
  EXPECT_EQ(raw->paths.size(), 3u);
}

TEST(RemoteEmbedding, FailuresAreErrors) {
  {
    auto http = std::make_unique<FakeHttp>();
    http->script = {{200, vector_body(5), ""}};
    RemoteEmbeddingProvider p(remote_config(4), std::move(http));
    EXPECT_THROW(embed("x;", p), Error);  // dimension mismatch
  }
  {
    auto http = std::make_unique<FakeHttp>();
    http->script = {{400, "bad", ""}};
    RemoteEmbeddingProvider p(remote_config(4), std::move(http));
    EXPECT_THROW(embed("x;", p), Error);
  }
  {
    auto http = std::make_unique<FakeHttp>();
    http->script = {{200, "{\"nope\":1}", ""}};
    RemoteEmbeddingProvider p(remote_config(4), std::move(http));
    EXPECT_THROW(embed("x;", p), Error);
  }
  {
    auto http = std::make_unique<FakeHttp>();
    RemoteEmbeddingProvider p(remote_config(4), std::move(http));
    EXPECT_THROW(embed("x;", p), Error);  // every attempt fails to connect
  }
}
