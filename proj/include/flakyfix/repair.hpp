#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flakyfix/category.hpp"
#include "flakyfix/corpus.hpp"
#include "flakyfix/http.hpp"

namespace flakyfix {

enum class PromptKind { Bare, Labeled, InContext };

/// "bare", "labeled", "incontext".
std::string_view prompt_kind_name(PromptKind k);
/// Also accepts "in_context" and "in-context".
std::optional<PromptKind> parse_prompt_kind(std::string_view text);

struct PromptExample {
  std::string record_id;
  std::string flaky_code;
  std::string fixed_code;
  LabelSet labels;
};

struct PromptSpec {
  PromptKind kind = PromptKind::Bare;
  std::string flaky_code;
  std::optional<LabelSet> labels;
  std::vector<PromptExample> examples;

  /// Throws flakyfix::Error when labels or examples are missing for the kind.
  void validate() const;
};

std::string build_prompt(const PromptSpec& spec);

/// Uniform sample without replacement of `n` fixed records labeled with
/// `category`, in selection order. Throws when fewer than `n` qualify.
std::vector<PromptExample> select_incontext_examples(const Corpus& corpus, FixCategory category,
                                                     std::size_t n, std::uint64_t seed,
                                                     const std::set<std::string>& exclude = {});

// Per-category example pools for an in-context run. Categories with fewer
// than n candidates get no pool; their records are not evaluable.
struct IncontextPlan {
  std::map<FixCategory, std::vector<PromptExample>> examples;
  std::set<std::string> excluded_ids;
  std::vector<FixCategory> skipped;

  /// Category whose examples a record is prompted with: its first label in
  /// canonical order.
  static std::optional<FixCategory> primary_category(const TestRecord& r);
  bool evaluable(const TestRecord& r) const;
};

IncontextPlan plan_incontext(const Corpus& corpus, std::size_t n, std::uint64_t seed);

// --- transport ---------------------------------------------------------------

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  std::string prompt;
};

struct ChatReply {
  int status = 0;  // 0: transport failure
  std::string content;
  std::string error;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  /// Must be safe to call from several threads.
  virtual ChatReply complete(const ChatRequest& request) = 0;
};

/// OpenAI-style chat completions over HTTP.
class HttpChatTransport final : public ChatTransport {
 public:
  using ClientFactory = std::function<std::unique_ptr<HttpClient>()>;
  HttpChatTransport(ClientFactory factory, std::string api_key);
  ChatReply complete(const ChatRequest& request) override;

  static std::string request_body(const ChatRequest& request);
  /// choices[0].message.content, or nullopt when the body lacks it.
  static std::optional<std::string> parse_content(const std::string& body);

 private:
  ClientFactory factory_;
  std::string api_key_;
};

class CallbackTransport final : public ChatTransport {
 public:
  explicit CallbackTransport(std::function<ChatReply(const ChatRequest&)> fn) : fn_(std::move(fn)) {}
  ChatReply complete(const ChatRequest& request) override;

 private:
  std::mutex mu_;
  std::function<ChatReply(const ChatRequest&)> fn_;
};

/// Key of a recorded exchange: sha256 over model, temperature and prompt.
std::string replay_key(const ChatRequest& request);

/// Serves responses previously stored by RecordingTransport. A prompt with
/// no recording is a domain error.
class ReplayTransport final : public ChatTransport {
 public:
  explicit ReplayTransport(std::string dir) : dir_(std::move(dir)) {}
  ChatReply complete(const ChatRequest& request) override;

 private:
  std::string dir_;
};

/// Forwards to `inner` and stores every successful reply under `dir`.
class RecordingTransport final : public ChatTransport {
 public:
  RecordingTransport(ChatTransport& inner, std::string dir);
  ChatReply complete(const ChatRequest& request) override;

 private:
  ChatTransport& inner_;
  std::string dir_;
  std::mutex mu_;
};

// --- pacing --------------------------------------------------------------------

using Sleeper = std::function<void(std::chrono::milliseconds)>;
using Clock = std::function<std::chrono::steady_clock::time_point()>;

Sleeper real_sleeper();
Clock real_clock();

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;

  /// Delay after failed attempt `attempt` (1-based).
  std::chrono::milliseconds delay_after(int attempt) const;
};

class TokenBucket {
 public:
  /// `rate` tokens per second, holding at most `burst`.
  TokenBucket(double rate, double burst, Clock clock = real_clock(), Sleeper sleeper = real_sleeper());
  void acquire();

 private:
  void refill();
  double rate_;
  double burst_;
  double tokens_;
  Clock clock_;
  Sleeper sleeper_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

// --- requests --------------------------------------------------------------------

struct RepairConfig {
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;
  RetryPolicy retry;
  std::size_t concurrency = 2;
  double rate_per_second = 3.0;
  double burst = 2.0;
};

struct RepairResult {
  std::string record_id;
  PromptKind prompt_kind = PromptKind::Bare;
  std::string generated_code;
  std::string raw_response;
  std::string model_id;
  std::int64_t latency_ms = 0;
  int attempt_count = 0;
};

/// Code from an LLM response: the first fenced block's interior if any,
/// else the response minus leading/trailing lines that do not look like Java.
std::string extract_code(std::string_view raw_response);

/// One prompt with retries. Throws flakyfix::Error on an auth failure,
/// exhausted retries, an empty completion or a non-retryable status.
RepairResult request_fix(const std::string& record_id, const PromptSpec& spec, ChatTransport& transport,
                         const RepairConfig& config, const Sleeper& sleeper = real_sleeper(),
                         TokenBucket* limiter = nullptr);

struct RepairJob {
  std::string record_id;
  PromptSpec spec;
};

struct RepairFailure {
  std::string record_id;
  std::string message;
};

struct RepairBatch {
  std::vector<RepairResult> results;    // sorted by record id
  std::vector<RepairFailure> failures;  // sorted by record id
};

RepairBatch run_repairs(const std::vector<RepairJob>& jobs, ChatTransport& transport, const RepairConfig& config,
                        const Sleeper& sleeper = real_sleeper(), TokenBucket* limiter = nullptr);

/// Jobs for every fixed-or-unfixed record with the labels each kind needs.
/// Records without labels are skipped for labeled/in-context kinds, as are
/// in-context records outside the plan.
std::vector<RepairJob> make_jobs(const Corpus& corpus, PromptKind kind, const IncontextPlan* plan);

std::string results_to_jsonl(const std::vector<RepairResult>& results);
std::vector<RepairResult> parse_results_jsonl(std::string_view text);
std::vector<RepairResult> load_results(const std::string& path);

}  // namespace flakyfix
