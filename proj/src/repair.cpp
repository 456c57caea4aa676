#include "flakyfix/repair.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "flakyfix/error.hpp"
#include "flakyfix/hashing.hpp"
#include "flakyfix/random.hpp"

namespace flakyfix {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

// Prose around code tends to end in sentence punctuation; code lines end in
// one of a handful of delimiters or open with an annotation/comment/brace.
bool plausible_java(std::string_view line) {
  const auto t = trim(line);
  if (t.empty()) return false;
  if (starts_with(t, "@") || starts_with(t, "}") || starts_with(t, "//") || starts_with(t, "/*") ||
      starts_with(t, "*")) {
    return true;
  }
  return std::string_view(";{}(),").find(t.back()) != std::string_view::npos;
}

void write_atomically(const fs::path& path, const std::string& data) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << data;
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string_view prompt_kind_name(PromptKind k) {
  switch (k) {
    case PromptKind::Bare: return "bare";
    case PromptKind::Labeled: return "labeled";
    case PromptKind::InContext: return "incontext";
  }
  return "bare";
}

std::optional<PromptKind> parse_prompt_kind(std::string_view text) {
  if (text == "bare") return PromptKind::Bare;
  if (text == "labeled") return PromptKind::Labeled;
  if (text == "incontext" || text == "in_context" || text == "in-context") return PromptKind::InContext;
  return std::nullopt;
}

void PromptSpec::validate() const {
  if (kind != PromptKind::Bare && !labels) {
    throw Error(fmt::format("{} prompt requires fix category labels", prompt_kind_name(kind)));
  }
  if (kind == PromptKind::InContext && examples.empty()) throw Error("in-context prompt requires examples");
}

std::string build_prompt(const PromptSpec& spec) {
  spec.validate();
  if (spec.kind == PromptKind::Bare) {
    return "This test case is Flaky: " + spec.flaky_code +
           ".\nJust Provide the fixed code of this test case only to make it non-flaky. "
           "Do not provide any other text description.";
  }
  std::string out = "This test case is Flaky: " + spec.flaky_code +
                    "\nThis test can be fixed by changing the following information in the code: " +
                    spec.labels->display_names() +
                    "\nJust Provide the full fixed code of this test case only without any other text description.";
  if (spec.kind == PromptKind::Labeled) return out;
  out += "\nHere are some Flaky tests examples, their fixes and fix category labels:\n";
  for (std::size_t i = 0; i < spec.examples.size(); ++i) {
    const auto& ex = spec.examples[i];
    out += fmt::format("Example {}:\nFlaky test:\n{}\nFixed test:\n{}\nFix category labels: {}\n", i + 1,
                       ex.flaky_code, ex.fixed_code, ex.labels.display_names());
  }
  return out;
}

std::vector<PromptExample> select_incontext_examples(const Corpus& corpus, FixCategory category, std::size_t n,
                                                     std::uint64_t seed, const std::set<std::string>& exclude) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& r = corpus[i];
    if (r.fixed_code && r.known_labels && r.known_labels->contains(category) && !exclude.contains(r.id)) {
      candidates.push_back(i);
    }
  }
  if (candidates.size() < n) {
    throw Error(fmt::format("category {}: {} in-context candidates, {} needed", category_id(category),
                            candidates.size(), n));
  }
  Rng rng(seed);
  // Partial Fisher-Yates: the first n slots are the sample, in draw order.
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(candidates[i], candidates[i + uniform_index(rng, candidates.size() - i)]);
  }
  std::vector<PromptExample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = corpus[candidates[i]];
    out.push_back({r.id, r.flaky_code, *r.fixed_code, *r.known_labels});
  }
  return out;
}

std::optional<FixCategory> IncontextPlan::primary_category(const TestRecord& r) {
  if (!r.known_labels) return std::nullopt;
  return r.known_labels->categories().front();
}

bool IncontextPlan::evaluable(const TestRecord& r) const {
  const auto cat = primary_category(r);
  return cat && !excluded_ids.contains(r.id) && examples.contains(*cat);
}

IncontextPlan plan_incontext(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  IncontextPlan plan;
  for (FixCategory c : kAllCategories) {
    try {
      auto ex = select_incontext_examples(corpus, c, n, derive_seed(seed, category_id(c)), plan.excluded_ids);
      for (const auto& e : ex) plan.excluded_ids.insert(e.record_id);
      plan.examples.emplace(c, std::move(ex));
    } catch (const Error&) {
      plan.skipped.push_back(c);
    }
  }
  return plan;
}

// --- transport ------------------------------------------------------------------

HttpChatTransport::HttpChatTransport(ClientFactory factory, std::string api_key)
    : factory_(std::move(factory)), api_key_(std::move(api_key)) {}

std::string HttpChatTransport::request_body(const ChatRequest& request) {
  const json body = {{"model", request.model},
                     {"temperature", request.temperature},
                     {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})}};
  return body.dump();
}

std::optional<std::string> HttpChatTransport::parse_content(const std::string& body) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  const auto ptr = json::json_pointer("/choices/0/message/content");
  if (!j.contains(ptr) || !j.at(ptr).is_string()) return std::nullopt;
  return j.at(ptr).get<std::string>();
}

ChatReply HttpChatTransport::complete(const ChatRequest& request) {
  auto client = factory_();
  const HttpResponse resp = client->post_json("/v1/chat/completions", request_body(request), api_key_);
  ChatReply reply{resp.status, {}, resp.error};
  if (resp.status == 200) {
    auto content = parse_content(resp.body);
    if (!content) throw Error("malformed chat completion response: " + resp.body.substr(0, 200));
    reply.content = std::move(*content);
  } else if (resp.status != 0) {
    reply.error = resp.body.substr(0, 200);
  }
  return reply;
}

ChatReply CallbackTransport::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  return fn_(request);
}

std::string replay_key(const ChatRequest& request) {
  return sha256_hex(fmt::format("{}\n{:.17g}\n{}", request.model, request.temperature, request.prompt));
}

ChatReply ReplayTransport::complete(const ChatRequest& request) {
  const fs::path path = fs::path(dir_) / (replay_key(request) + ".json");
  if (!fs::exists(path)) {
    throw Error(fmt::format("no recorded response for prompt {} in {}", replay_key(request), dir_));
  }
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.contains("raw_response")) throw Error("corrupt replay file " + path.string());
  return {200, j.at("raw_response").get<std::string>(), {}};
}

RecordingTransport::RecordingTransport(ChatTransport& inner, std::string dir) : inner_(inner), dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

ChatReply RecordingTransport::complete(const ChatRequest& request) {
  ChatReply reply = inner_.complete(request);
  if (reply.status == 200) {
    const json j = {{"model", request.model},
                    {"temperature", request.temperature},
                    {"prompt", request.prompt},
                    {"raw_response", reply.content}};
    std::lock_guard lock(mu_);
    write_atomically(fs::path(dir_) / (replay_key(request) + ".json"), j.dump(1));
  }
  return reply;
}

// --- pacing --------------------------------------------------------------------------

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

Clock real_clock() {
  return [] { return std::chrono::steady_clock::now(); };
}

std::chrono::milliseconds RetryPolicy::delay_after(int attempt) const {
  const double ms = static_cast<double>(base_delay.count()) * std::pow(factor, attempt - 1);
  return std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(ms)));
}

TokenBucket::TokenBucket(double rate, double burst, Clock clock, Sleeper sleeper)
    : rate_(rate), burst_(burst), tokens_(burst), clock_(std::move(clock)), sleeper_(std::move(sleeper)) {
  if (!(rate > 0) || !(burst >= 1)) throw Error("token bucket needs rate > 0 and burst >= 1");
  last_ = clock_();
}

void TokenBucket::refill() {
  const auto now = clock_();
  const double elapsed = std::chrono::duration<double>(now - last_).count();
  last_ = now;
  tokens_ = std::min(burst_, tokens_ + elapsed * rate_);
}

void TokenBucket::acquire() {
  std::unique_lock lock(mu_);
  refill();
  while (tokens_ < 1.0) {
    const auto wait = std::chrono::milliseconds(static_cast<std::int64_t>(std::ceil((1.0 - tokens_) / rate_ * 1000)));
    sleeper_(wait);
    refill();
  }
  tokens_ -= 1.0;
}

// --- requests -----------------------------------------------------------------------

std::string extract_code(std::string_view raw) {
  const auto lines = split_lines(raw);
  std::optional<std::size_t> open;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (starts_with(trim(lines[i]), "```")) {
      open = i;
      break;
    }
  }
  std::vector<std::string> body;
  if (open) {
    for (std::size_t i = *open + 1; i < lines.size() && !starts_with(trim(lines[i]), "```"); ++i) {
      body.push_back(lines[i]);
    }
  } else {
    std::size_t first = 0, last = lines.size();
    while (first < last && !plausible_java(lines[first])) ++first;
    while (last > first && !plausible_java(lines[last - 1])) --last;
    body.assign(lines.begin() + static_cast<std::ptrdiff_t>(first), lines.begin() + static_cast<std::ptrdiff_t>(last));
  }
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (i) out.push_back('\n');
    out += body[i];
  }
  if (trim(out).empty()) throw Error("no extractable code in response");
  return out;
}

RepairResult request_fix(const std::string& record_id, const PromptSpec& spec, ChatTransport& transport,
                         const RepairConfig& config, const Sleeper& sleeper, TokenBucket* limiter) {
  if (config.retry.max_attempts < 1) throw Error("retry policy needs at least one attempt");
  const ChatRequest request{config.model, config.temperature, build_prompt(spec)};
  const auto start = std::chrono::steady_clock::now();
  std::string last_failure;
  for (int attempt = 1; attempt <= config.retry.max_attempts; ++attempt) {
    if (limiter) limiter->acquire();
    ChatReply reply;
    try {
      reply = transport.complete(request);
    } catch (const Error& e) {
      throw Error(fmt::format("record {}: {}", record_id, e.what()));
    }
    if (reply.status == 200) {
      if (trim(reply.content).empty()) throw Error(fmt::format("record {}: empty completion", record_id));
      RepairResult r;
      r.record_id = record_id;
      r.prompt_kind = spec.kind;
      r.raw_response = reply.content;
      try {
        r.generated_code = extract_code(reply.content);
      } catch (const Error& e) {
        throw Error(fmt::format("record {}: {}", record_id, e.what()));
      }
      r.model_id = config.model;
      r.attempt_count = attempt;
      r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                         .count();
      return r;
    }
    if (reply.status == 401 || reply.status == 403) {
      throw Error(fmt::format("record {}: auth failure (HTTP {}); check FLAKYFIX_API_KEY", record_id, reply.status));
    }
    const bool retryable = reply.status == 0 || reply.status == 429 || reply.status >= 500;
    last_failure = reply.status == 0 ? "transport error: " + reply.error : fmt::format("HTTP {}", reply.status);
    if (!retryable) throw Error(fmt::format("record {}: {} {}", record_id, last_failure, reply.error));
    if (attempt < config.retry.max_attempts) sleeper(config.retry.delay_after(attempt));
  }
  throw Error(fmt::format("record {}: exhausted retries after {} attempts (last: {})", record_id,
                          config.retry.max_attempts, last_failure));
}

RepairBatch run_repairs(const std::vector<RepairJob>& jobs, ChatTransport& transport, const RepairConfig& config,
                        const Sleeper& sleeper, TokenBucket* limiter) {
  RepairBatch batch;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        auto r = request_fix(jobs[i].record_id, jobs[i].spec, transport, config, sleeper, limiter);
        std::lock_guard lock(mu);
        batch.results.push_back(std::move(r));
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        batch.failures.push_back({jobs[i].record_id, e.what()});
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::max<std::size_t>(1, std::min(config.concurrency, jobs.size()));
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  std::sort(batch.results.begin(), batch.results.end(),
            [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
  std::sort(batch.failures.begin(), batch.failures.end(),
            [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
  return batch;
}

std::vector<RepairJob> make_jobs(const Corpus& corpus, PromptKind kind, const IncontextPlan* plan) {
  if (kind == PromptKind::InContext && !plan) throw Error("in-context jobs need an example plan");
  std::vector<RepairJob> jobs;
  for (const auto& r : corpus) {
    PromptSpec spec;
    spec.kind = kind;
    spec.flaky_code = r.flaky_code;
    if (kind != PromptKind::Bare) {
      if (!r.known_labels) continue;
      spec.labels = r.known_labels;
    }
    if (kind == PromptKind::InContext) {
      if (!plan->evaluable(r)) continue;
      spec.examples = plan->examples.at(*IncontextPlan::primary_category(r));
    }
    jobs.push_back({r.id, std::move(spec)});
  }
  return jobs;
}

std::string results_to_jsonl(const std::vector<RepairResult>& results) {
  std::string out;
  for (const auto& r : results) {
    const json j = {{"record_id", r.record_id},       {"prompt_kind", prompt_kind_name(r.prompt_kind)},
                    {"generated_code", r.generated_code}, {"raw_response", r.raw_response},
                    {"model_id", r.model_id},         {"latency_ms", r.latency_ms},
                    {"attempt_count", r.attempt_count}};
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<RepairResult> parse_results_jsonl(std::string_view text) {
  std::vector<RepairResult> out;
  std::size_t line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      RepairResult r;
      r.record_id = j.at("record_id").get<std::string>();
      const auto kind = parse_prompt_kind(j.at("prompt_kind").get<std::string>());
      if (!kind) throw Error("unknown prompt_kind");
      r.prompt_kind = *kind;
      r.generated_code = j.at("generated_code").get<std::string>();
      r.raw_response = j.value("raw_response", "");
      r.model_id = j.value("model_id", "");
      r.latency_ms = j.value("latency_ms", std::int64_t{0});
      r.attempt_count = j.value("attempt_count", 0);
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error(fmt::format("results line {}: {}", line_no, e.what()));
    }
  }
  return out;
}

std::vector<RepairResult> load_results(const std::string& path) { return parse_results_jsonl(read_file(path)); }

}  // namespace flakyfix
