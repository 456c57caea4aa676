#include "flakyfix/http.hpp"

#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "flakyfix/error.hpp"

namespace flakyfix {
namespace {

class HttplibClient final : public HttpClient {
 public:
  HttplibClient(std::string scheme_host_port, std::string prefix, std::chrono::milliseconds timeout)
      : client_(scheme_host_port), prefix_(std::move(prefix)) {
    const auto secs = timeout.count() / 1000;
    const auto usecs = (timeout.count() % 1000) * 1000;
    client_.set_connection_timeout(secs, usecs);
    client_.set_read_timeout(secs, usecs);
    client_.set_write_timeout(secs, usecs);
  }

  HttpResponse post_json(const std::string& path, const std::string& body,
                         const std::string& bearer_token) override {
    httplib::Headers headers;
    if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);
    auto res = client_.Post(prefix_ + path, headers, body, "application/json");
    if (!res) return {0, "", httplib::to_string(res.error())};
    return {res->status, res->body, ""};
  }

 private:
  httplib::Client client_;
  std::string prefix_;
};

}  // namespace

std::unique_ptr<HttpClient> make_http_client(const std::string& base_url,
                                             std::chrono::milliseconds timeout) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) throw Error("base URL needs a scheme: " + base_url);
  const auto path_start = base_url.find('/', scheme_end + 3);
  std::string host = base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return std::make_unique<HttplibClient>(host, prefix, timeout);
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

}  // namespace flakyfix
