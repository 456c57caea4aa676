#pragma once

#include <chrono>
#include <memory>
#include <string>

namespace flakyfix {

struct HttpResponse {
  int status = 0;      // 0 when the request never got a response
  std::string body;
  std::string error;   // transport error text when status == 0
};

class HttpClient {
 public:
  virtual ~HttpClient() = default;
  /// POSTs a JSON body to `path` (relative to the client's base URL).
  virtual HttpResponse post_json(const std::string& path, const std::string& body,
                                 const std::string& bearer_token) = 0;
};

/// cpp-httplib backed client for "http://host:port[/prefix]" or https URLs.
std::unique_ptr<HttpClient> make_http_client(const std::string& base_url,
                                             std::chrono::milliseconds timeout);

/// Value of an environment variable or empty.
std::string env_or_empty(const char* name);

}  // namespace flakyfix
