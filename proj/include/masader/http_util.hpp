#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace masader::http {

using Headers = std::vector<std::pair<std::string, std::string>>;

struct Response {
  int status = 0;
  std::string body;
  std::string error;  // transport failure; empty when a response arrived

  bool ok() const { return error.empty() && status >= 200 && status < 300; }
};

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // path and query, at least "/"
};

// Throws ConfigError for anything that is not an http(s) URL.
Url split_url(std::string_view url);
bool is_http_url(std::string_view location);

Response get(const std::string& url, std::chrono::milliseconds timeout, const Headers& headers = {});
Response post(const std::string& url, const std::string& body, const std::string& content_type,
              const Headers& headers, std::chrono::milliseconds timeout);

// Percent-encodes everything outside RFC 3986 unreserved characters.
std::string url_encode(std::string_view text);

}  // namespace masader::http
