#include "masader/http_util.hpp"

#include <httplib.h>

#include "masader/error.hpp"

namespace masader::http {

bool is_http_url(std::string_view location) {
  return location.starts_with("http://") || location.starts_with("https://");
}

Url split_url(std::string_view url) {
  if (!is_http_url(url)) {
    throw Error(ErrorCode::ConfigError, "not an http(s) URL: " + std::string(url));
  }
  auto scheme_end = url.find("://") + 3;
  auto slash = url.find('/', scheme_end);
  Url out;
  if (slash == std::string_view::npos) {
    out.origin = std::string(url);
    out.path = "/";
  } else {
    out.origin = std::string(url.substr(0, slash));
    out.path = std::string(url.substr(slash));
  }
  if (out.origin.size() == scheme_end) {
    throw Error(ErrorCode::ConfigError, "URL has no host: " + std::string(url));
  }
  return out;
}

namespace {

httplib::Client make_client(const Url& u, std::chrono::milliseconds timeout) {
  httplib::Client client(u.origin);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);
  return client;
}

httplib::Headers to_headers(const Headers& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

Response convert(const httplib::Result& res) {
  Response out;
  if (!res) {
    out.error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  return out;
}

}  // namespace

Response get(const std::string& url, std::chrono::milliseconds timeout, const Headers& headers) {
  auto u = split_url(url);
  auto client = make_client(u, timeout);
  return convert(client.Get(u.path, to_headers(headers)));
}

Response post(const std::string& url, const std::string& body, const std::string& content_type,
              const Headers& headers, std::chrono::milliseconds timeout) {
  auto u = split_url(url);
  auto client = make_client(u, timeout);
  return convert(client.Post(u.path, to_headers(headers), body, content_type));
}

std::string url_encode(std::string_view text) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

}  // namespace masader::http
