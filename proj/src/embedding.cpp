#include "masader/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <thread>

#include "masader/error.hpp"
#include "masader/http_util.hpp"

namespace masader {

std::string record_text(const Schema& schema, const DatasetRecord& record) {
  std::string out;
  for (std::string_view name : {"Name", "Description", "Abstract"}) {
    auto f = schema.find(name);
    if (!f) continue;
    std::string part;
    const auto& v = record.values[*f];
    if (const auto* s = std::get_if<std::string>(&v)) {
      part = *s;
    } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
      part = std::to_string(*i);
    } else if (const auto* list = std::get_if<TextList>(&v)) {
      for (const auto& e : *list) {
        if (!part.empty()) part += ' ';
        part += e;
      }
    }
    if (part.empty()) continue;
    if (!out.empty()) out += ' ';
    out += part;
  }
  return out;
}

std::vector<std::string> embedding_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    bool separator = c < 0x80 && !std::isalnum(c);
    if (separator) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stable_hash64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ splitmix64(seed);
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return splitmix64(h);
}

std::vector<double> local_embed(std::string_view text, std::size_t dim, std::uint64_t seed) {
  std::vector<double> v(dim, 0.0);
  if (dim == 0) return v;
  for (const auto& token : embedding_tokens(text)) {
    auto h = stable_hash64(token, seed);
    v[h % dim] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm2 = 0.0;
  for (double x : v) norm2 += x * x;
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
  }
  return v;
}

LocalEmbeddingProvider::LocalEmbeddingProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim < 2) throw Error(ErrorCode::ConfigError, "embedding dimension must be at least 2");
}

Matrix LocalEmbeddingProvider::embed_batch(std::span<const std::string> texts) {
  Matrix out(texts.size(), dim_);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto v = local_embed(texts[i], dim_, seed_);
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteProviderConfig config)
    : config_(std::move(config)) {
  if (config_.url.empty()) throw Error(ErrorCode::ConfigError, "remote embedding url is empty");
  if (config_.dim < 2) throw Error(ErrorCode::ConfigError, "embedding dimension must be at least 2");
  if (config_.batch_size == 0) config_.batch_size = 1;
}

std::vector<std::vector<double>> RemoteEmbeddingProvider::post_batch(
    std::span<const std::string> texts) {
  nlohmann::json body = nlohmann::json::array();
  for (const auto& t : texts) body.push_back(t);
  std::vector<std::pair<std::string, std::string>> headers;
  if (!config_.token.empty()) headers.emplace_back("Authorization", "Bearer " + config_.token);

  std::string last_error;
  auto delay = config_.backoff;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto res = http::post(config_.url, body.dump(), "application/json", headers, config_.timeout);
    if (!res.ok()) {
      last_error = res.error.empty() ? "HTTP status " + std::to_string(res.status) : res.error;
      continue;
    }
    try {
      auto doc = nlohmann::json::parse(res.body);
      if (!doc.is_array() || doc.size() != texts.size()) {
        last_error = "response is not an array with one vector per text";
        continue;
      }
      std::vector<std::vector<double>> rows;
      rows.reserve(doc.size());
      for (const auto& item : doc) {
        auto row = item.get<std::vector<double>>();
        if (row.size() != config_.dim) {
          throw Error(ErrorCode::ProviderFailure,
                      "remote provider returned dimension " + std::to_string(row.size()) +
                          ", configured " + std::to_string(config_.dim));
        }
        rows.push_back(std::move(row));
      }
      return rows;
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed response: ") + e.what();
    }
  }
  throw Error(ErrorCode::ProviderFailure,
              "embedding request to " + config_.url + " failed after " +
                  std::to_string(config_.retries + 1) + " attempts: " + last_error);
}

Matrix RemoteEmbeddingProvider::embed_batch(std::span<const std::string> texts) {
  Matrix out(texts.size(), config_.dim);
  for (std::size_t start = 0; start < texts.size(); start += config_.batch_size) {
    auto count = std::min(config_.batch_size, texts.size() - start);
    auto rows = post_batch(texts.subspan(start, count));
    for (std::size_t i = 0; i < count; ++i) {
      std::copy(rows[i].begin(), rows[i].end(), out.row(start + i).begin());
    }
  }
  return out;
}

}  // namespace masader
