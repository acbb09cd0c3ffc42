#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "masader/matrix.hpp"
#include "masader/schema.hpp"

namespace masader {

// Name, Description and Abstract joined by single spaces; missing or absent
// features are skipped.
std::string record_text(const Schema& schema, const DatasetRecord& record);

// Lowercased (ASCII) tokens split on ASCII whitespace and punctuation.
// Bytes >= 0x80 are token characters, so UTF-8 words stay intact.
std::vector<std::string> embedding_tokens(std::string_view text);

// Seeded 64-bit FNV-1a with a splitmix64 finalizer. Stable across platforms.
std::uint64_t stable_hash64(std::string_view bytes, std::uint64_t seed);

// Signed feature hashing, L2-normalized. Text with no tokens maps to the zero
// vector.
std::vector<double> local_embed(std::string_view text, std::size_t dim, std::uint64_t seed);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dimension() const = 0;
  // One row per text. Throws ProviderFailure.
  virtual Matrix embed_batch(std::span<const std::string> texts) = 0;
  // Provenance tag recorded in the cluster model.
  virtual std::string name() const = 0;
};

class LocalEmbeddingProvider final : public EmbeddingProvider {
 public:
  // Throws ConfigError when dim < 2.
  LocalEmbeddingProvider(std::size_t dim, std::uint64_t seed);

  std::size_t dimension() const override { return dim_; }
  Matrix embed_batch(std::span<const std::string> texts) override;
  std::string name() const override { return "local"; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

struct RemoteProviderConfig {
  std::string url;
  std::string token;  // sent as a bearer token when non-empty
  std::size_t dim = 384;
  std::chrono::milliseconds timeout{30'000};
  int retries = 3;
  std::chrono::milliseconds backoff{500};  // doubled after every failed attempt
  std::size_t batch_size = 64;
};

// POSTs a JSON array of strings and expects a JSON array of float arrays.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(RemoteProviderConfig config);

  std::size_t dimension() const override { return config_.dim; }
  Matrix embed_batch(std::span<const std::string> texts) override;
  std::string name() const override { return "remote"; }

 private:
  std::vector<std::vector<double>> post_batch(std::span<const std::string> texts);

  RemoteProviderConfig config_;
};

}  // namespace masader
