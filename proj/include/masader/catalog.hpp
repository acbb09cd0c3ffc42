#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "masader/cluster_model.hpp"
#include "masader/schema.hpp"

namespace masader {

enum class SourceFormat { Csv, Json };

std::string_view to_string(SourceFormat format);
SourceFormat parse_source_format(std::string_view text);
// ".json" selects Json, anything else Csv.
SourceFormat format_from_path(std::string_view path);

struct Diagnostic {
  enum class Kind { Coercion, HeaderMismatch, RaggedRow, DuplicateColumn };

  Kind kind = Kind::Coercion;
  std::optional<std::size_t> row;  // 0-based record index; absent for header problems
  std::string feature;
  std::string message;
};

std::string_view to_string(Diagnostic::Kind kind);
std::string describe(const Diagnostic& d);

struct IngestResult {
  std::vector<DatasetRecord> records;
  std::vector<Diagnostic> diagnostics;
};

// Turns a raw table into typed records, one per data row, in source order.
// Cells that cannot be coerced become Missing and produce a diagnostic; a
// schema feature absent from the header is Missing in every row. Only an
// unparseable table throws (SourceUnreadable).
IngestResult ingest(std::string_view raw, const Schema& schema, SourceFormat format);

// Coerces one textual cell. Returns nullopt when the cell is not valid for
// the feature's kind.
std::optional<Value> coerce_cell(std::string_view cell, const Feature& feature);

using TagIndex = std::vector<std::vector<TagValue>>;

TagIndex build_tag_index(const Schema& schema, std::span<const DatasetRecord> records);

// Immutable, versioned view of the whole catalogue.
class CatalogSnapshot {
 public:
  struct Meta {
    std::uint64_t version = 1;
    std::int64_t built_at = 0;  // unix seconds, UTC
    std::string checksum;       // of the source bytes the snapshot was built from
  };

  // Throws ValidationError when records violate the schema or are not
  // numbered 0..n-1 in order.
  CatalogSnapshot(Meta meta, Schema schema, std::vector<DatasetRecord> records,
                  std::optional<ClusterModel> clusters = std::nullopt);

  std::uint64_t version() const noexcept { return meta_.version; }
  std::int64_t built_at() const noexcept { return meta_.built_at; }
  const std::string& checksum() const noexcept { return meta_.checksum; }
  const Schema& schema() const noexcept { return schema_; }
  const std::vector<DatasetRecord>& records() const noexcept { return records_; }
  const TagIndex& tag_index() const noexcept { return tags_; }
  const std::optional<ClusterModel>& clusters() const noexcept { return clusters_; }

 private:
  Meta meta_;
  Schema schema_;
  std::vector<DatasetRecord> records_;
  TagIndex tags_;
  std::optional<ClusterModel> clusters_;
};

std::vector<std::string> schema_names(const CatalogSnapshot& snapshot);

// Throws OutOfRange.
const DatasetRecord& get_record(const CatalogSnapshot& snapshot, std::int64_t index);

using TagMap = std::vector<std::pair<std::string, std::vector<TagValue>>>;

// Sorted distinct values per requested feature, in request order. An empty
// request means every feature. Throws UnknownFeature.
TagMap unique_tags(const CatalogSnapshot& snapshot, std::span<const std::string> features);

// Restricts records to the requested features (schema order). An empty
// request keeps every feature. Throws UnknownFeature.
std::vector<PartialRecord> project_features(const Schema& schema,
                                            std::span<const DatasetRecord* const> records,
                                            std::span<const std::string> features);

using FeatureCounts = std::vector<std::pair<TagValue, std::size_t>>;

// Value histogram ordered by count descending, then value ascending. TextList
// elements count individually.
FeatureCounts feature_counts(const CatalogSnapshot& snapshot, std::string_view feature);

// Splits a comma separated parameter, trimming whitespace and dropping empty
// entries.
std::vector<std::string> split_feature_list(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace masader
