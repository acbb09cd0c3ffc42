#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

namespace masader {

enum class FeatureKind { Text, Integer, TextList };

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::Text;
  // Element separator for TextList cells.
  std::string delimiter = ",";

  bool operator==(const Feature&) const = default;
};

// Ordered feature list. Declaration order is preserved and names are unique.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Feature> features);

  const std::vector<Feature>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  const Feature& operator[](std::size_t i) const { return features_[i]; }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws UnknownFeature.
  std::size_t index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  // {"features": [{"name": "Year", "kind": "integer"}, ...]}
  static Schema from_json(const nlohmann::json& doc);
  static Schema load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  bool operator==(const Schema& other) const { return features_ == other.features_; }

 private:
  std::vector<Feature> features_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

struct Missing {
  bool operator==(const Missing&) const = default;
};

using TextList = std::vector<std::string>;
using Value = std::variant<Missing, std::string, std::int64_t, TextList>;

inline bool is_missing(const Value& v) { return std::holds_alternative<Missing>(v); }
bool value_matches(const Value& v, FeatureKind kind);

// One dataset. values[i] belongs to schema feature i.
struct DatasetRecord {
  std::size_t index = 0;
  std::vector<Value> values;

  bool operator==(const DatasetRecord&) const = default;
};

struct Field {
  std::string name;
  Value value;

  bool operator==(const Field&) const = default;
};

// A record restricted to a subset of features, still in schema order.
struct PartialRecord {
  std::size_t index = 0;
  std::vector<Field> fields;

  bool operator==(const PartialRecord&) const = default;
};

// Distinct observed value of a feature. Integers for Integer features,
// strings for Text and TextList features.
using TagValue = std::variant<std::int64_t, std::string>;

nlohmann::ordered_json to_json(const Value& v);
nlohmann::ordered_json to_json(const TagValue& v);
nlohmann::ordered_json to_json(const Schema& schema, const DatasetRecord& record);
nlohmann::ordered_json to_json(const PartialRecord& record);

}  // namespace masader
