#include "masader/schema.hpp"

#include <fstream>

#include "masader/error.hpp"

namespace masader {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Text: return "text";
    case FeatureKind::Integer: return "integer";
    case FeatureKind::TextList: return "text_list";
  }
  return "text";
}

FeatureKind parse_feature_kind(std::string_view text) {
  if (text == "text") return FeatureKind::Text;
  if (text == "integer") return FeatureKind::Integer;
  if (text == "text_list") return FeatureKind::TextList;
  throw Error(ErrorCode::ConfigError, "unknown feature kind '" + std::string(text) +
                                          "' (expected text, integer or text_list)");
}

Schema::Schema(std::vector<Feature> features) : features_(std::move(features)) {
  for (std::size_t i = 0; i < features_.size(); ++i) {
    const auto& f = features_[i];
    if (f.name.empty()) {
      throw Error(ErrorCode::ConfigError, "feature " + std::to_string(i) + " has an empty name");
    }
    if (f.kind == FeatureKind::TextList && f.delimiter.empty()) {
      throw Error(ErrorCode::ConfigError, "feature '" + f.name + "' has an empty list delimiter");
    }
    if (!by_name_.emplace(f.name, i).second) {
      throw Error(ErrorCode::ConfigError, "duplicate feature name '" + f.name + "'");
    }
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t Schema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::UnknownFeature, "unknown feature '" + std::string(name) + "'");
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.name);
  return out;
}

Schema Schema::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
    throw Error(ErrorCode::ConfigError, "schema config must be an object with a 'features' array");
  }
  std::vector<Feature> features;
  for (const auto& item : doc["features"]) {
    if (!item.is_object() || !item.contains("name") || !item["name"].is_string()) {
      throw Error(ErrorCode::ConfigError, "every schema feature needs a string 'name'");
    }
    Feature f;
    f.name = item["name"].get<std::string>();
    if (item.contains("kind")) {
      if (!item["kind"].is_string()) {
        throw Error(ErrorCode::ConfigError, "feature '" + f.name + "': 'kind' must be a string");
      }
      f.kind = parse_feature_kind(item["kind"].get<std::string>());
    }
    if (item.contains("delimiter")) {
      if (!item["delimiter"].is_string()) {
        throw Error(ErrorCode::ConfigError, "feature '" + f.name + "': 'delimiter' must be a string");
      }
      f.delimiter = item["delimiter"].get<std::string>();
    }
    features.push_back(std::move(f));
  }
  return Schema(std::move(features));
}

Schema Schema::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open schema config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "schema config " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::json Schema::to_json() const {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : features_) {
    nlohmann::json item = {{"name", f.name}, {"kind", std::string(masader::to_string(f.kind))}};
    if (f.kind == FeatureKind::TextList) item["delimiter"] = f.delimiter;
    features.push_back(std::move(item));
  }
  return {{"features", std::move(features)}};
}

bool value_matches(const Value& v, FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Text: return std::holds_alternative<std::string>(v) || is_missing(v);
    case FeatureKind::Integer: return std::holds_alternative<std::int64_t>(v) || is_missing(v);
    case FeatureKind::TextList: return std::holds_alternative<TextList>(v) || is_missing(v);
  }
  return false;
}

nlohmann::ordered_json to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Missing>) {
          return nullptr;
        } else {
          return x;
        }
      },
      v);
}

nlohmann::ordered_json to_json(const TagValue& v) {
  return std::visit([](const auto& x) -> nlohmann::ordered_json { return x; }, v);
}

nlohmann::ordered_json to_json(const Schema& schema, const DatasetRecord& record) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < schema.size(); ++i) {
    out[schema[i].name] = to_json(record.values[i]);
  }
  return out;
}

nlohmann::ordered_json to_json(const PartialRecord& record) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& field : record.fields) out[field.name] = to_json(field.value);
  return out;
}

}  // namespace masader
