#include "masader/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "masader/csv.hpp"
#include "masader/error.hpp"

namespace masader {

std::string_view to_string(SourceFormat format) {
  return format == SourceFormat::Json ? "json" : "csv";
}

SourceFormat parse_source_format(std::string_view text) {
  if (text == "csv") return SourceFormat::Csv;
  if (text == "json") return SourceFormat::Json;
  throw Error(ErrorCode::ConfigError, "unknown source format '" + std::string(text) + "'");
}

SourceFormat format_from_path(std::string_view path) {
  auto query = path.find('?');
  if (query != std::string_view::npos) path = path.substr(0, query);
  return path.ends_with(".json") ? SourceFormat::Json : SourceFormat::Csv;
}

std::string_view to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::Coercion: return "coercion";
    case Diagnostic::Kind::HeaderMismatch: return "header_mismatch";
    case Diagnostic::Kind::RaggedRow: return "ragged_row";
    case Diagnostic::Kind::DuplicateColumn: return "duplicate_column";
  }
  return "coercion";
}

std::string describe(const Diagnostic& d) {
  std::string out;
  out += d.row ? "row " + std::to_string(*d.row) : std::string("header");
  if (!d.feature.empty()) out += ", feature '" + d.feature + "'";
  out += ": ";
  out += to_string(d.kind);
  out += ": ";
  out += d.message;
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.starts_with('+')) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

TextList split_list(std::string_view cell, std::string_view delimiter) {
  TextList out;
  std::size_t start = 0;
  while (true) {
    auto pos = cell.find(delimiter, start);
    auto piece = trim(cell.substr(start, pos == std::string_view::npos ? cell.npos : pos - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + delimiter.size();
  }
  return out;
}

std::string kind_expectation(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Integer: return "an integer";
    case FeatureKind::TextList: return "a list of strings";
    case FeatureKind::Text: return "a string";
  }
  return "a value";
}

IngestResult ingest_csv(std::string_view raw, const Schema& schema) {
  auto rows = csv::parse(raw);
  if (rows.empty()) throw Error(ErrorCode::SourceUnreadable, "source has no header row");

  IngestResult result;
  const auto& header = rows.front();
  std::map<std::string, std::size_t, std::less<>> column_of;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name(trim(header[c]));
    if (!column_of.emplace(name, c).second && schema.find(name)) {
      result.diagnostics.push_back({Diagnostic::Kind::DuplicateColumn, std::nullopt, name,
                                    "column appears more than once; using the first"});
    }
  }

  std::vector<std::optional<std::size_t>> source_column(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    auto it = column_of.find(schema[f].name);
    if (it == column_of.end()) {
      result.diagnostics.push_back({Diagnostic::Kind::HeaderMismatch, std::nullopt, schema[f].name,
                                    "header has no such column; values are missing for all rows"});
    } else {
      source_column[f] = it->second;
    }
  }

  result.records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    DatasetRecord record;
    record.index = r - 1;
    record.values.resize(schema.size());
    if (row.size() != header.size()) {
      result.diagnostics.push_back(
          {Diagnostic::Kind::RaggedRow, record.index, "",
           "row has " + std::to_string(row.size()) + " cells, header has " +
               std::to_string(header.size())});
    }
    for (std::size_t f = 0; f < schema.size(); ++f) {
      if (!source_column[f] || *source_column[f] >= row.size()) continue;
      const auto& cell = row[*source_column[f]];
      if (auto v = coerce_cell(cell, schema[f])) {
        record.values[f] = std::move(*v);
      } else {
        result.diagnostics.push_back({Diagnostic::Kind::Coercion, record.index, schema[f].name,
                                      "cannot read '" + cell + "' as " +
                                          kind_expectation(schema[f].kind)});
      }
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

std::optional<Value> coerce_json(const nlohmann::json& v, const Feature& feature) {
  if (v.is_null()) return Value{Missing{}};
  if (v.is_string()) return coerce_cell(v.get_ref<const std::string&>(), feature);
  switch (feature.kind) {
    case FeatureKind::Integer:
      if (v.is_number_integer()) {
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
          return std::nullopt;
        }
        return Value{v.get<std::int64_t>()};
      }
      if (v.is_number_float()) {
        double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9.2e18) {
          return Value{static_cast<std::int64_t>(d)};
        }
      }
      return std::nullopt;
    case FeatureKind::Text:
      if (v.is_number() || v.is_boolean()) return Value{v.dump()};
      return std::nullopt;
    case FeatureKind::TextList: {
      if (v.is_number() || v.is_boolean()) return Value{TextList{v.dump()}};
      if (!v.is_array()) return std::nullopt;
      TextList out;
      for (const auto& e : v) {
        if (!e.is_string()) return std::nullopt;
        auto piece = trim(e.get_ref<const std::string&>());
        if (!piece.empty()) out.emplace_back(piece);
      }
      return Value{std::move(out)};
    }
  }
  return std::nullopt;
}

IngestResult ingest_json(std::string_view raw, const Schema& schema) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SourceUnreadable, std::string("invalid JSON source: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::SourceUnreadable, "JSON source must be an array");
  for (const auto& item : doc) {
    if (!item.is_object()) {
      throw Error(ErrorCode::SourceUnreadable, "JSON source must be an array of objects");
    }
  }

  IngestResult result;
  std::vector<bool> seen(schema.size(), false);
  result.records.reserve(doc.size());
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const auto& item = doc[r];
    DatasetRecord record;
    record.index = r;
    record.values.resize(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
      auto it = item.find(schema[f].name);
      if (it == item.end()) continue;
      seen[f] = true;
      if (auto v = coerce_json(*it, schema[f])) {
        record.values[f] = std::move(*v);
      } else {
        result.diagnostics.push_back({Diagnostic::Kind::Coercion, r, schema[f].name,
                                      "cannot read " + it->dump() + " as " +
                                          kind_expectation(schema[f].kind)});
      }
    }
    result.records.push_back(std::move(record));
  }
  if (!doc.empty()) {
    for (std::size_t f = 0; f < schema.size(); ++f) {
      if (!seen[f]) {
        result.diagnostics.push_back({Diagnostic::Kind::HeaderMismatch, std::nullopt,
                                      schema[f].name,
                                      "no object has this key; values are missing for all rows"});
      }
    }
  }
  return result;
}

}  // namespace

std::optional<Value> coerce_cell(std::string_view cell, const Feature& feature) {
  switch (feature.kind) {
    case FeatureKind::Text:
      if (cell.empty()) return Value{Missing{}};
      return Value{std::string(cell)};
    case FeatureKind::Integer: {
      auto t = trim(cell);
      if (t.empty()) return Value{Missing{}};
      if (auto v = parse_int(t)) return Value{*v};
      return std::nullopt;
    }
    case FeatureKind::TextList:
      if (trim(cell).empty()) return Value{Missing{}};
      return Value{split_list(cell, feature.delimiter)};
  }
  return std::nullopt;
}

IngestResult ingest(std::string_view raw, const Schema& schema, SourceFormat format) {
  if (schema.empty()) throw Error(ErrorCode::ConfigError, "schema declares no features");
  return format == SourceFormat::Json ? ingest_json(raw, schema) : ingest_csv(raw, schema);
}

TagIndex build_tag_index(const Schema& schema, std::span<const DatasetRecord> records) {
  TagIndex index(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    std::set<TagValue> values;
    for (const auto& record : records) {
      const auto& v = record.values[f];
      if (const auto* s = std::get_if<std::string>(&v)) {
        values.insert(*s);
      } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
        values.insert(*i);
      } else if (const auto* list = std::get_if<TextList>(&v)) {
        for (const auto& e : *list) values.insert(e);
      }
    }
    index[f].assign(values.begin(), values.end());
  }
  return index;
}

CatalogSnapshot::CatalogSnapshot(Meta meta, Schema schema, std::vector<DatasetRecord> records,
                                 std::optional<ClusterModel> clusters)
    : meta_(std::move(meta)),
      schema_(std::move(schema)),
      records_(std::move(records)),
      clusters_(std::move(clusters)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.index != i) {
      throw Error(ErrorCode::ValidationError,
                  "record at position " + std::to_string(i) + " has index " + std::to_string(r.index));
    }
    if (r.values.size() != schema_.size()) {
      throw Error(ErrorCode::ValidationError,
                  "record " + std::to_string(i) + " does not have a value for every feature");
    }
    for (std::size_t f = 0; f < schema_.size(); ++f) {
      if (!value_matches(r.values[f], schema_[f].kind)) {
        throw Error(ErrorCode::ValidationError, "record " + std::to_string(i) + ", feature '" +
                                                    schema_[f].name + "': value has the wrong kind");
      }
    }
  }
  if (clusters_ && clusters_->assignments.size() != records_.size()) {
    throw Error(ErrorCode::ValidationError, "cluster model does not cover every record");
  }
  tags_ = build_tag_index(schema_, records_);
}

std::vector<std::string> schema_names(const CatalogSnapshot& snapshot) {
  return snapshot.schema().names();
}

const DatasetRecord& get_record(const CatalogSnapshot& snapshot, std::int64_t index) {
  const auto& records = snapshot.records();
  if (index < 0 || static_cast<std::uint64_t>(index) >= records.size()) {
    throw Error(ErrorCode::OutOfRange, "no dataset at index " + std::to_string(index) + " (" +
                                           std::to_string(records.size()) + " datasets)");
  }
  return records[static_cast<std::size_t>(index)];
}

TagMap unique_tags(const CatalogSnapshot& snapshot, std::span<const std::string> features) {
  const auto& schema = snapshot.schema();
  TagMap out;
  if (features.empty()) {
    for (std::size_t f = 0; f < schema.size(); ++f) {
      out.emplace_back(schema[f].name, snapshot.tag_index()[f]);
    }
    return out;
  }
  for (const auto& name : features) {
    auto f = schema.index_of(name);
    out.emplace_back(name, snapshot.tag_index()[f]);
  }
  return out;
}

std::vector<PartialRecord> project_features(const Schema& schema,
                                            std::span<const DatasetRecord* const> records,
                                            std::span<const std::string> features) {
  std::vector<bool> keep(schema.size(), features.empty());
  for (const auto& name : features) keep[schema.index_of(name)] = true;

  std::vector<PartialRecord> out;
  out.reserve(records.size());
  for (const auto* record : records) {
    PartialRecord p;
    p.index = record->index;
    for (std::size_t f = 0; f < schema.size(); ++f) {
      if (keep[f]) p.fields.push_back({schema[f].name, record->values[f]});
    }
    out.push_back(std::move(p));
  }
  return out;
}

FeatureCounts feature_counts(const CatalogSnapshot& snapshot, std::string_view feature) {
  auto f = snapshot.schema().index_of(feature);
  std::map<TagValue, std::size_t> counts;
  for (const auto& record : snapshot.records()) {
    const auto& v = record.values[f];
    if (const auto* s = std::get_if<std::string>(&v)) {
      ++counts[*s];
    } else if (const auto* i = std::get_if<std::int64_t>(&v)) {
      ++counts[*i];
    } else if (const auto* list = std::get_if<TextList>(&v)) {
      for (const auto& e : *list) ++counts[e];
    }
  }
  FeatureCounts out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::vector<std::string> split_feature_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(',', start);
    auto piece = trim(text.substr(start, pos == std::string_view::npos ? text.npos : pos - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace masader
