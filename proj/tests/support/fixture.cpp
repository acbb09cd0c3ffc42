#include "fixture.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace testing_support {

std::filesystem::path data_dir() { return MASADER_TEST_DATA; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json expected_values() {
  return nlohmann::json::parse(read_file(data_dir() / "expected.json"));
}

masader::Schema fixture_schema() { return masader::Schema::load(data_dir() / "schema.json"); }

masader::SnapshotPtr fixture_snapshot(std::uint64_t version) {
  auto schema = fixture_schema();
  auto ingested = masader::ingest(read_file(data_dir() / "catalogue.csv"), schema,
                                  masader::SourceFormat::Csv);
  masader::CatalogSnapshot::Meta meta;
  meta.version = version;
  return std::make_shared<const masader::CatalogSnapshot>(meta, std::move(schema),
                                                          std::move(ingested.records));
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("masader-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace testing_support
