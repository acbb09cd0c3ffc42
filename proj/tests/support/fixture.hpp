#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "masader/catalog.hpp"
#include "masader/snapshot_cell.hpp"

namespace testing_support {

std::filesystem::path data_dir();
std::string read_file(const std::filesystem::path& path);
nlohmann::json expected_values();

masader::Schema fixture_schema();
// The 500-record catalogue, ingested from CSV, without clusters.
masader::SnapshotPtr fixture_snapshot(std::uint64_t version = 1);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace testing_support
