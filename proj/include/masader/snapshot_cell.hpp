#pragma once

#include <cstdint>
#include <memory>
#include <mutex>

#include "masader/catalog.hpp"

namespace masader {

using SnapshotPtr = std::shared_ptr<const CatalogSnapshot>;

// Holds the live snapshot. Readers take a reference once per request and
// keep using it; publishing swaps the reference without touching readers.
class SnapshotCell {
 public:
  // Null until the first publish.
  SnapshotPtr load() const;

  // Throws ValidationError unless the version is newer than the current one.
  void publish(SnapshotPtr snapshot);

  std::uint64_t version() const;

 private:
  mutable std::mutex mutex_;
  SnapshotPtr current_;
};

}  // namespace masader
