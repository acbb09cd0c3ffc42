#include "masader/snapshot_cell.hpp"

#include <string>
#include <utility>

#include "masader/error.hpp"

namespace masader {

SnapshotPtr SnapshotCell::load() const {
  std::lock_guard lock(mutex_);
  return current_;
}

void SnapshotCell::publish(SnapshotPtr snapshot) {
  if (!snapshot) throw Error(ErrorCode::ValidationError, "cannot publish a null snapshot");
  SnapshotPtr retired;  // released outside the lock
  std::lock_guard lock(mutex_);
  if (current_ && snapshot->version() <= current_->version()) {
    throw Error(ErrorCode::ValidationError,
                "snapshot version " + std::to_string(snapshot->version()) +
                    " is not newer than live version " + std::to_string(current_->version()));
  }
  retired = std::exchange(current_, std::move(snapshot));
}

std::uint64_t SnapshotCell::version() const {
  std::lock_guard lock(mutex_);
  return current_ ? current_->version() : 0;
}

}  // namespace masader
