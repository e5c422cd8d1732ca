#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "sentinel/journal.hpp"
#include "sentinel/risk.hpp"

namespace sentinel {

class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Conditional append whose expected revision no longer matches.
class RevisionConflict : public std::runtime_error {
 public:
  RevisionConflict(std::uint64_t expected, std::uint64_t actual);
  std::uint64_t expected() const { return expected_; }
  std::uint64_t actual() const { return actual_; }

 private:
  std::uint64_t expected_;
  std::uint64_t actual_;
};

/// Immutable view of the journal at one revision.
struct JournalSnapshot {
  std::uint64_t revision = 0;
  std::shared_ptr<const std::vector<EnrichedRecord>> rows;

  std::span<const EnrichedRecord> records() const { return *rows; }
  bool empty() const { return rows->empty(); }
};

/// Append-only trade journal persisted as a cleaned CSV (`journal.csv`) in a
/// store directory, next to the `manifest/` directory written by training.
/// The revision equals the number of appended rows.
///
/// One writer at a time; readers take snapshots and never block on a write in
/// progress. Each write replaces the file through a rename, so a reader of the
/// file sees either the old or the new journal.
class JournalStore {
 public:
  /// Opens the store in `dir`, creating the directory if needed and loading
  /// an existing journal. The starting balance is fixed when the store is
  /// created (kept in `store.json`); `start_balance` is ignored afterwards.
  /// Throws StorageError or JournalError.
  explicit JournalStore(std::filesystem::path dir, double start_balance = 0.0);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path journal_path() const { return dir_ / "journal.csv"; }
  std::filesystem::path manifest_dir() const { return dir_ / "manifest"; }
  double start_balance() const { return start_balance_; }

  JournalSnapshot snapshot() const;
  std::uint64_t revision() const { return snapshot().revision; }

  /// Appends one trade with causally computed derived columns. Throws
  /// ValidationError for bad fields, RevisionConflict when `expected_revision`
  /// is stale, StorageError if the write fails (journal unchanged).
  EnrichedRecord append(const TradeInput& input, std::optional<std::uint64_t> expected_revision = {});

  /// Bulk-loads parsed records into an empty store. Throws StorageError if the
  /// store already holds trades.
  JournalSnapshot ingest(std::span<const TradeRecord> records);

 private:
  void persist(const std::vector<EnrichedRecord>& rows) const;

  std::filesystem::path dir_;
  double start_balance_;
  std::mutex writer_;
  mutable std::shared_mutex snapshot_mutex_;
  std::shared_ptr<const std::vector<EnrichedRecord>> rows_;
};

/// Throws ValidationError unless max_rr is finite and >= 0 and rs is finite.
void validate(const TradeInput& input);

}  // namespace sentinel
