#include "sentinel/store.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "sentinel/pri.hpp"

namespace sentinel {

namespace fs = std::filesystem;

RevisionConflict::RevisionConflict(std::uint64_t expected, std::uint64_t actual)
    : std::runtime_error("expected revision " + std::to_string(expected) + ", journal is at " +
                         std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

void validate(const TradeInput& input) {
  if (!std::isfinite(input.max_rr)) throw ValidationError("max_rr", "must be a finite number");
  if (input.max_rr < 0) throw ValidationError("max_rr", "must be non-negative");
  if (!std::isfinite(input.rs)) throw ValidationError("rs", "must be a finite number");
}

JournalStore::JournalStore(fs::path dir, double start_balance)
    : dir_(std::move(dir)), start_balance_(start_balance) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw StorageError("cannot create store directory " + dir_.string() + ": " + ec.message());

  const fs::path settings = dir_ / "store.json";
  if (fs::exists(settings)) {
    std::ifstream in(settings);
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("start_balance") || !doc["start_balance"].is_number()) {
      throw StorageError("corrupt store settings " + settings.string());
    }
    start_balance_ = doc["start_balance"].get<double>();
  } else {
    std::ofstream out(settings);
    out << nlohmann::json{{"start_balance", start_balance_}}.dump() << "\n";
    if (!out) throw StorageError("cannot write " + settings.string());
  }

  auto rows = std::make_shared<std::vector<EnrichedRecord>>();
  if (fs::exists(journal_path())) {
    std::ifstream in(journal_path(), std::ios::binary);
    if (!in) throw StorageError("cannot read " + journal_path().string());
    std::ostringstream text;
    text << in.rdbuf();
    *rows = read_clean_csv(text.str(), start_balance_);
  }
  rows_ = std::move(rows);
}

JournalSnapshot JournalStore::snapshot() const {
  std::shared_lock lock(snapshot_mutex_);
  return {rows_->size(), rows_};
}

void JournalStore::persist(const std::vector<EnrichedRecord>& rows) const {
  const fs::path target = journal_path();
  const fs::path temp = dir_ / "journal.csv.tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot open " + temp.string() + " for writing");
    out << write_clean_csv(rows);
    out.flush();
    if (!out) throw StorageError("write to " + temp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp, ec);
    throw StorageError("cannot replace " + target.string());
  }
}

EnrichedRecord JournalStore::append(const TradeInput& input, std::optional<std::uint64_t> expected_revision) {
  validate(input);
  std::lock_guard writer(writer_);
  const auto current = snapshot();
  if (expected_revision && *expected_revision != current.revision) {
    throw RevisionConflict(*expected_revision, current.revision);
  }
  auto next = std::make_shared<std::vector<EnrichedRecord>>(*current.rows);
  const auto record = extend_causal(current.records(), input, start_balance_);
  next->push_back(record);
  persist(*next);

  std::unique_lock lock(snapshot_mutex_);
  rows_ = std::move(next);
  return record;
}

JournalSnapshot JournalStore::ingest(std::span<const TradeRecord> records) {
  std::lock_guard writer(writer_);
  if (!snapshot().empty()) {
    throw StorageError("store " + dir_.string() + " already holds trades; ingest needs an empty store");
  }
  auto rows = std::make_shared<std::vector<EnrichedRecord>>(enrich(records, start_balance_));
  if (!rows->empty()) apply_pri(*rows, HistoryMode::CausalPrefix);
  persist(*rows);

  std::unique_lock lock(snapshot_mutex_);
  rows_ = std::move(rows);
  return {rows_->size(), rows_};
}

}  // namespace sentinel
