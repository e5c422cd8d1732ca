#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel {

enum class Outcome { Win, Loss };

/// Trading session. Declaration order is the argmax tie-break order used by
/// the loss-session rule (Asian < London < NewYork).
enum class Session { Asian, London, NewYork };

inline constexpr std::array<Session, 3> kSessions = {Session::Asian, Session::London,
                                                     Session::NewYork};

std::string_view to_string(Session s);
std::string_view to_string(Outcome o);

/// Journal spelling of a session ("Asian", "London", "New York"). Throws
/// JournalError for anything else.
Session parse_session(std::string_view text);

/// One raw journal row.
struct TradeRecord {
  std::size_t index = 0;
  double max_rr = 0.0;
  double rs = 0.0;
  Outcome outcome = Outcome::Loss;
  Session session = Session::NewYork;

  bool operator==(const TradeRecord&) const = default;
};

/// A trade row with derived columns. `balance` is bookkeeping only and never
/// enters a feature vector.
struct EnrichedRecord {
  TradeRecord base;
  int outcome_signed = -1;
  int streak = -1;
  double balance = 0.0;
  int session_asian = 0;
  int session_london = 0;
  int pri = 0;

  bool operator==(const EnrichedRecord&) const = default;
};

/// Model input, fixed order: Max RR, BE, Streak, Session_Asian, Session_London.
using FeatureVector = std::array<double, 5>;

inline constexpr std::array<std::string_view, 5> kFeatureNames = {
    "Max RR", "BE", "Streak", "Session_Asian", "Session_London"};

class JournalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Required column missing from the header.
class SchemaError : public JournalError {
 public:
  explicit SchemaError(std::string column);
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

/// Bad value in a data row. `line()` is the 1-based CSV line number.
class RowError : public JournalError {
 public:
  RowError(std::size_t line, std::string column, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t line_;
  std::string column_;
};

enum class ParseMode { Strict, Lenient };

struct ParseOptions {
  ParseMode mode = ParseMode::Strict;
  /// Receives lenient-mode warnings (unknown session mapped to New York).
  std::function<void(const std::string&)> warn;
};

std::vector<TradeRecord> parse_journal(std::string_view csv_text, const ParseOptions& options = {});

inline int sign_of(Outcome o) { return o == Outcome::Win ? 1 : -1; }

std::vector<int> compute_streaks(std::span<const int> outcomes);
std::vector<double> compute_balance(std::span<const double> rs_values, double start = 0.0);

struct SessionFlags {
  int asian = 0;
  int london = 0;

  bool operator==(const SessionFlags&) const = default;
};

SessionFlags one_hot_session(Session s);

/// Derives streak, balance, and session flags. `pri` is left at 0; see
/// label_pri. Records are re-indexed by position.
std::vector<EnrichedRecord> enrich(std::span<const TradeRecord> records, double start_balance = 0.0);

FeatureVector features(const EnrichedRecord& r);

/// Cleaned journal: the input columns plus Streak, Balance, Session_Asian,
/// Session_London, BE_signed, PRI. Row order preserved.
std::string write_clean_csv(std::span<const EnrichedRecord> records);

/// Reads a cleaned journal back. Derived columns are recomputed from the raw
/// columns; the PRI column is taken as stored. Without `start_balance`, it is
/// recovered from the first row's Balance (0 if the column is absent).
std::vector<EnrichedRecord> read_clean_csv(std::string_view csv_text,
                                           std::optional<double> start_balance = {});

/// Shortest round-trip decimal representation.
std::string format_decimal(double value);

}  // namespace sentinel
