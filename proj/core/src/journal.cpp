#include "sentinel/journal.hpp"

#include <charconv>
#include <cmath>
#include <optional>

#include "sentinel/csv.hpp"

namespace sentinel {

namespace {

constexpr std::string_view kColMaxRR = "Max RR";
constexpr std::string_view kColRs = "Rs";
constexpr std::string_view kColBE = "BE";
constexpr std::string_view kColSession = "Session";
constexpr std::string_view kColPRI = "PRI";

std::optional<double> parse_double(std::string_view text) {
  text = csv::trim(text);
  if (text.starts_with('+')) text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

struct ColumnIndex {
  std::size_t max_rr, rs, be, session;
  std::optional<std::size_t> pri;
  std::optional<std::size_t> balance;
};

ColumnIndex locate_columns(const csv::Row& header) {
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (csv::trim(header[i]) == name) return i;
    }
    return std::nullopt;
  };
  auto require = [&](std::string_view name) {
    auto idx = find(name);
    if (!idx) throw SchemaError(std::string(name));
    return *idx;
  };
  return {require(kColMaxRR), require(kColRs), require(kColBE), require(kColSession), find(kColPRI), find("Balance")};
}

const std::string& cell(const csv::Row& row, std::size_t idx) {
  static const std::string kEmpty;
  return idx < row.size() ? row[idx] : kEmpty;
}

}  // namespace

SchemaError::SchemaError(std::string column)
    : JournalError("missing required column '" + column + "'"), column_(std::move(column)) {}

RowError::RowError(std::size_t line, std::string column, const std::string& message)
    : JournalError("line " + std::to_string(line) + ", column '" + column + "': " + message),
      line_(line),
      column_(std::move(column)) {}

std::string_view to_string(Session s) {
  switch (s) {
    case Session::Asian: return "Asian";
    case Session::London: return "London";
    case Session::NewYork: return "New York";
  }
  return "New York";
}

std::string_view to_string(Outcome o) { return o == Outcome::Win ? "W" : "L"; }

Session parse_session(std::string_view text) {
  text = csv::trim(text);
  for (Session s : kSessions) {
    if (text == to_string(s)) return s;
  }
  throw JournalError("unknown session '" + std::string(text) +
                     "' (accepted: Asian, London, New York)");
}

std::vector<TradeRecord> parse_journal(std::string_view csv_text, const ParseOptions& options) {
  csv::Table table;
  try {
    table = csv::parse(csv_text);
  } catch (const std::runtime_error& e) {
    throw JournalError(e.what());
  }
  if (table.header.empty()) throw SchemaError(std::string(kColMaxRR));
  const ColumnIndex cols = locate_columns(table.header);

  std::vector<TradeRecord> records;
  records.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    TradeRecord rec;
    rec.index = records.size();

    const auto max_rr = parse_double(cell(row, cols.max_rr));
    if (!max_rr) throw RowError(line, std::string(kColMaxRR), "not a number: '" + cell(row, cols.max_rr) + "'");
    if (*max_rr < 0) throw RowError(line, std::string(kColMaxRR), "must be non-negative");
    rec.max_rr = *max_rr;

    const auto rs = parse_double(cell(row, cols.rs));
    if (!rs) throw RowError(line, std::string(kColRs), "not a number: '" + cell(row, cols.rs) + "'");
    rec.rs = *rs;

    const auto be = csv::trim(cell(row, cols.be));
    if (be.empty()) throw RowError(line, std::string(kColBE), "empty outcome");
    rec.outcome = be == "W" ? Outcome::Win : Outcome::Loss;

    const auto& session_text = cell(row, cols.session);
    try {
      rec.session = parse_session(session_text);
    } catch (const JournalError& e) {
      if (options.mode == ParseMode::Strict) throw RowError(line, std::string(kColSession), e.what());
      rec.session = Session::NewYork;
      if (options.warn) {
        options.warn("line " + std::to_string(line) + ": unknown session '" +
                     std::string(csv::trim(session_text)) + "', treating as New York");
      }
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<int> compute_streaks(std::span<const int> outcomes) {
  std::vector<int> streaks;
  streaks.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (i > 0 && outcomes[i] == outcomes[i - 1]) {
      streaks.push_back(streaks.back() + outcomes[i]);
    } else {
      streaks.push_back(outcomes[i]);
    }
  }
  return streaks;
}

std::vector<double> compute_balance(std::span<const double> rs_values, double start) {
  std::vector<double> balance;
  balance.reserve(rs_values.size());
  double running = start;
  for (double rs : rs_values) {
    running += rs;
    balance.push_back(running);
  }
  return balance;
}

SessionFlags one_hot_session(Session s) {
  switch (s) {
    case Session::Asian: return {1, 0};
    case Session::London: return {0, 1};
    case Session::NewYork: return {0, 0};
  }
  return {0, 0};
}

std::vector<EnrichedRecord> enrich(std::span<const TradeRecord> records, double start_balance) {
  std::vector<int> outcomes;
  std::vector<double> rs;
  outcomes.reserve(records.size());
  rs.reserve(records.size());
  for (const auto& r : records) {
    outcomes.push_back(sign_of(r.outcome));
    rs.push_back(r.rs);
  }
  const auto streaks = compute_streaks(outcomes);
  const auto balance = compute_balance(rs, start_balance);

  std::vector<EnrichedRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EnrichedRecord e;
    e.base = records[i];
    e.base.index = i;
    e.outcome_signed = outcomes[i];
    e.streak = streaks[i];
    e.balance = balance[i];
    const auto flags = one_hot_session(records[i].session);
    e.session_asian = flags.asian;
    e.session_london = flags.london;
    out.push_back(e);
  }
  return out;
}

FeatureVector features(const EnrichedRecord& r) {
  return {r.base.max_rr, static_cast<double>(r.outcome_signed), static_cast<double>(r.streak),
          static_cast<double>(r.session_asian), static_cast<double>(r.session_london)};
}

std::string format_decimal(double value) {
  if (value == 0.0) value = 0.0;  // drop negative zero
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string write_clean_csv(std::span<const EnrichedRecord> records) {
  std::string out =
      csv::format_row({"Max RR", "Rs", "BE", "Session", "Streak", "Balance", "Session_Asian",
                       "Session_London", "BE_signed", "PRI"});
  out.push_back('\n');
  for (const auto& r : records) {
    out += csv::format_row({format_decimal(r.base.max_rr), format_decimal(r.base.rs),
                            std::string(to_string(r.base.outcome)), std::string(to_string(r.base.session)),
                            std::to_string(r.streak), format_decimal(r.balance),
                            std::to_string(r.session_asian), std::to_string(r.session_london),
                            std::to_string(r.outcome_signed), std::to_string(r.pri)});
    out.push_back('\n');
  }
  return out;
}

std::vector<EnrichedRecord> read_clean_csv(std::string_view csv_text, std::optional<double> start_balance) {
  const auto records = parse_journal(csv_text);
  const auto table = csv::parse(csv_text);
  const auto cols = locate_columns(table.header);
  if (!cols.pri) throw SchemaError(std::string(kColPRI));

  if (!start_balance) {
    start_balance = 0.0;
    if (cols.balance && !records.empty()) {
      if (const auto first = parse_double(cell(table.rows[0], *cols.balance))) {
        start_balance = *first - records[0].rs;
      }
    }
  }
  auto enriched = enrich(records, *start_balance);
  for (std::size_t i = 0; i < enriched.size(); ++i) {
    const auto value = parse_double(cell(table.rows[i], *cols.pri));
    if (!value || *value < 0 || *value > 3 || *value != std::floor(*value)) {
      throw RowError(table.line_numbers[i], std::string(kColPRI), "PRI must be an integer in [0,3]");
    }
    enriched[i].pri = static_cast<int>(*value);
  }
  return enriched;
}

}  // namespace sentinel
