#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sentinel::csv {

using Row = std::vector<std::string>;

/// A parsed CSV table. `line_numbers[i]` is the 1-based source line on which
/// row `i` starts (the header is line 1), used for error messages.
struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> line_numbers;
};

/// Comma-separated, first row header, RFC 4180 quoting ("" escapes a quote,
/// quoted fields may span lines). A UTF-8 BOM and blank lines are skipped.
/// Throws std::runtime_error on an unterminated quoted field.
Table parse(std::string_view text);

std::string quote_field(std::string_view field);
std::string format_row(const Row& row);

std::string_view trim(std::string_view s);

}  // namespace sentinel::csv
