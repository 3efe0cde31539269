#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace appsent::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style reader: quoted fields may contain commas, doubled quotes
/// and newlines. Accepts LF and CRLF line endings.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record; returns false at end of input.
  bool next(Row& row);

  /// Physical line on which the most recently returned record started (1-based).
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

/// Whole file as header + rows. Throws MissingFile.
struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> lines;  // source line of each row
};

Table read_file(const std::string& path);

/// Index of the first header cell matching any alias (case-insensitive, trimmed).
std::optional<std::size_t> find_column(const Row& header,
                                       std::initializer_list<std::string_view> aliases);

std::string quote(std::string_view field);
void write_row(std::ostream& out, const Row& row);

/// Replaces invalid UTF-8 sequences with U+FFFD; returns how many were replaced.
std::size_t sanitize_utf8(std::string& text);

}  // namespace appsent::csv
