#include "appsent/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "appsent/error.hpp"
#include "appsent/strings.hpp"

namespace appsent::csv {

bool Reader::next(Row& row) {
  row.clear();
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;
  record_line_ = line_;

  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      row.push_back(std::move(field));
      return true;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!field_started) {
          quoted = true;
          field_started = true;
        } else {
          field.push_back(ch);
        }
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        if (in_.peek() == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line_;
        row.push_back(std::move(field));
        return true;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  Reader reader(in);
  Table table;
  Row row;
  if (!reader.next(table.header)) return table;
  // Strip a UTF-8 byte order mark from the first header cell.
  if (!table.header.empty() && table.header[0].starts_with("\xEF\xBB\xBF"))
    table.header[0].erase(0, 3);
  while (reader.next(row)) {
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    table.rows.push_back(row);
    table.lines.push_back(reader.line());
  }
  return table;
}

std::optional<std::size_t> find_column(const Row& header,
                                       std::initializer_list<std::string_view> aliases) {
  for (auto alias : aliases) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (iequals(trim(header[i]), alias)) return i;
    }
  }
  return std::nullopt;
}

std::string quote(std::string_view field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << quote(row[i]);
  }
  out << '\n';
}

std::size_t sanitize_utf8(std::string& text) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  std::size_t replaced = 0;
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  bool clean = true;
  while (i < text.size()) {
    const unsigned char b = byte(i);
    std::size_t len = 0;
    std::uint32_t min_cp = 0;
    if (b < 0x80) {
      len = 1;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      min_cp = 0x80;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      min_cp = 0x800;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      min_cp = 0x10000;
    }
    bool valid = len > 0 && i + len <= text.size();
    std::uint32_t cp = 0;
    if (valid && len > 1) {
      cp = b & (0xFF >> (len + 1));
      for (std::size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xC0) != 0x80) {
          valid = false;
          break;
        }
        cp = (cp << 6) | (byte(i + k) & 0x3F);
      }
      if (valid && (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) valid = false;
    }
    if (valid) {
      if (!clean) out.append(text, i, len);
      i += len;
    } else {
      if (clean) {
        out.assign(text, 0, i);
        clean = false;
      }
      out.append(kReplacement);
      ++replaced;
      ++i;
    }
  }
  if (!clean) text = std::move(out);
  return replaced;
}

}  // namespace appsent::csv
