#include "appsent/corpus.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <utility>

#include "appsent/csv.hpp"
#include "appsent/error.hpp"
#include "appsent/strings.hpp"
#include "appsent/textprep.hpp"

namespace appsent {

std::optional<Label> parse_label(std::string_view text) noexcept {
  const auto t = trim(text);
  if (iequals(t, "positive") || iequals(t, "pos")) return Label::Positive;
  if (iequals(t, "negative") || iequals(t, "neg")) return Label::Negative;
  return std::nullopt;
}

namespace corpus {

namespace {

constexpr std::size_t kAppColumns = 13;

bool is_missing_cell(std::string_view text) {
  const auto t = trim(text);
  return t.empty() || iequals(t, "nan") || iequals(t, "na") || iequals(t, "null");
}

double to_double(std::string_view text) {
  const auto t = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value))
    throw Error(ErrorKind::Unparseable, "not a number: '" + std::string(text) + "'");
  return value;
}

std::uint64_t to_uint(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorKind::Unparseable, "not a nonnegative integer: '" + std::string(text) + "'");
  return value;
}

std::string cell(const csv::Row& row, std::optional<std::size_t> col) {
  if (!col || *col >= row.size()) return {};
  return std::string(trim(row[*col]));
}

std::size_t sanitize_row(csv::Row& row) {
  std::size_t n = 0;
  for (auto& c : row) n += csv::sanitize_utf8(c);
  return n;
}

std::string format_rating(const std::optional<double>& rating) {
  return rating ? format_double(*rating) : std::string{};
}

}  // namespace

std::string_view to_string(Source source) noexcept {
  return source == Source::Google ? "Google" : "Student";
}

std::string_view to_string(AppType type) noexcept {
  return type == AppType::Free ? "Free" : "Paid";
}

std::optional<AppType> parse_app_type(std::string_view text) noexcept {
  const auto t = trim(text);
  if (iequals(t, "free")) return AppType::Free;
  if (iequals(t, "paid")) return AppType::Paid;
  return std::nullopt;
}

std::string Date::iso() const {
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02d-%02d", year, month, day);
  return buf.data();
}

Label derive_label(double rating) {
  if (!(rating >= 1.0 && rating <= 5.0))
    throw Error(ErrorKind::OutOfRange, "rating " + format_double(rating) + " outside [1, 5]");
  return rating >= 3.0 ? Label::Positive : Label::Negative;
}

std::uint64_t parse_installs(std::string_view text) {
  auto t = trim(text);
  if (!t.empty() && t.back() == '+') t.remove_suffix(1);
  std::string digits;
  for (char c : t) {
    if (c != ',') digits.push_back(c);
  }
  return to_uint(digits);
}

double parse_price(std::string_view text) {
  auto t = trim(text);
  if (!t.empty() && t.front() == '$') t.remove_prefix(1);
  const double value = to_double(t);
  if (value < 0) throw Error(ErrorKind::Unparseable, "negative price");
  return value;
}

std::optional<std::uint64_t> parse_size(std::string_view text) {
  auto t = trim(text);
  if (is_missing_cell(t) || iequals(t, "Varies with device")) return std::nullopt;
  std::uint64_t unit = 1;
  const char suffix = t.back();
  if (suffix == 'M' || suffix == 'm') {
    unit = std::uint64_t{1} << 20;
    t.remove_suffix(1);
  } else if (suffix == 'k' || suffix == 'K') {
    unit = std::uint64_t{1} << 10;
    t.remove_suffix(1);
  } else if (suffix == 'G' || suffix == 'g') {
    unit = std::uint64_t{1} << 30;
    t.remove_suffix(1);
  }
  std::string digits;
  for (char c : t) {
    if (c != ',') digits.push_back(c);
  }
  const double value = to_double(digits);
  if (value < 0) throw Error(ErrorKind::Unparseable, "negative size");
  return static_cast<std::uint64_t>(std::llround(value * static_cast<double>(unit)));
}

std::optional<double> parse_rating(std::string_view text) {
  if (is_missing_cell(text)) return std::nullopt;
  const double value = to_double(text);
  if (value < 1.0 || value > 5.0)
    throw Error(ErrorKind::OutOfRange, "rating " + std::string(trim(text)) + " outside [1, 5]");
  return value;
}

std::optional<Date> parse_date(std::string_view text) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  const auto t = trim(text);
  Date d;
  if (t.size() == 10 && t[4] == '-' && t[7] == '-') {
    try {
      d.year = static_cast<int>(to_uint(t.substr(0, 4)));
      d.month = static_cast<int>(to_uint(t.substr(5, 2)));
      d.day = static_cast<int>(to_uint(t.substr(8, 2)));
    } catch (const Error&) {
      return std::nullopt;
    }
  } else {
    const auto space = t.find(' ');
    const auto comma = t.find(',');
    if (space == std::string_view::npos || comma == std::string_view::npos || comma < space)
      return std::nullopt;
    const auto month = to_lower(t.substr(0, space));
    for (std::size_t m = 0; m < kMonths.size(); ++m) {
      if (month == kMonths[m]) d.month = static_cast<int>(m + 1);
    }
    try {
      d.day = static_cast<int>(to_uint(trim(t.substr(space + 1, comma - space - 1))));
      d.year = static_cast<int>(to_uint(trim(t.substr(comma + 1))));
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return std::nullopt;
  return d;
}

std::string format_installs(std::uint64_t installs) {
  const auto digits = std::to_string(installs);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  out.push_back('+');
  return out;
}

AppLoad load_app_metadata(const std::string& path) {
  auto table = csv::read_file(path);
  if (table.header.size() != kAppColumns)
    throw Error(ErrorKind::MalformedHeader, path + ": expected " + std::to_string(kAppColumns) +
                                                " columns, found " +
                                                std::to_string(table.header.size()));
  AppLoad result;
  result.input_rows = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto& row = table.rows[r];
    result.replaced_bytes += sanitize_row(row);
    const std::size_t line = table.lines[r];
    if (row.size() != kAppColumns) {
      result.rejected.push_back({line, "expected 13 fields, found " + std::to_string(row.size())});
      continue;
    }
    try {
      AppRecord app;
      app.app_name = std::string(trim(row[0]));
      if (app.app_name.empty()) throw Error(ErrorKind::Unparseable, "empty app name");
      app.category = std::string(trim(row[1]));
      try {
        app.rating = parse_rating(row[2]);
      } catch (const Error&) {
        ++result.coerced_missing;
      }
      app.reviews_count = to_uint(trim(row[3]));
      try {
        app.size_bytes = parse_size(row[4]);
      } catch (const Error&) {
        ++result.coerced_missing;
      }
      app.installs = parse_installs(row[5]);
      app.price = parse_price(row[7]);
      const auto type = parse_app_type(row[6]);
      if (type) {
        app.app_type = *type;
      } else if (is_missing_cell(row[6])) {
        app.app_type = app.price == 0.0 ? AppType::Free : AppType::Paid;
      } else {
        throw Error(ErrorKind::Unparseable, "type '" + row[6] + "'");
      }
      if ((app.app_type == AppType::Free) != (app.price == 0.0))
        throw Error(ErrorKind::Unparseable, "type and price disagree");
      app.content_rating = std::string(trim(row[8]));
      app.genres = std::string(trim(row[9]));
      app.last_updated = parse_date(row[10]);
      app.current_version = std::string(trim(row[11]));
      app.android_version = std::string(trim(row[12]));
      result.records.push_back(std::move(app));
    } catch (const Error& e) {
      result.rejected.push_back({line, e.what()});
    }
  }
  return result;
}

ReviewLoad load_review_corpus(const std::string& path) {
  auto table = csv::read_file(path);
  const auto& h = table.header;
  const auto text_col =
      csv::find_column(h, {"translated_review", "text", "review", "review_text", "reviews", "content"});
  const auto label_col = csv::find_column(h, {"sentiment", "label", "orientation"});
  const auto rating_col = csv::find_column(h, {"rating", "ratings", "score", "stars"});
  const auto app_col = csv::find_column(h, {"app", "app_name", "app name"});
  const auto source_col = csv::find_column(h, {"source"});
  if (!text_col || (!label_col && !rating_col))
    throw Error(ErrorKind::NoUsableColumns,
                path + ": need a text column and a label or rating column");

  ReviewLoad result;
  result.input_rows = table.rows.size();
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto& row = table.rows[r];
    result.replaced_bytes += sanitize_row(row);
    const std::size_t line = table.lines[r];
    ReviewRecord rec;
    rec.source = Source::Google;
    if (source_col && iequals(cell(row, source_col), "student")) rec.source = Source::Student;
    rec.app_name = cell(row, app_col);
    rec.raw_text = cell(row, text_col);
    if (is_missing_cell(rec.raw_text) || textprep::normalize(rec.raw_text).empty()) {
      result.dropped.push_back({line, "empty text"});
      continue;
    }
    std::optional<Label> label;
    bool neutral = false;
    const auto rating_text = cell(row, rating_col);
    try {
      rec.rating = parse_rating(rating_text);
    } catch (const Error& e) {
      result.dropped.push_back({line, e.what()});
      continue;
    }
    if (rec.rating) {
      label = derive_label(*rec.rating);
    } else {
      const auto label_text = cell(row, label_col);
      label = parse_label(label_text);
      neutral = iequals(label_text, "neutral");
    }
    if (neutral) {
      result.neutral.push_back({rec.app_name, rec.raw_text});
      result.dropped.push_back({line, "neutral label"});
      continue;
    }
    if (!label) {
      result.dropped.push_back({line, "missing label"});
      continue;
    }
    rec.label = *label;
    if (!seen.emplace(rec.app_name, rec.raw_text).second) {
      ++result.duplicates;
      result.dropped.push_back({line, "duplicate"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

StudentLoad load_student_survey(const std::string& path) {
  auto table = csv::read_file(path);
  const auto& h = table.header;
  const auto dept_col = csv::find_column(h, {"department", "dept"});
  const auto app_col = csv::find_column(h, {"app", "app_name", "app name"});
  const auto text_col = csv::find_column(h, {"review", "reviews", "review_text", "text"});
  const auto rating_col = csv::find_column(h, {"rating", "ratings"});
  const auto type_col = csv::find_column(h, {"type", "app_type"});
  if (!dept_col || !app_col || !text_col || !rating_col || !type_col)
    throw Error(ErrorKind::NoUsableColumns,
                path + ": need department, app, review, rating and type columns");
  if (h.size() > 6)
    throw Error(ErrorKind::MalformedHeader, path + ": at most 6 columns expected");

  StudentLoad result;
  result.input_rows = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    auto& row = table.rows[r];
    result.replaced_bytes += sanitize_row(row);
    const std::size_t line = table.lines[r];
    try {
      StudentRecord s;
      s.department = cell(row, dept_col);
      s.app_name = cell(row, app_col);
      s.review_text = cell(row, text_col);
      if (s.department.empty()) throw Error(ErrorKind::Unparseable, "empty department");
      if (s.app_name.empty()) throw Error(ErrorKind::Unparseable, "empty app name");
      if (is_missing_cell(s.review_text) || textprep::normalize(s.review_text).empty())
        throw Error(ErrorKind::Unparseable, "empty text");
      const auto rating = parse_rating(cell(row, rating_col));
      if (!rating) throw Error(ErrorKind::Unparseable, "missing rating");
      s.rating = *rating;
      const auto type = parse_app_type(cell(row, type_col));
      if (!type) throw Error(ErrorKind::Unparseable, "type '" + cell(row, type_col) + "'");
      s.app_type = *type;
      result.records.push_back(std::move(s));
    } catch (const Error& e) {
      result.rejected.push_back({line, e.what()});
    }
  }
  return result;
}

ReviewRecord to_review(const StudentRecord& student) {
  return ReviewRecord{Source::Student, student.app_name, student.review_text, student.rating,
                      derive_label(student.rating)};
}

std::vector<ReviewRecord> to_reviews(const std::vector<StudentRecord>& students) {
  std::vector<ReviewRecord> out;
  out.reserve(students.size());
  for (const auto& s : students) out.push_back(to_review(s));
  return out;
}

bool is_student_survey(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path);
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) return false;
  return csv::find_column(header, {"department", "dept"}).has_value();
}

std::vector<ReviewRecord> load_labeled_reviews(const std::string& path) {
  if (is_student_survey(path)) return to_reviews(load_student_survey(path).records);
  return load_review_corpus(path).records;
}

void write_apps_csv(std::ostream& out, const std::vector<AppRecord>& apps) {
  csv::write_row(out, {"App", "Category", "Rating", "Reviews", "Size", "Installs", "Type", "Price",
                       "Content Rating", "Genres", "Last Updated", "Current Ver", "Android Ver"});
  for (const auto& a : apps) {
    csv::write_row(out, {a.app_name, a.category, format_rating(a.rating),
                         std::to_string(a.reviews_count),
                         a.size_bytes ? std::to_string(*a.size_bytes) : std::string{},
                         std::to_string(a.installs), std::string(to_string(a.app_type)),
                         format_double(a.price), a.content_rating, a.genres,
                         a.last_updated ? a.last_updated->iso() : std::string{},
                         a.current_version, a.android_version});
  }
}

void write_reviews_csv(std::ostream& out, const std::vector<ReviewRecord>& reviews) {
  csv::write_row(out, {"source", "app", "text", "rating", "label"});
  for (const auto& r : reviews) {
    csv::write_row(out, {std::string(to_string(r.source)), r.app_name, r.raw_text,
                         format_rating(r.rating), std::string(to_string(r.label))});
  }
}

void write_students_csv(std::ostream& out, const std::vector<StudentRecord>& students) {
  csv::write_row(out, {"department", "app", "review", "rating", "type"});
  for (const auto& s : students) {
    csv::write_row(out, {s.department, s.app_name, s.review_text, format_double(s.rating),
                         std::string(to_string(s.app_type))});
  }
}

}  // namespace corpus
}  // namespace appsent
