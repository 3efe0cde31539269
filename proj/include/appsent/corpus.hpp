#pragma once

// Typed records for the app-metadata table, labeled review corpora and the
// student survey, plus the loaders that validate and clean them.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "appsent/label.hpp"

namespace appsent::corpus {

enum class Source : unsigned char { Google, Student };
enum class AppType : unsigned char { Free, Paid };

std::string_view to_string(Source source) noexcept;
std::string_view to_string(AppType type) noexcept;
std::optional<AppType> parse_app_type(std::string_view text) noexcept;

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  std::string iso() const;
  friend bool operator==(const Date&, const Date&) = default;
};

struct AppRecord {
  std::string app_name;
  std::string category;
  std::optional<double> rating;
  std::uint64_t reviews_count = 0;
  std::optional<std::uint64_t> size_bytes;
  std::uint64_t installs = 0;
  AppType app_type = AppType::Free;
  double price = 0.0;
  std::string content_rating;
  std::string genres;
  std::optional<Date> last_updated;
  std::string current_version;
  std::string android_version;

  friend bool operator==(const AppRecord&, const AppRecord&) = default;
};

struct ReviewRecord {
  Source source = Source::Google;
  std::string app_name;
  std::string raw_text;
  std::optional<double> rating;
  Label label = Label::Positive;

  friend bool operator==(const ReviewRecord&, const ReviewRecord&) = default;
};

/// A review whose source label is Neutral: excluded from classification,
/// kept for lexicon scoring and exploratory statistics.
struct NeutralReview {
  std::string app_name;
  std::string raw_text;

  friend bool operator==(const NeutralReview&, const NeutralReview&) = default;
};

struct StudentRecord {
  std::string department;
  std::string app_name;
  std::string review_text;
  double rating = 0.0;
  AppType app_type = AppType::Free;

  friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

/// One rejected or dropped input row.
struct RowIssue {
  std::size_t line = 0;  // physical line in the source file (header is line 1)
  std::string reason;
};

struct AppLoad {
  std::vector<AppRecord> records;
  std::vector<RowIssue> rejected;
  std::size_t input_rows = 0;
  std::size_t replaced_bytes = 0;
  std::size_t coerced_missing = 0;  // unreadable rating or size cells kept as missing
};

struct ReviewLoad {
  std::vector<ReviewRecord> records;
  std::vector<NeutralReview> neutral;
  std::vector<RowIssue> dropped;  // includes neutral rows and duplicates
  std::size_t input_rows = 0;
  std::size_t duplicates = 0;
  std::size_t replaced_bytes = 0;

  std::size_t dropped_count() const noexcept { return dropped.size(); }
};

struct StudentLoad {
  std::vector<StudentRecord> records;
  std::vector<RowIssue> rejected;
  std::size_t input_rows = 0;
  std::size_t replaced_bytes = 0;
};

/// Positive iff rating >= 3. Throws OutOfRange outside [1, 5].
Label derive_label(double rating);

/// "1,000,000+" -> 1000000. Throws Unparseable.
std::uint64_t parse_installs(std::string_view text);
/// "$4.99" -> 4.99. Throws Unparseable.
double parse_price(std::string_view text);
/// "19M" -> 19 * 2^20, "512k" -> 512 * 2^10; "Varies with device" or empty -> nullopt.
/// Throws Unparseable.
std::optional<std::uint64_t> parse_size(std::string_view text);
/// Rating cell; "NaN" or empty -> nullopt. Throws Unparseable.
std::optional<double> parse_rating(std::string_view text);
/// "January 7, 2018" or "2018-01-07"; nullopt when unrecognized.
std::optional<Date> parse_date(std::string_view text);

/// Canonical installs text: digits grouped by commas with a trailing '+'.
std::string format_installs(std::uint64_t installs);

/// 13-column Google Play metadata table. Throws MissingFile, MalformedHeader.
AppLoad load_app_metadata(const std::string& path);

/// Review table with a text column and a label and/or rating column.
/// Throws MissingFile, NoUsableColumns.
ReviewLoad load_review_corpus(const std::string& path);

/// department, app, review, rating, type (+ one optional ignored column).
/// Throws MissingFile, NoUsableColumns.
StudentLoad load_student_survey(const std::string& path);

ReviewRecord to_review(const StudentRecord& student);
std::vector<ReviewRecord> to_reviews(const std::vector<StudentRecord>& students);

/// True when the header looks like the student survey schema.
bool is_student_survey(const std::string& path);

/// Loads either schema as labeled reviews (student rows are converted).
std::vector<ReviewRecord> load_labeled_reviews(const std::string& path);

void write_apps_csv(std::ostream& out, const std::vector<AppRecord>& apps);
void write_reviews_csv(std::ostream& out, const std::vector<ReviewRecord>& reviews);
void write_students_csv(std::ostream& out, const std::vector<StudentRecord>& students);

}  // namespace appsent::corpus
