#pragma once

// Exploratory statistics over the app metadata, the review corpora and the
// student survey, and their export as plot-ready tables.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "appsent/corpus.hpp"
#include "appsent/eval.hpp"
#include "appsent/exec.hpp"
#include "appsent/lexicon.hpp"

namespace appsent::analysis {

struct DistributionRow {
  std::string key;
  std::size_t count = 0;
  std::optional<double> mean_rating;  // over group members with a rating
  std::optional<double> mean_price;   // app metadata only
  friend bool operator==(const DistributionRow&, const DistributionRow&) = default;
};

struct DistributionTable {
  std::string field;
  std::vector<DistributionRow> rows;  // count descending, then key ascending
  std::size_t excluded = 0;           // records with a missing or empty key

  std::size_t total() const noexcept;
};

/// Groups app records by category, genres, content_rating, app_type,
/// android_version, rating or price. Throws UnknownField.
DistributionTable distribution(std::span<const corpus::AppRecord> apps, std::string_view field);
/// Groups survey records by department, app_name, app_type or rating.
/// Throws UnknownField.
DistributionTable distribution(std::span<const corpus::StudentRecord> students, std::string_view field);

/// Mean of the present ratings; nullopt when there are none.
std::optional<double> mean_rating(std::span<const corpus::AppRecord> apps);

/// Pearson product-moment coefficient over pairs where both values are
/// present. Returns 0 with a warning when either variance is 0.
/// Throws LengthMismatch, TooFewPairs (fewer than 2 complete pairs).
double pearson(std::span<const std::optional<double>> xs, std::span<const std::optional<double>> ys);
double pearson(std::span<const double> xs, std::span<const double> ys);

/// The numeric app fields: rating, reviews_count, size_bytes, installs, price.
const std::vector<std::string>& numeric_fields();
/// Throws UnknownField.
std::optional<double> numeric_value(const corpus::AppRecord& app, std::string_view field);

struct CorrelationMatrix {
  std::vector<std::string> variables;
  std::vector<double> values;  // row-major, variables.size() squared

  double at(std::size_t i, std::size_t j) const { return values[i * variables.size() + j]; }
  double at(std::string_view a, std::string_view b) const;
};

/// Pairwise Pearson over numeric_fields(); a pair of variables with fewer than
/// two complete records gets 0 and a warning.
CorrelationMatrix correlation_matrix(std::span<const corpus::AppRecord> apps);

/// Survey records joined with the metadata by app name (case-insensitive);
/// the student's own rating replaces the store rating. Unmatched records are
/// skipped and counted.
struct JoinedSurvey {
  std::vector<corpus::AppRecord> apps;
  std::size_t unmatched = 0;
};
JoinedSurvey join_survey(std::span<const corpus::StudentRecord> students,
                         std::span<const corpus::AppRecord> apps);

struct JointPoint {
  std::size_t record;  // index into the input
  double x;
  double y;
  friend bool operator==(const JointPoint&, const JointPoint&) = default;
};

/// (x, y) per record with both values present, in record order.
/// Throws UnknownField.
std::vector<JointPoint> joint_data(std::span<const corpus::AppRecord> apps, std::string_view x_field,
                                   std::string_view y_field);

struct SentimentPoint {
  corpus::Source source;
  std::string app_name;
  lexicon::SentimentScore score;
};

struct RqInputs {
  std::vector<corpus::AppRecord> apps;
  std::vector<corpus::ReviewRecord> train_reviews;
  std::vector<corpus::StudentRecord> students;
  std::shared_ptr<const lexicon::Lexicon> lexicon;
  /// Labels a raw review; RQ6 is produced only when set.
  std::function<Label(std::string_view)> classifier;
  std::string classifier_name;
};

struct RqReport {
  // RQ1
  DistributionTable categories;
  DistributionTable ratings;
  DistributionTable prices;
  DistributionTable departments;
  std::optional<double> overall_mean_rating;
  // RQ2
  std::vector<JointPoint> size_rating;
  // RQ3
  CorrelationMatrix train_correlations;
  std::optional<CorrelationMatrix> test_correlations;  // needs two joined survey records
  std::size_t unmatched_survey_apps = 0;
  // RQ4
  std::vector<SentimentPoint> sentiment;
  // RQ5
  std::vector<JointPoint> price_installs;
  // RQ6
  std::optional<eval::EvaluationReport> rq6;
};

RqReport rq_report(const RqInputs& inputs, Exec exec = Exec::Parallel);

/// Export file names, in RQ order.
inline constexpr const char* kRqFiles[] = {
    "rq1_distributions.csv", "rq2_size_rating.csv", "rq3_correlations.csv",
    "rq4_sentiment.csv",     "rq5_price_installs.csv", "rq6_confusion.csv"};
inline constexpr const char* kRqSummary = "rq_summary.json";

/// CSV text of each section; RQ6 is empty when absent.
std::string rq1_csv(const RqReport& report);
std::string rq2_csv(const RqReport& report, std::span<const corpus::AppRecord> apps);
std::string rq3_csv(const RqReport& report);
std::string rq4_csv(const RqReport& report);
std::string rq5_csv(const RqReport& report, std::span<const corpus::AppRecord> apps);
std::string rq6_csv(const RqReport& report);
nlohmann::json rq_summary(const RqReport& report);

}  // namespace appsent::analysis
