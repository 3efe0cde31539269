#include "appsent/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "appsent/csv.hpp"
#include "appsent/error.hpp"
#include "appsent/strings.hpp"
#include "appsent/textprep.hpp"

namespace appsent::analysis {

using nlohmann::json;

std::size_t DistributionTable::total() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.count;
  return n;
}

namespace {

struct Accumulator {
  std::size_t count = 0;
  double rating_sum = 0.0;
  std::size_t rated = 0;
  double price_sum = 0.0;
  std::size_t priced = 0;
};

DistributionTable finish(std::string field, const std::map<std::string, Accumulator>& groups,
                         std::size_t excluded) {
  DistributionTable table;
  table.field = std::move(field);
  table.excluded = excluded;
  for (const auto& [key, acc] : groups) {
    DistributionRow row{key, acc.count, std::nullopt, std::nullopt};
    if (acc.rated) row.mean_rating = acc.rating_sum / static_cast<double>(acc.rated);
    if (acc.priced) row.mean_price = acc.price_sum / static_cast<double>(acc.priced);
    table.rows.push_back(std::move(row));
  }
  // std::map iteration is already key-ascending; a stable sort keeps it within equal counts.
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const DistributionRow& a, const DistributionRow& b) { return a.count > b.count; });
  return table;
}

std::optional<std::string> app_key(const corpus::AppRecord& a, std::string_view field) {
  const auto text = [](const std::string& s) -> std::optional<std::string> {
    if (trim(s).empty()) return std::nullopt;
    return std::string(trim(s));
  };
  if (field == "category") return text(a.category);
  if (field == "genres") return text(a.genres);
  if (field == "content_rating") return text(a.content_rating);
  if (field == "android_version") return text(a.android_version);
  if (field == "app_type") return std::string(corpus::to_string(a.app_type));
  if (field == "rating") {
    if (!a.rating) return std::nullopt;
    return format_double(*a.rating);
  }
  if (field == "price") return format_double(a.price);
  throw Error(ErrorKind::UnknownField, "cannot group app records by '" + std::string(field) + "'");
}

std::optional<std::string> student_key(const corpus::StudentRecord& s, std::string_view field) {
  const auto text = [](const std::string& v) -> std::optional<std::string> {
    if (trim(v).empty()) return std::nullopt;
    return std::string(trim(v));
  };
  if (field == "department") return text(s.department);
  if (field == "app_name") return text(s.app_name);
  if (field == "app_type") return std::string(corpus::to_string(s.app_type));
  if (field == "rating") return format_double(s.rating);
  throw Error(ErrorKind::UnknownField, "cannot group survey records by '" + std::string(field) + "'");
}

}  // namespace

DistributionTable distribution(std::span<const corpus::AppRecord> apps, std::string_view field) {
  if (apps.empty()) app_key(corpus::AppRecord{}, field);  // validates the field name
  std::map<std::string, Accumulator> groups;
  std::size_t excluded = 0;
  for (const auto& a : apps) {
    const auto key = app_key(a, field);
    if (!key) {
      ++excluded;
      continue;
    }
    auto& acc = groups[*key];
    ++acc.count;
    if (a.rating) {
      acc.rating_sum += *a.rating;
      ++acc.rated;
    }
    acc.price_sum += a.price;
    ++acc.priced;
  }
  return finish(std::string(field), groups, excluded);
}

DistributionTable distribution(std::span<const corpus::StudentRecord> students, std::string_view field) {
  if (students.empty()) student_key(corpus::StudentRecord{}, field);
  std::map<std::string, Accumulator> groups;
  std::size_t excluded = 0;
  for (const auto& s : students) {
    const auto key = student_key(s, field);
    if (!key) {
      ++excluded;
      continue;
    }
    auto& acc = groups[*key];
    ++acc.count;
    acc.rating_sum += s.rating;
    ++acc.rated;
  }
  return finish(std::string(field), groups, excluded);
}

std::optional<double> mean_rating(std::span<const corpus::AppRecord> apps) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& a : apps) {
    if (a.rating) {
      sum += *a.rating;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double pearson(std::span<const std::optional<double>> xs, std::span<const std::optional<double>> ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorKind::LengthMismatch, "pearson: " + std::to_string(xs.size()) + " vs " +
                                               std::to_string(ys.size()) + " values");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] && ys[i] && std::isfinite(*xs[i]) && std::isfinite(*ys[i])) {
      x.push_back(*xs[i]);
      y.push_back(*ys[i]);
    }
  }
  if (x.size() < 2)
    throw Error(ErrorKind::TooFewPairs, "pearson needs at least 2 complete pairs, found " + std::to_string(x.size()));
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    warn("pearson: zero variance, coefficient reported as 0");
    return 0.0;
  }
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  std::vector<std::optional<double>> ox(xs.begin(), xs.end()), oy(ys.begin(), ys.end());
  return pearson(std::span<const std::optional<double>>(ox), std::span<const std::optional<double>>(oy));
}

const std::vector<std::string>& numeric_fields() {
  static const std::vector<std::string> fields{"rating", "reviews_count", "size_bytes", "installs", "price"};
  return fields;
}

std::optional<double> numeric_value(const corpus::AppRecord& app, std::string_view field) {
  if (field == "rating") return app.rating;
  if (field == "reviews_count") return static_cast<double>(app.reviews_count);
  if (field == "size_bytes") {
    if (!app.size_bytes) return std::nullopt;
    return static_cast<double>(*app.size_bytes);
  }
  if (field == "installs") return static_cast<double>(app.installs);
  if (field == "price") return app.price;
  throw Error(ErrorKind::UnknownField, "'" + std::string(field) + "' is not a numeric app field");
}

double CorrelationMatrix::at(std::string_view a, std::string_view b) const {
  const auto index = [&](std::string_view name) {
    const auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) throw Error(ErrorKind::UnknownField, std::string(name));
    return static_cast<std::size_t>(it - variables.begin());
  };
  return at(index(a), index(b));
}

CorrelationMatrix correlation_matrix(std::span<const corpus::AppRecord> apps) {
  CorrelationMatrix m;
  m.variables = numeric_fields();
  const std::size_t k = m.variables.size();
  std::vector<std::vector<std::optional<double>>> columns(k);
  for (std::size_t v = 0; v < k; ++v) {
    columns[v].reserve(apps.size());
    for (const auto& a : apps) columns[v].push_back(numeric_value(a, m.variables[v]));
  }
  m.values.assign(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    m.values[i * k + i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      double r = 0.0;
      try {
        r = pearson(columns[i], columns[j]);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::TooFewPairs) throw;
        warn("correlation of " + m.variables[i] + " and " + m.variables[j] + ": " + e.what());
      }
      m.values[i * k + j] = m.values[j * k + i] = r;
    }
  }
  return m;
}

JoinedSurvey join_survey(std::span<const corpus::StudentRecord> students,
                         std::span<const corpus::AppRecord> apps) {
  std::unordered_map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < apps.size(); ++i) by_name.try_emplace(to_lower(trim(apps[i].app_name)), i);
  JoinedSurvey joined;
  for (const auto& s : students) {
    const auto it = by_name.find(to_lower(trim(s.app_name)));
    if (it == by_name.end()) {
      ++joined.unmatched;
      continue;
    }
    auto app = apps[it->second];
    app.rating = s.rating;
    joined.apps.push_back(std::move(app));
  }
  return joined;
}

std::vector<JointPoint> joint_data(std::span<const corpus::AppRecord> apps, std::string_view x_field,
                                   std::string_view y_field) {
  numeric_value(corpus::AppRecord{}, x_field);
  numeric_value(corpus::AppRecord{}, y_field);
  std::vector<JointPoint> points;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const auto x = numeric_value(apps[i], x_field);
    const auto y = numeric_value(apps[i], y_field);
    if (x && y) points.push_back({i, *x, *y});
  }
  return points;
}

RqReport rq_report(const RqInputs& in, Exec exec) {
  RqReport report;
  report.categories = distribution(in.apps, "category");
  report.ratings = distribution(in.apps, "rating");
  report.prices = distribution(in.apps, "price");
  report.departments = distribution(in.students, "department");
  report.overall_mean_rating = mean_rating(in.apps);

  report.size_rating = joint_data(in.apps, "size_bytes", "rating");

  report.train_correlations = correlation_matrix(in.apps);
  const auto joined = join_survey(in.students, in.apps);
  report.unmatched_survey_apps = joined.unmatched;
  if (joined.apps.size() >= 2) report.test_correlations = correlation_matrix(joined.apps);

  const auto& lex = in.lexicon ? *in.lexicon : *lexicon::default_lexicon();
  const std::size_t n_train = in.train_reviews.size();
  report.sentiment.resize(n_train + in.students.size());
  parallel_for(report.sentiment.size(), exec, [&](std::size_t i) {
    auto& point = report.sentiment[i];
    if (i < n_train) {
      const auto& r = in.train_reviews[i];
      point = {r.source, r.app_name, lexicon::score_text(r.raw_text, lex)};
    } else {
      const auto& s = in.students[i - n_train];
      point = {corpus::Source::Student, s.app_name, lexicon::score_text(s.review_text, lex)};
    }
  });

  report.price_installs = joint_data(in.apps, "price", "installs");

  if (in.classifier && !in.students.empty()) {
    std::vector<Label> predictions(in.students.size()), truths(in.students.size());
    for (std::size_t i = 0; i < in.students.size(); ++i) {
      predictions[i] = in.classifier(in.students[i].review_text);
      truths[i] = corpus::derive_label(in.students[i].rating);
    }
    report.rq6 = eval::EvaluationReport::from(in.classifier_name, "", eval::confusion(predictions, truths));
  }
  return report;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string render(const std::vector<csv::Row>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) csv::write_row(out, r);
  return out.str();
}

void distribution_rows(std::vector<csv::Row>& rows, const std::string& section, const DistributionTable& t) {
  for (const auto& r : t.rows)
    rows.push_back({section, r.key, std::to_string(r.count), opt(r.mean_rating), opt(r.mean_price)});
}

void matrix_rows(std::vector<csv::Row>& rows, const std::string& corpus, const CorrelationMatrix& m) {
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    csv::Row row{corpus, m.variables[i]};
    for (std::size_t j = 0; j < m.variables.size(); ++j) row.push_back(format_double(m.at(i, j)));
    rows.push_back(std::move(row));
  }
}

json distribution_json(const DistributionTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row{{"key", r.key}, {"count", r.count}};
    if (r.mean_rating) row["mean_rating"] = *r.mean_rating;
    if (r.mean_price) row["mean_price"] = *r.mean_price;
    rows.push_back(std::move(row));
  }
  return json{{"field", t.field}, {"excluded", t.excluded}, {"rows", std::move(rows)}};
}

json matrix_json(const CorrelationMatrix& m) {
  json values = json::array();
  for (std::size_t i = 0; i < m.variables.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.variables.size(); ++j) row.push_back(m.at(i, j));
    values.push_back(std::move(row));
  }
  return json{{"variables", m.variables}, {"values", std::move(values)}};
}

}  // namespace

std::string rq1_csv(const RqReport& report) {
  std::vector<csv::Row> rows{{"section", "key", "count", "mean_rating", "mean_price"}};
  distribution_rows(rows, "category", report.categories);
  distribution_rows(rows, "rating", report.ratings);
  distribution_rows(rows, "price", report.prices);
  distribution_rows(rows, "department", report.departments);
  return render(rows);
}

std::string rq2_csv(const RqReport& report, std::span<const corpus::AppRecord> apps) {
  std::vector<csv::Row> rows{{"app_name", "size_bytes", "rating"}};
  for (const auto& p : report.size_rating)
    rows.push_back({apps[p.record].app_name, format_double(p.x), format_double(p.y)});
  return render(rows);
}

std::string rq3_csv(const RqReport& report) {
  csv::Row header{"corpus", "variable"};
  for (const auto& v : report.train_correlations.variables) header.push_back(v);
  std::vector<csv::Row> rows{header};
  matrix_rows(rows, "train", report.train_correlations);
  if (report.test_correlations) matrix_rows(rows, "test", *report.test_correlations);
  return render(rows);
}

std::string rq4_csv(const RqReport& report) {
  std::vector<csv::Row> rows{{"source", "app_name", "polarity", "subjectivity", "orientation"}};
  for (const auto& p : report.sentiment)
    rows.push_back({std::string(corpus::to_string(p.source)), p.app_name, format_double(p.score.polarity),
                    format_double(p.score.subjectivity), std::string(lexicon::to_string(p.score.orientation))});
  return render(rows);
}

std::string rq5_csv(const RqReport& report, std::span<const corpus::AppRecord> apps) {
  std::vector<csv::Row> rows{{"app_name", "price", "installs"}};
  for (const auto& p : report.price_installs)
    rows.push_back({apps[p.record].app_name, format_double(p.x), format_double(p.y)});
  return render(rows);
}

std::string rq6_csv(const RqReport& report) {
  if (!report.rq6) return {};
  const auto& r = *report.rq6;
  std::vector<csv::Row> rows{{"model", "tp", "fp", "fn", "tn", "precision", "recall", "f_measure", "accuracy"}};
  rows.push_back({r.model, std::to_string(r.confusion.tp), std::to_string(r.confusion.fp),
                  std::to_string(r.confusion.fn), std::to_string(r.confusion.tn), format_double(r.precision),
                  format_double(r.recall), format_double(r.f_measure), format_double(r.accuracy)});
  return render(rows);
}

json rq_summary(const RqReport& report) {
  std::size_t counts[3] = {0, 0, 0};
  double polarity_sum = 0.0, subjectivity_sum = 0.0;
  for (const auto& p : report.sentiment) {
    ++counts[static_cast<int>(p.score.orientation)];
    polarity_sum += p.score.polarity;
    subjectivity_sum += p.score.subjectivity;
  }
  const double n = static_cast<double>(std::max<std::size_t>(report.sentiment.size(), 1));
  json rq1{{"categories", distribution_json(report.categories)},
           {"ratings", distribution_json(report.ratings)},
           {"prices", distribution_json(report.prices)},
           {"departments", distribution_json(report.departments)},
           {"mean_rating", report.overall_mean_rating ? json(*report.overall_mean_rating) : json(nullptr)}};
  json rq3{{"train", matrix_json(report.train_correlations)},
           {"test", report.test_correlations ? matrix_json(*report.test_correlations) : json(nullptr)},
           {"unmatched_survey_apps", report.unmatched_survey_apps}};
  json rq4{{"reviews", report.sentiment.size()},
           {"positive", counts[static_cast<int>(lexicon::Orientation::Positive)]},
           {"neutral", counts[static_cast<int>(lexicon::Orientation::Neutral)]},
           {"negative", counts[static_cast<int>(lexicon::Orientation::Negative)]},
           {"mean_polarity", polarity_sum / n},
           {"mean_subjectivity", subjectivity_sum / n}};
  json doc{{"format", "appsent-rq-summary"},
           {"version", 1},
           {"rq1", std::move(rq1)},
           {"rq2", {{"points", report.size_rating.size()}}},
           {"rq3", std::move(rq3)},
           {"rq4", std::move(rq4)},
           {"rq5", {{"points", report.price_installs.size()}}},
           {"rq6", report.rq6 ? eval::to_json(*report.rq6) : json(nullptr)}};
  return doc;
}

}  // namespace appsent::analysis
