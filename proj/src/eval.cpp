#include "appsent/eval.hpp"

#include <nlohmann/json.hpp>
#include <functional>
#include <ostream>

#include "appsent/csv.hpp"
#include "appsent/error.hpp"
#include "appsent/strings.hpp"

namespace appsent::eval {

using nlohmann::json;

ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truths) {
  if (predictions.size() != truths.size())
    throw Error(ErrorKind::LengthMismatch, "predictions and truths differ in length");
  if (predictions.empty()) throw Error(ErrorKind::EmptyDataset, "nothing to evaluate");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool predicted = predictions[i] == Label::Positive;
    const bool actual = truths[i] == Label::Positive;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {
double ratio(std::uint64_t num, std::uint64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double precision(const ConfusionMatrix& c) noexcept { return ratio(c.tp, c.tp + c.fp); }
double recall(const ConfusionMatrix& c) noexcept { return ratio(c.tp, c.tp + c.fn); }
double accuracy(const ConfusionMatrix& c) noexcept { return ratio(c.tp + c.tn, c.total()); }

double f_measure(const ConfusionMatrix& c) noexcept {
  const double p = precision(c);
  const double r = recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvaluationReport EvaluationReport::from(std::string model, std::string featurization,
                                        const ConfusionMatrix& c) {
  EvaluationReport r;
  r.model = std::move(model);
  r.featurization = std::move(featurization);
  r.confusion = c;
  r.precision = eval::precision(c);
  r.recall = eval::recall(c);
  r.f_measure = eval::f_measure(c);
  r.accuracy = eval::accuracy(c);
  return r;
}

json to_json(const EvaluationReport& r) {
  json doc{{"model", r.model},
           {"featurization", r.featurization},
           {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
           {"precision", r.precision},
           {"recall", r.recall},
           {"f_measure", r.f_measure},
           {"accuracy", r.accuracy}};
  if (r.error) doc["error"] = *r.error;
  return doc;
}

EvaluationReport report_from_json(const json& doc) {
  try {
    EvaluationReport r;
    r.model = doc.at("model").get<std::string>();
    r.featurization = doc.at("featurization").get<std::string>();
    const auto& c = doc.at("confusion");
    r.confusion = {c.at("tp").get<std::uint64_t>(), c.at("fp").get<std::uint64_t>(),
                   c.at("fn").get<std::uint64_t>(), c.at("tn").get<std::uint64_t>()};
    r.precision = doc.at("precision").get<double>();
    r.recall = doc.at("recall").get<double>();
    r.f_measure = doc.at("f_measure").get<double>();
    r.accuracy = doc.at("accuracy").get<double>();
    if (doc.contains("error")) r.error = doc.at("error").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("report: ") + e.what());
  }
}

namespace {

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

ModelSpec model_spec(std::string_view name, std::uint64_t master_seed,
                     std::size_t bagging_estimators, ensemble::Vote vote) {
  std::string base_name(trim(name));
  bool bagged = false;
  static constexpr std::string_view kSuffix = "(bagging)";
  if (base_name.size() > kSuffix.size() &&
      iequals(std::string_view(base_name).substr(base_name.size() - kSuffix.size()), kSuffix)) {
    bagged = true;
    base_name = std::string(trim(std::string_view(base_name).substr(0, base_name.size() - kSuffix.size())));
  }
  ModelSpec spec;
  spec.config.algorithm = classifiers::parse_algorithm(base_name);
  spec.name = std::string(classifiers::to_string(spec.config.algorithm)) + (bagged ? "(Bagging)" : "");
  const auto cell_seed = derive_seed(master_seed, fnv1a(spec.name));
  spec.config.seed = derive_seed(cell_seed, 0);
  if (bagged) {
    ensemble::BaggingConfig bag;
    bag.base = spec.config;
    bag.n_estimators = bagging_estimators;
    bag.seed = derive_seed(cell_seed, 1);
    bag.vote = vote;
    spec.bagging = bag;
  }
  return spec;
}

std::vector<std::string> default_models() {
  return {"SVM", "KNN", "LR", "RF", "NB", "LR(Bagging)", "NB(Bagging)"};
}

MatrixResult run_matrix(const LabeledDocs& train, const LabeledDocs& test,
                        const std::vector<ModelSpec>& models,
                        const std::vector<vectorize::Featurization>& featurizations, int jobs) {
  if (train.docs.size() != train.labels.size() || test.docs.size() != test.labels.size())
    throw Error(ErrorKind::LengthMismatch, "documents and labels differ in length");
  MatrixResult result;
  for (const auto& m : models) result.models.push_back(m.name);
  for (const auto& f : featurizations) result.featurizations.push_back(f.name);

  const Exec outer = jobs > 1 ? Exec::Parallel : Exec::Serial;
  const Exec inner = jobs > 1 ? Exec::Serial : Exec::Parallel;

  struct Features {
    vectorize::VectorizedDataset train;
    std::vector<SparseVector> test;
    std::optional<std::string> error;
  };
  std::vector<Features> features(featurizations.size());
  parallel_for(featurizations.size(), outer, [&](std::size_t f) {
    try {
      features[f].train = vectorize::fit_transform(train.docs, train.labels, featurizations[f].config, inner);
      features[f].test = vectorize::transform_all(test.docs, features[f].train.vocabulary, inner);
    } catch (const std::exception& e) {
      features[f].error = e.what();
    }
  }, jobs);

  const std::size_t cols = featurizations.size();
  result.cells.resize(models.size() * cols);
  parallel_for(result.cells.size(), outer, [&](std::size_t cell) {
    const auto& spec = models[cell / cols];
    const auto& feat = features[cell % cols];
    auto& report = result.cells[cell];
    report.model = spec.name;
    report.featurization = featurizations[cell % cols].name;
    if (feat.error) {
      report.error = *feat.error;
      return;
    }
    try {
      std::vector<Label> predictions(feat.test.size());
      if (spec.bagging) {
        auto bag = *spec.bagging;
        bag.base = spec.config;
        const auto model = ensemble::fit_bagging(feat.train, bag, inner);
        for (std::size_t i = 0; i < feat.test.size(); ++i)
          predictions[i] = ensemble::predict_bagged(model, feat.test[i]);
      } else {
        const auto model = classifiers::fit(feat.train, spec.config, inner);
        predictions = classifiers::predict_all(model, feat.test, inner);
      }
      report = EvaluationReport::from(report.model, report.featurization,
                                      confusion(predictions, test.labels));
    } catch (const std::exception& e) {
      report.error = e.what();
    }
  }, jobs);
  return result;
}

namespace {

void write_table(std::ostream& out, const MatrixResult& result,
                 const std::function<std::string(const EvaluationReport&)>& value) {
  csv::Row header{"model"};
  header.insert(header.end(), result.featurizations.begin(), result.featurizations.end());
  csv::write_row(out, header);
  for (std::size_t r = 0; r < result.models.size(); ++r) {
    csv::Row row{result.models[r]};
    for (std::size_t c = 0; c < result.featurizations.size(); ++c) {
      const auto& cell = result.at(r, c);
      row.push_back(cell.error ? "NA" : value(cell));
    }
    csv::write_row(out, row);
  }
}

}  // namespace

void write_accuracy_table(std::ostream& out, const MatrixResult& result) {
  write_table(out, result, [](const EvaluationReport& r) { return format_fixed(100.0 * r.accuracy, 2); });
}

void write_fscore_table(std::ostream& out, const MatrixResult& result) {
  write_table(out, result, [](const EvaluationReport& r) { return format_fixed(r.f_measure, 4); });
}

json cells_to_json(const MatrixResult& result) {
  json cells = json::array();
  for (const auto& c : result.cells) cells.push_back(to_json(c));
  return json{{"models", result.models}, {"featurizations", result.featurizations}, {"cells", cells}};
}

}  // namespace appsent::eval
