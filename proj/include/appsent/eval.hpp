#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "appsent/classifiers.hpp"
#include "appsent/ensemble.hpp"
#include "appsent/label.hpp"
#include "appsent/textprep.hpp"
#include "appsent/vectorize.hpp"

namespace appsent::eval {

/// Positive is the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws LengthMismatch, EmptyDataset.
ConfusionMatrix confusion(std::span<const Label> predictions, std::span<const Label> truths);

// Zero denominators yield 0.
double precision(const ConfusionMatrix& c) noexcept;
double recall(const ConfusionMatrix& c) noexcept;
double f_measure(const ConfusionMatrix& c) noexcept;
double accuracy(const ConfusionMatrix& c) noexcept;

struct EvaluationReport {
  std::string model;
  std::string featurization;
  ConfusionMatrix confusion;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  double accuracy = 0.0;
  std::optional<std::string> error;  // set when the cell failed

  static EvaluationReport from(std::string model, std::string featurization, const ConfusionMatrix& c);
  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

nlohmann::json to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& doc);

/// A grid row: a base classifier, optionally wrapped in bagging.
struct ModelSpec {
  std::string name;  // e.g. "LR" or "LR(Bagging)"
  classifiers::ModelConfig config;
  std::optional<ensemble::BaggingConfig> bagging;  // base is taken from `config`
};

/// "SVM", "KNN", "LR", "RF", "NB" or "<base>(Bagging)". Seeds derive from the
/// master seed and the row name, so a cell does not depend on its neighbours.
/// Throws InvalidHyperparameter.
ModelSpec model_spec(std::string_view name, std::uint64_t master_seed,
                     std::size_t bagging_estimators = 10,
                     ensemble::Vote vote = ensemble::Vote::Hard);

/// The seven default grid rows, in reporting order.
std::vector<std::string> default_models();

struct LabeledDocs {
  std::vector<textprep::TokenizedDocument> docs;
  std::vector<Label> labels;
};

struct MatrixResult {
  std::vector<std::string> models;         // row order
  std::vector<std::string> featurizations; // column order
  std::vector<EvaluationReport> cells;     // row-major
  const EvaluationReport& at(std::size_t row, std::size_t col) const {
    return cells[row * featurizations.size() + col];
  }
};

/// Fits each featurization on `train`, evaluates every model on `test`.
/// Cells run concurrently up to `jobs`; a failing cell records its error and
/// the others proceed. Output order is fixed by the inputs.
MatrixResult run_matrix(const LabeledDocs& train, const LabeledDocs& test,
                        const std::vector<ModelSpec>& models,
                        const std::vector<vectorize::Featurization>& featurizations, int jobs = 1);

/// Rows = models, columns = featurizations. Accuracy in percent (2 decimals),
/// F-measure with 4 decimals; failed cells print "NA".
void write_accuracy_table(std::ostream& out, const MatrixResult& result);
void write_fscore_table(std::ostream& out, const MatrixResult& result);
nlohmann::json cells_to_json(const MatrixResult& result);

}  // namespace appsent::eval
