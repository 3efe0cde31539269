#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "appsent/exec.hpp"
#include "appsent/label.hpp"
#include "appsent/rng.hpp"
#include "appsent/sparse.hpp"

namespace appsent::vectorize {
struct VectorizedDataset;
}

namespace appsent::classifiers {

enum class Algorithm { NB, LR, SVM, KNN, RF };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Throws InvalidHyperparameter.
Algorithm parse_algorithm(std::string_view name);

using Hyperparameters = std::map<std::string, double>;

struct ModelConfig {
  Algorithm algorithm = Algorithm::LR;
  Hyperparameters hyperparameters;  // unset keys take the defaults below
  std::uint64_t seed = kDefaultSeed;

  /// Rejects unknown keys and out-of-range values (InvalidHyperparameter).
  void validate() const;
  /// Value of `key`, or its default for this algorithm.
  double get(const std::string& key) const;
};

/// Defaults per algorithm:
///   NB  alpha=1
///   LR  lambda=1e-4 step=0.5 tolerance=1e-6 max_epochs=1000
///   SVM lambda=1e-4 epochs=20
///   KNN k=5
///   RF  n_trees=100 max_features=0 (ceil(sqrt(d))) bootstrap=1 min_samples_split=2
const Hyperparameters& default_hyperparameters(Algorithm algorithm);

/// Rows and labels used for training: either a whole dataset or a selection
/// of its rows (with repetition, for bootstrap samples). Non-owning.
class DataView {
 public:
  DataView(std::span<const SparseVector> rows, std::span<const Label> labels, std::size_t dimension);
  DataView(std::span<const SparseVector> rows, std::span<const Label> labels, std::size_t dimension,
           std::vector<std::uint32_t> selection);
  explicit DataView(const vectorize::VectorizedDataset& dataset);

  std::size_t size() const noexcept { return selected_ ? selection_.size() : rows_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const SparseVector& row(std::size_t i) const { return rows_[source_index(i)]; }
  Label label(std::size_t i) const { return labels_[source_index(i)]; }
  std::size_t source_index(std::size_t i) const { return selected_ ? selection_[i] : i; }
  /// Count of rows per class, {negative, positive}.
  std::array<std::size_t, 2> class_counts() const;

 private:
  std::span<const SparseVector> rows_;
  std::span<const Label> labels_;
  std::size_t dimension_ = 0;
  std::vector<std::uint32_t> selection_;
  bool selected_ = false;
};

struct NbParams {
  double alpha = 1.0;
  std::array<double, 2> log_prior{};                    // [Negative, Positive]
  std::array<std::vector<double>, 2> log_likelihood{};  // per class, per term
};

/// Shared by LR and SVM: score = weights . x + bias.
struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t epochs_run = 0;
};

struct KnnIndex {
  std::size_t k = 5;
  std::vector<SparseVector> vectors;
  std::vector<Label> labels;
  std::vector<double> norms;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::uint32_t, 2> class_counts{};  // training samples reaching the node
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  Label predict(const SparseVector& x) const;
  const TreeNode& leaf_for(const SparseVector& x) const;
};

struct Forest {
  std::vector<DecisionTree> trees;
};

using ModelParams = std::variant<NbParams, LinearParams, KnnIndex, Forest>;

struct FittedModel {
  ModelConfig config;
  std::size_t dimension = 0;
  ModelParams params;
};

/// Throws EmptyDataset, SingleClassDataset, InvalidHyperparameter, DimensionMismatch.
FittedModel fit(const DataView& data, const ModelConfig& config, Exec exec = Exec::Parallel);
FittedModel fit(const vectorize::VectorizedDataset& dataset, const ModelConfig& config,
                Exec exec = Exec::Parallel);

/// Throws DimensionMismatch.
Label predict(const FittedModel& model, const SparseVector& x);

/// Monotone confidence for Positive: NB/LR posterior, SVM margin, KNN positive
/// vote fraction, RF positive tree fraction. Throws DimensionMismatch.
double predict_score(const FittedModel& model, const SparseVector& x);

/// predict_score mapped into [0, 1]; SVM margins pass through a logistic.
double positive_probability(const FittedModel& model, const SparseVector& x);

std::vector<Label> predict_all(const FittedModel& model, std::span<const SparseVector> rows,
                               Exec exec = Exec::Parallel);

nlohmann::json to_json(const FittedModel& model);
/// Throws BadFormat.
FittedModel model_from_json(const nlohmann::json& doc);

// Building blocks exposed for the finite-difference and exhaustive oracle tests.
namespace detail {

double sigmoid(double z) noexcept;

/// Mean logistic loss plus (lambda / 2) * |w|^2; the bias is not penalized.
double logistic_loss(const DataView& data, std::span<const double> weights, double bias,
                     double lambda);

/// Gradient of logistic_loss; returns the weight gradient and writes the bias gradient.
std::vector<double> logistic_gradient(const DataView& data, std::span<const double> weights,
                                      double bias, double lambda, double& bias_gradient,
                                      Exec exec = Exec::Serial);

/// Cosine similarity of every indexed vector with `query` (0 for zero vectors).
std::vector<double> cosine_scan(const KnnIndex& index, const SparseVector& query, Exec exec);

/// Indices of the k most similar vectors: similarity descending, index ascending.
std::vector<std::size_t> nearest(const KnnIndex& index, const SparseVector& query, Exec exec);

/// NB joint log-probabilities log P(c) + sum_j x_j log P(j | c).
std::array<double, 2> nb_joint_log(const NbParams& nb, const SparseVector& x);

}  // namespace detail

}  // namespace appsent::classifiers
