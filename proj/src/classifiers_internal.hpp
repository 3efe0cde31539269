#pragma once

#include "appsent/classifiers.hpp"

namespace appsent::classifiers::internal {

NbParams fit_naive_bayes(const DataView& data, double alpha);
LinearParams fit_logistic(const DataView& data, const ModelConfig& config, Exec exec);
LinearParams fit_linear_svm(const DataView& data, const ModelConfig& config);
KnnIndex fit_knn(const DataView& data, std::size_t k);
Forest fit_forest(const DataView& data, const ModelConfig& config, Exec exec);

/// {negative votes, positive votes} among the k nearest neighbours, and the
/// label of the single nearest one.
struct KnnVote {
  std::size_t negative = 0;
  std::size_t positive = 0;
  Label nearest = Label::Positive;
};
KnnVote knn_vote(const KnnIndex& index, const SparseVector& query);

}  // namespace appsent::classifiers::internal
