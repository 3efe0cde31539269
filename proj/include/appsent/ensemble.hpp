#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "appsent/classifiers.hpp"
#include "appsent/vectorize.hpp"

namespace appsent::ensemble {

enum class Vote { Hard, SoftAverage };

std::string_view to_string(Vote vote) noexcept;
Vote parse_vote(std::string_view text);

struct BaggingConfig {
  classifiers::ModelConfig base;
  std::size_t n_estimators = 10;
  std::uint64_t seed = kDefaultSeed;
  Vote vote = Vote::Hard;
  /// Test hook: every member trains on the full dataset in original order.
  bool identity_bootstrap = false;
};

struct BaggedModel {
  std::vector<classifiers::FittedModel> members;
  Vote vote = Vote::Hard;
};

/// Retries allowed when a bootstrap sample holds a single class.
inline constexpr int kMaxSingleClassRetries = 10;

/// N uniform draws with replacement from [0, N). Throws EmptyDataset.
std::vector<std::uint32_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

/// Resampled copy of `dataset`; labels follow their rows. Throws EmptyDataset.
vectorize::VectorizedDataset bootstrap_sample(const vectorize::VectorizedDataset& dataset,
                                              std::uint64_t seed);

/// Member i trains on bootstrap_indices(N, derive_seed(seed, {i, retry})).
BaggedModel fit_bagging(const classifiers::DataView& data, const BaggingConfig& config,
                        Exec exec = Exec::Parallel);
BaggedModel fit_bagging(const vectorize::VectorizedDataset& dataset, const BaggingConfig& config,
                        Exec exec = Exec::Parallel);

/// Hard: majority vote, a tie goes to the side with the larger summed member
/// probability (then Positive). SoftAverage: mean member probability >= 0.5.
/// Throws DimensionMismatch.
Label predict_bagged(const BaggedModel& model, const SparseVector& x);

/// Mean member probability of Positive.
double predict_bagged_score(const BaggedModel& model, const SparseVector& x);

/// Writes <dir>/<stem>.json (manifest) and <dir>/<stem>.member-NNN.json.
void save_bagged(const BaggedModel& model, const std::filesystem::path& dir, std::string_view stem);
/// Throws MissingFile, BadFormat.
BaggedModel load_bagged(const std::filesystem::path& manifest);

}  // namespace appsent::ensemble
