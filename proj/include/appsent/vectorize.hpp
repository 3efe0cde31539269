#pragma once

// N-gram vocabularies and TF-IDF weighting:
//   weight(w, d) = tf(w, d) * ln(C / df(w))
// with tf the raw count of w in d, C the number of fitted documents and df(w)
// the number of fitted documents containing w.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "appsent/exec.hpp"
#include "appsent/label.hpp"
#include "appsent/sparse.hpp"
#include "appsent/textprep.hpp"

namespace appsent::vectorize {

struct VectorizerConfig {
  int ngram_low = 1;
  int ngram_high = 1;
  std::size_t min_df = 1;
  std::optional<std::size_t> max_features = 20000;
  bool normalize = true;      // L2 row normalization after weighting
  bool smooth_idf = false;    // ln((1 + C) / (1 + df)) + 1
  bool sublinear_tf = false;  // 1 + ln(tf)
  bool allow_empty_vocabulary = false;

  /// Throws InvalidHyperparameter.
  void validate() const;

  friend bool operator==(const VectorizerConfig&, const VectorizerConfig&) = default;
};

/// Named featurization, e.g. "tri" = cumulative n-grams 1..3.
struct Featurization {
  std::string name;
  VectorizerConfig config;
};

/// "uni", "bi", "tri" (or "1".."3"); cumulative selects 1..n, otherwise n..n.
/// Throws InvalidHyperparameter.
Featurization featurization(std::string_view name, bool cumulative = true,
                            VectorizerConfig base = {});

/// All windows of length n for n in [low, high], space-joined, left to right.
std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, int low, int high);

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Terms must be unique; index i is assigned to terms[i].
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_frequency,
             std::size_t corpus_size, VectorizerConfig config);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t corpus_size() const noexcept { return corpus_size_; }
  const VectorizerConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint32_t>& doc_frequency() const noexcept { return df_; }
  const std::vector<double>& idf() const noexcept { return idf_; }

  std::optional<std::uint32_t> index_of(std::string_view term) const;
  std::uint32_t df(std::string_view term) const;

  nlohmann::json to_json() const;
  /// Throws BadFormat on a document that violates the vocabulary invariants.
  static Vocabulary from_json(const nlohmann::json& doc);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_ && a.corpus_size_ == b.corpus_size_ &&
           a.config_ == b.config_;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> df_;
  std::vector<double> idf_;
  std::size_t corpus_size_ = 0;
  VectorizerConfig config_;
};

struct VectorizedDataset {
  std::vector<SparseVector> matrix;
  std::vector<Label> labels;
  Vocabulary vocabulary;

  std::size_t rows() const noexcept { return matrix.size(); }
  std::size_t dimension() const noexcept { return vocabulary.size(); }
};

/// Throws EmptyCorpus, EmptyVocabulary (unless allowed by config).
Vocabulary fit_vocabulary(std::span<const textprep::TokenizedDocument> corpus,
                          const VectorizerConfig& config, Exec exec = Exec::Parallel);

/// Throws DimensionMismatch when the vocabulary is internally inconsistent.
SparseVector transform(const textprep::TokenizedDocument& doc, const Vocabulary& vocab);

std::vector<SparseVector> transform_all(std::span<const textprep::TokenizedDocument> docs,
                                        const Vocabulary& vocab, Exec exec = Exec::Parallel);

/// Throws LengthMismatch plus the errors of fit_vocabulary.
VectorizedDataset fit_transform(std::span<const textprep::TokenizedDocument> corpus,
                                std::span<const Label> labels, const VectorizerConfig& config,
                                Exec exec = Exec::Parallel);

nlohmann::json config_to_json(const VectorizerConfig& config);
VectorizerConfig config_from_json(const nlohmann::json& doc);

}  // namespace appsent::vectorize
