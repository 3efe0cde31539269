#include "appsent/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "appsent/error.hpp"
#include "appsent/strings.hpp"

namespace appsent::vectorize {

using nlohmann::json;

void VectorizerConfig::validate() const {
  if (ngram_low < 1 || ngram_high < ngram_low)
    throw Error(ErrorKind::InvalidHyperparameter,
                "ngram range (" + std::to_string(ngram_low) + ", " + std::to_string(ngram_high) + ")");
  if (min_df < 1) throw Error(ErrorKind::InvalidHyperparameter, "min_df must be >= 1");
  if (max_features && *max_features == 0)
    throw Error(ErrorKind::InvalidHyperparameter, "max_features must be >= 1");
}

Featurization featurization(std::string_view name, bool cumulative, VectorizerConfig base) {
  int n = 0;
  const auto key = to_lower(trim(name));
  if (key == "uni" || key == "unigram" || key == "1") n = 1;
  if (key == "bi" || key == "bigram" || key == "2") n = 2;
  if (key == "tri" || key == "trigram" || key == "3") n = 3;
  if (n == 0) throw Error(ErrorKind::InvalidHyperparameter, "featurization '" + std::string(name) + "'");
  static constexpr std::string_view kNames[] = {"", "uni", "bi", "tri"};
  base.ngram_low = cumulative ? 1 : n;
  base.ngram_high = n;
  return {std::string(kNames[n]), base};
}

std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, int low, int high) {
  std::vector<std::string> out;
  for (int n = low; n <= high; ++n) {
    const auto width = static_cast<std::size_t>(n);
    if (width > tokens.size()) break;
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < width; ++k) {
        gram.push_back(' ');
        gram.append(tokens[i + k]);
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_frequency,
                       std::size_t corpus_size, VectorizerConfig config)
    : terms_(std::move(terms)), df_(std::move(doc_frequency)), corpus_size_(corpus_size),
      config_(config) {
  if (terms_.size() != df_.size())
    throw Error(ErrorKind::DimensionMismatch, "terms and document frequencies differ in length");
  index_.reserve(terms_.size());
  idf_.reserve(terms_.size());
  const double c = static_cast<double>(corpus_size_);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
      throw Error(ErrorKind::BadFormat, "duplicate term '" + terms_[i] + "'");
    if (df_[i] < 1 || df_[i] > corpus_size_)
      throw Error(ErrorKind::BadFormat, "df out of range for '" + terms_[i] + "'");
    const double df = static_cast<double>(df_[i]);
    idf_.push_back(config_.smooth_idf ? std::log((1.0 + c) / (1.0 + df)) + 1.0 : std::log(c / df));
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Vocabulary::df(std::string_view term) const {
  const auto idx = index_of(term);
  return idx ? df_[*idx] : 0;
}

json config_to_json(const VectorizerConfig& c) {
  return json{{"ngram_low", c.ngram_low},
              {"ngram_high", c.ngram_high},
              {"min_df", c.min_df},
              {"max_features", c.max_features ? json(*c.max_features) : json(nullptr)},
              {"normalize", c.normalize},
              {"smooth_idf", c.smooth_idf},
              {"sublinear_tf", c.sublinear_tf},
              {"allow_empty_vocabulary", c.allow_empty_vocabulary}};
}

VectorizerConfig config_from_json(const json& doc) {
  VectorizerConfig c;
  try {
    c.ngram_low = doc.value("ngram_low", c.ngram_low);
    c.ngram_high = doc.value("ngram_high", c.ngram_high);
    c.min_df = doc.value("min_df", c.min_df);
    if (doc.contains("max_features")) {
      const auto& mf = doc.at("max_features");
      c.max_features = mf.is_null() ? std::nullopt : std::optional<std::size_t>(mf.get<std::size_t>());
    }
    c.normalize = doc.value("normalize", c.normalize);
    c.smooth_idf = doc.value("smooth_idf", c.smooth_idf);
    c.sublinear_tf = doc.value("sublinear_tf", c.sublinear_tf);
    c.allow_empty_vocabulary = doc.value("allow_empty_vocabulary", c.allow_empty_vocabulary);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("vectorizer config: ") + e.what());
  }
  c.validate();
  return c;
}

json Vocabulary::to_json() const {
  json terms = json::array();
  for (std::size_t i = 0; i < terms_.size(); ++i) terms.push_back(json::array({terms_[i], i, df_[i]}));
  return json{{"format", "appsent-vocabulary"},
              {"version", 1},
              {"corpus_size", corpus_size_},
              {"config", config_to_json(config_)},
              {"terms", std::move(terms)}};
}

Vocabulary Vocabulary::from_json(const json& doc) {
  try {
    if (doc.at("format") != "appsent-vocabulary" || doc.at("version") != 1)
      throw Error(ErrorKind::BadFormat, "not a version 1 vocabulary document");
    const auto& rows = doc.at("terms");
    std::vector<std::string> terms(rows.size());
    std::vector<std::uint32_t> df(rows.size());
    std::vector<bool> filled(rows.size(), false);
    for (const auto& row : rows) {
      const auto idx = row.at(1).get<std::size_t>();
      if (idx >= rows.size() || filled[idx])
        throw Error(ErrorKind::BadFormat, "term indices are not dense");
      filled[idx] = true;
      terms[idx] = row.at(0).get<std::string>();
      df[idx] = row.at(2).get<std::uint32_t>();
    }
    return Vocabulary(std::move(terms), std::move(df), doc.at("corpus_size").get<std::size_t>(),
                      config_from_json(doc.at("config")));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("vocabulary: ") + e.what());
  }
}

namespace {

struct TermStats {
  std::uint64_t df = 0;
  std::uint64_t count = 0;
};

using TermCounts = std::unordered_map<std::string, TermStats>;

void count_documents(std::span<const textprep::TokenizedDocument> docs, const VectorizerConfig& config,
                     TermCounts& counts) {
  std::unordered_set<std::string> seen;
  for (const auto& doc : docs) {
    seen.clear();
    for (auto& gram : extract_ngrams(doc.tokens, config.ngram_low, config.ngram_high)) {
      auto& s = counts[gram];
      ++s.count;
      if (seen.insert(std::move(gram)).second) ++s.df;
    }
  }
}

}  // namespace

Vocabulary fit_vocabulary(std::span<const textprep::TokenizedDocument> corpus,
                          const VectorizerConfig& config, Exec exec) {
  config.validate();
  if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "cannot fit a vocabulary on zero documents");

  // Sharded counting; integer sums make the merge order irrelevant.
  const std::size_t shards =
      exec == Exec::Serial ? 1 : std::min<std::size_t>(corpus.size(), 4 * static_cast<std::size_t>(available_threads()));
  std::vector<TermCounts> partial(shards);
  parallel_for(shards, exec, [&](std::size_t s) {
    const std::size_t begin = corpus.size() * s / shards;
    const std::size_t end = corpus.size() * (s + 1) / shards;
    count_documents(corpus.subspan(begin, end - begin), config, partial[s]);
  });
  TermCounts counts = std::move(partial[0]);
  for (std::size_t s = 1; s < shards; ++s) {
    for (auto& [term, stats] : partial[s]) {
      auto& total = counts[term];
      total.df += stats.df;
      total.count += stats.count;
    }
  }

  std::vector<std::pair<std::string, TermStats>> kept;
  kept.reserve(counts.size());
  for (auto& [term, stats] : counts) {
    if (stats.df >= config.min_df) kept.emplace_back(term, stats);
  }
  if (config.max_features && kept.size() > *config.max_features) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second.count != b.second.count) return a.second.count > b.second.count;
      return a.first < b.first;
    });
    kept.resize(*config.max_features);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (kept.empty() && !config.allow_empty_vocabulary)
    throw Error(ErrorKind::EmptyVocabulary, "no n-grams survive the vocabulary filters");

  std::vector<std::string> terms;
  std::vector<std::uint32_t> df;
  terms.reserve(kept.size());
  df.reserve(kept.size());
  for (auto& [term, stats] : kept) {
    terms.push_back(std::move(term));
    df.push_back(static_cast<std::uint32_t>(stats.df));
  }
  return Vocabulary(std::move(terms), std::move(df), corpus.size(), config);
}

SparseVector transform(const textprep::TokenizedDocument& doc, const Vocabulary& vocab) {
  const auto& config = vocab.config();
  const auto& idf = vocab.idf();
  if (idf.size() != vocab.size() || vocab.doc_frequency().size() != vocab.size())
    throw Error(ErrorKind::DimensionMismatch, "vocabulary tables disagree in size");

  std::map<std::uint32_t, std::uint32_t> tf;
  for (const auto& gram : extract_ngrams(doc.tokens, config.ngram_low, config.ngram_high)) {
    if (const auto idx = vocab.index_of(gram)) ++tf[*idx];
  }
  SparseVector v;
  v.dimension = vocab.size();
  v.entries.reserve(tf.size());
  for (const auto& [idx, count] : tf) {
    const double t = config.sublinear_tf ? 1.0 + std::log(static_cast<double>(count))
                                         : static_cast<double>(count);
    const double w = t * idf[idx];
    if (w != 0.0) v.entries.push_back({idx, w});
  }
  if (config.normalize) {
    const double norm = v.norm();
    if (norm > 0.0) {
      for (auto& e : v.entries) e.weight /= norm;
    }
  }
  return v;
}

std::vector<SparseVector> transform_all(std::span<const textprep::TokenizedDocument> docs,
                                        const Vocabulary& vocab, Exec exec) {
  std::vector<SparseVector> out(docs.size());
  parallel_for(docs.size(), exec, [&](std::size_t i) { out[i] = transform(docs[i], vocab); });
  return out;
}

VectorizedDataset fit_transform(std::span<const textprep::TokenizedDocument> corpus,
                                std::span<const Label> labels, const VectorizerConfig& config,
                                Exec exec) {
  if (corpus.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch, "documents and labels differ in length");
  VectorizedDataset ds;
  ds.vocabulary = fit_vocabulary(corpus, config, exec);
  ds.matrix = transform_all(corpus, ds.vocabulary, exec);
  ds.labels.assign(labels.begin(), labels.end());
  return ds;
}

}  // namespace appsent::vectorize
