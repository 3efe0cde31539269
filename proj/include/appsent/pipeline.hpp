#pragma once

// The command layer: run configuration, the five subcommands, trained model
// artifacts and reproducibility manifests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "appsent/classifiers.hpp"
#include "appsent/corpus.hpp"
#include "appsent/ensemble.hpp"
#include "appsent/textprep.hpp"
#include "appsent/vectorize.hpp"

namespace appsent::pipeline {

struct RunConfig {
  // Inputs. Empty means "not supplied".
  std::string train;      // labeled review corpus (or survey)
  std::string test;       // student survey (or labeled review corpus)
  std::string apps;       // app metadata table
  std::string stopwords;  // default list when empty
  std::string lexicon;    // default lexicon when empty
  std::string model;      // model artifact for analyze
  std::string input;      // corpus for score-lexicon (falls back to test, then train)

  bool remove_stopwords = true;
  bool stem = true;

  std::vector<std::string> featurizations{"uni", "bi", "tri"};
  bool cumulative_ngrams = true;
  vectorize::VectorizerConfig vectorizer;  // n-gram range is set per featurization

  std::vector<std::string> models;  // empty selects the default seven
  std::map<std::string, classifiers::Hyperparameters> hyperparameters;  // keyed by algorithm
  std::size_t bagging_estimators = 10;
  ensemble::Vote vote = ensemble::Vote::Hard;

  std::string export_model = "LR";
  std::string export_featurization = "uni";

  std::uint64_t seed = kDefaultSeed;

  // Not part of the persisted configuration.
  int jobs = 1;
  std::string out = "out";
};

/// Every field except jobs and out; the seed is always present.
nlohmann::json config_to_json(const RunConfig& config);
/// Overlays the keys of `doc` on `base`. Throws UnknownField, BadFormat.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});
/// Throws MissingFile, BadFormat, UnknownField.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

std::vector<std::string> model_names(const RunConfig& config);
std::vector<vectorize::Featurization> featurizations(const RunConfig& config);
textprep::PrepConfig prep_config(const RunConfig& config);

/// Preprocessing, vocabulary and classifier needed to label raw text.
struct TrainedPipeline {
  std::string name;
  std::string featurization;
  textprep::PrepConfig prep;
  vectorize::Vocabulary vocabulary;
  std::variant<classifiers::FittedModel, ensemble::BaggedModel> model;

  Label predict(std::string_view raw_text) const;
};

/// Trains `config.export_model` on `config.export_featurization`.
TrainedPipeline train_pipeline(const std::vector<corpus::ReviewRecord>& train, const RunConfig& config);
nlohmann::json to_json(const TrainedPipeline& pipeline);
/// Throws BadFormat.
TrainedPipeline pipeline_from_json(const nlohmann::json& doc);
/// Throws MissingFile, BadFormat.
TrainedPipeline load_pipeline(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of a byte string / file contents. Throws MissingFile.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Subcommands. Each writes into config.out, including manifest.json, and
// returns the process exit code: 0 when everything requested was produced,
// 1 when some cell or section failed, 2 on a fatal input error.
int cmd_ingest(const RunConfig& config, std::ostream& log);
int cmd_bench(const RunConfig& config, std::ostream& log);
int cmd_analyze(const RunConfig& config, std::ostream& log);
int cmd_score_lexicon(const RunConfig& config, std::ostream& log);
int cmd_export_model(const RunConfig& config, std::ostream& log);

}  // namespace appsent::pipeline
