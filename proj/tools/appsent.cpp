// appsent: ingest, bench, analyze, score-lexicon and export-model.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "appsent/error.hpp"
#include "appsent/lexicon.hpp"
#include "appsent/pipeline.hpp"
#include "appsent/strings.hpp"

namespace {

using appsent::pipeline::RunConfig;

/// Flag values; anything left unset falls back to the config file.
struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out, train, test, apps, stopwords, lexicon, model, input;
  std::optional<std::vector<std::string>> models, featurizations;
  std::optional<std::size_t> bagging_estimators;
  std::optional<std::string> vote, export_model, export_featurization;
  bool keep_stopwords = false;
  bool no_stem = false;
  bool exact_ngrams = false;
  std::optional<std::string> text;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--jobs", f.jobs, "concurrent grid cells")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--train", f.train, "labeled training reviews");
  cmd->add_option("--test", f.test, "student survey or labeled test reviews");
  cmd->add_option("--apps", f.apps, "app metadata table");
  cmd->add_option("--stopwords", f.stopwords, "stopword list (one word per line)");
  cmd->add_flag("--keep-stopwords", f.keep_stopwords, "skip stopword removal");
  cmd->add_flag("--no-stem", f.no_stem, "skip Porter stemming");
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) c = appsent::pipeline::load_config(f.config, c);
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.out) c.out = *f.out;
  if (f.train) c.train = *f.train;
  if (f.test) c.test = *f.test;
  if (f.apps) c.apps = *f.apps;
  if (f.stopwords) c.stopwords = *f.stopwords;
  if (f.lexicon) c.lexicon = *f.lexicon;
  if (f.model) c.model = *f.model;
  if (f.input) c.input = *f.input;
  if (f.models) c.models = *f.models;
  if (f.featurizations) c.featurizations = *f.featurizations;
  if (f.bagging_estimators) c.bagging_estimators = *f.bagging_estimators;
  if (f.vote) c.vote = appsent::ensemble::parse_vote(*f.vote);
  if (f.export_model) c.export_model = *f.export_model;
  if (f.export_featurization) c.export_featurization = *f.export_featurization;
  if (f.keep_stopwords) c.remove_stopwords = false;
  if (f.no_stem) c.stem = false;
  if (f.exact_ngrams) c.cumulative_ngrams = false;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentiment classification and exploratory analysis of app reviews"};
  app.require_subcommand(1);
  Flags f;

  auto* ingest = app.add_subcommand("ingest", "validate and clean the input tables");
  add_common(ingest, f);

  auto* bench = app.add_subcommand("bench", "run the classifier x featurization grid");
  add_common(bench, f);
  bench->add_option("--models", f.models, "grid rows, e.g. SVM NB LR(Bagging)");
  bench->add_option("--featurizations", f.featurizations, "grid columns: uni bi tri");
  bench->add_flag("--exact-ngrams", f.exact_ngrams, "use only n-grams of length n");
  bench->add_option("--bagging-estimators", f.bagging_estimators, "members per bagged model");
  bench->add_option("--vote", f.vote, "bagging vote: hard or soft");

  auto* analyze = app.add_subcommand("analyze", "exploratory statistics for RQ1 to RQ6");
  add_common(analyze, f);
  analyze->add_option("--lexicon", f.lexicon, "sentiment lexicon");
  analyze->add_option("--model", f.model, "model artifact from export-model (enables RQ6)");

  auto* score = app.add_subcommand("score-lexicon", "lexicon polarity and subjectivity per review");
  add_common(score, f);
  score->add_option("--lexicon", f.lexicon, "sentiment lexicon");
  score->add_option("--input", f.input, "corpus to score");
  score->add_option("--text", f.text, "score one text and print the result");

  auto* exporter = app.add_subcommand("export-model", "train one model and save it with its vocabulary");
  add_common(exporter, f);
  exporter->add_option("--model-name", f.export_model, "classifier, e.g. LR or NB(Bagging)");
  exporter->add_option("--featurization", f.export_featurization, "uni, bi or tri");
  exporter->add_option("--bagging-estimators", f.bagging_estimators, "members per bagged model");
  exporter->add_option("--vote", f.vote, "bagging vote: hard or soft");
  exporter->add_flag("--exact-ngrams", f.exact_ngrams, "use only n-grams of length n");

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  try {
    config = resolve(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  using namespace appsent::pipeline;
  if (score->parsed() && f.text) {
    try {
      const auto lex = config.lexicon.empty()
                           ? appsent::lexicon::default_lexicon()
                           : std::make_shared<const appsent::lexicon::Lexicon>(
                                 appsent::lexicon::load_lexicon(config.lexicon));
      const auto s = appsent::lexicon::score_text(*f.text, *lex);
      std::cout << appsent::lexicon::to_string(s.orientation) << ' ' << appsent::format_fixed(s.polarity, 4)
                << ' ' << appsent::format_fixed(s.subjectivity, 4) << '\n';
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  if (ingest->parsed()) return cmd_ingest(config, std::cerr);
  if (bench->parsed()) return cmd_bench(config, std::cerr);
  if (analyze->parsed()) return cmd_analyze(config, std::cerr);
  if (score->parsed()) return cmd_score_lexicon(config, std::cerr);
  return cmd_export_model(config, std::cerr);
}
