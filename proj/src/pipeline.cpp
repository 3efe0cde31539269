#include "appsent/pipeline.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "appsent/analysis.hpp"
#include "appsent/corpus.hpp"
#include "appsent/csv.hpp"
#include "appsent/embedded_data.hpp"
#include "appsent/error.hpp"
#include "appsent/eval.hpp"
#include "appsent/lexicon.hpp"
#include "appsent/strings.hpp"

namespace appsent::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

json config_to_json(const RunConfig& c) {
  json hyper = json::object();
  for (const auto& [algorithm, values] : c.hyperparameters) hyper[algorithm] = values;
  return json{
      {"paths",
       {{"train", c.train}, {"test", c.test}, {"apps", c.apps}, {"stopwords", c.stopwords},
        {"lexicon", c.lexicon}, {"model", c.model}, {"input", c.input}}},
      {"prep", {{"remove_stopwords", c.remove_stopwords}, {"stem", c.stem}}},
      {"featurizations", c.featurizations},
      {"cumulative_ngrams", c.cumulative_ngrams},
      {"vectorizer",
       {{"min_df", c.vectorizer.min_df},
        {"max_features", c.vectorizer.max_features ? json(*c.vectorizer.max_features) : json(nullptr)},
        {"normalize", c.vectorizer.normalize},
        {"smooth_idf", c.vectorizer.smooth_idf},
        {"sublinear_tf", c.vectorizer.sublinear_tf}}},
      {"models", model_names(c)},
      {"hyperparameters", std::move(hyper)},
      {"bagging", {{"n_estimators", c.bagging_estimators}, {"vote", ensemble::to_string(c.vote)}}},
      {"export", {{"model", c.export_model}, {"featurization", c.export_featurization}}},
      {"seed", c.seed}};
}

namespace {

[[noreturn]] void unknown_key(std::string_view scope, const std::string& key) {
  throw Error(ErrorKind::UnknownField, "unknown configuration key '" + std::string(scope) + key + "'");
}

template <typename F>
void each_key(const json& obj, std::string_view scope, F&& handle) {
  if (!obj.is_object()) throw Error(ErrorKind::BadFormat, "'" + std::string(scope) + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!handle(key, value)) unknown_key(scope, key);
  }
}

}  // namespace

RunConfig config_from_json(const json& doc, RunConfig c) {
  try {
    each_key(doc, "", [&](const std::string& key, const json& v) {
      if (key == "paths") {
        each_key(v, "paths.", [&](const std::string& k, const json& p) {
          std::string* slot = k == "train"       ? &c.train
                              : k == "test"      ? &c.test
                              : k == "apps"      ? &c.apps
                              : k == "stopwords" ? &c.stopwords
                              : k == "lexicon"   ? &c.lexicon
                              : k == "model"     ? &c.model
                              : k == "input"     ? &c.input
                                                 : nullptr;
          if (!slot) return false;
          *slot = p.get<std::string>();
          return true;
        });
      } else if (key == "prep") {
        each_key(v, "prep.", [&](const std::string& k, const json& p) {
          if (k == "remove_stopwords") c.remove_stopwords = p.get<bool>();
          else if (k == "stem") c.stem = p.get<bool>();
          else return false;
          return true;
        });
      } else if (key == "featurizations") {
        c.featurizations = v.get<std::vector<std::string>>();
      } else if (key == "cumulative_ngrams") {
        c.cumulative_ngrams = v.get<bool>();
      } else if (key == "vectorizer") {
        each_key(v, "vectorizer.", [&](const std::string& k, const json& p) {
          if (k == "min_df") c.vectorizer.min_df = p.get<std::size_t>();
          else if (k == "max_features")
            c.vectorizer.max_features = p.is_null() ? std::nullopt : std::optional<std::size_t>(p.get<std::size_t>());
          else if (k == "normalize") c.vectorizer.normalize = p.get<bool>();
          else if (k == "smooth_idf") c.vectorizer.smooth_idf = p.get<bool>();
          else if (k == "sublinear_tf") c.vectorizer.sublinear_tf = p.get<bool>();
          else return false;
          return true;
        });
      } else if (key == "models") {
        c.models = v.get<std::vector<std::string>>();
      } else if (key == "hyperparameters") {
        each_key(v, "hyperparameters.", [&](const std::string& k, const json& p) {
          const auto algorithm = std::string(classifiers::to_string(classifiers::parse_algorithm(k)));
          c.hyperparameters[algorithm] = p.get<classifiers::Hyperparameters>();
          return true;
        });
      } else if (key == "bagging") {
        each_key(v, "bagging.", [&](const std::string& k, const json& p) {
          if (k == "n_estimators") c.bagging_estimators = p.get<std::size_t>();
          else if (k == "vote") c.vote = ensemble::parse_vote(p.get<std::string>());
          else return false;
          return true;
        });
      } else if (key == "export") {
        each_key(v, "export.", [&](const std::string& k, const json& p) {
          if (k == "model") c.export_model = p.get<std::string>();
          else if (k == "featurization") c.export_featurization = p.get<std::string>();
          else return false;
          return true;
        });
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "jobs") {
        c.jobs = v.get<int>();
      } else if (key == "out") {
        c.out = v.get<std::string>();
      } else {
        return false;
      }
      return true;
    });
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("configuration: ") + e.what());
  }
  return c;
}

RunConfig load_config(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, path.string() + ": " + e.what());
  }
  return config_from_json(doc, std::move(base));
}

std::vector<std::string> model_names(const RunConfig& config) {
  return config.models.empty() ? eval::default_models() : config.models;
}

std::vector<vectorize::Featurization> featurizations(const RunConfig& config) {
  std::vector<vectorize::Featurization> out;
  for (const auto& name : config.featurizations)
    out.push_back(vectorize::featurization(name, config.cumulative_ngrams, config.vectorizer));
  return out;
}

textprep::PrepConfig prep_config(const RunConfig& config) {
  textprep::PrepConfig prep;
  prep.remove_stopwords = config.remove_stopwords;
  prep.stem = config.stem;
  if (!config.stopwords.empty())
    prep.stopwords = std::make_shared<const textprep::StopwordList>(textprep::StopwordList::load(config.stopwords));
  return prep;
}

namespace {

eval::ModelSpec spec_for(std::string_view name, const RunConfig& config) {
  auto spec = eval::model_spec(name, config.seed, config.bagging_estimators, config.vote);
  const auto it = config.hyperparameters.find(std::string(classifiers::to_string(spec.config.algorithm)));
  if (it != config.hyperparameters.end()) spec.config.hyperparameters = it->second;
  spec.config.validate();
  if (spec.bagging) spec.bagging->base = spec.config;
  return spec;
}

eval::LabeledDocs make_docs(const std::vector<corpus::ReviewRecord>& records,
                            const textprep::PrepConfig& prep, Exec exec) {
  eval::LabeledDocs docs;
  docs.docs.resize(records.size());
  docs.labels.resize(records.size());
  parallel_for(records.size(), exec, [&](std::size_t i) {
    docs.docs[i] = textprep::preprocess(records[i].raw_text, prep, i);
    docs.labels[i] = records[i].label;
  });
  return docs;
}

Exec exec_for(const RunConfig& config) { return config.jobs > 1 ? Exec::Parallel : Exec::Serial; }

}  // namespace

// ---------------------------------------------------------------------------
// Trained pipelines

Label TrainedPipeline::predict(std::string_view raw_text) const {
  const auto x = vectorize::transform(textprep::preprocess(raw_text, prep), vocabulary);
  if (const auto* single = std::get_if<classifiers::FittedModel>(&model)) return classifiers::predict(*single, x);
  return ensemble::predict_bagged(std::get<ensemble::BaggedModel>(model), x);
}

TrainedPipeline train_pipeline(const std::vector<corpus::ReviewRecord>& train, const RunConfig& config) {
  const auto spec = spec_for(config.export_model, config);
  const auto feature = vectorize::featurization(config.export_featurization, config.cumulative_ngrams,
                                                config.vectorizer);
  TrainedPipeline p;
  p.name = spec.name;
  p.featurization = feature.name;
  p.prep = prep_config(config);
  const auto exec = exec_for(config);
  const auto docs = make_docs(train, p.prep, exec);
  auto data = vectorize::fit_transform(docs.docs, docs.labels, feature.config, exec);
  if (spec.bagging) p.model = ensemble::fit_bagging(data, *spec.bagging, exec);
  else p.model = classifiers::fit(data, spec.config, exec);
  p.vocabulary = std::move(data.vocabulary);
  return p;
}

json to_json(const TrainedPipeline& p) {
  json prep{{"remove_stopwords", p.prep.remove_stopwords},
            {"stem", p.prep.stem},
            {"stopwords", p.prep.stopwords ? json(p.prep.stopwords->sorted_words()) : json(nullptr)}};
  json doc{{"format", "appsent-pipeline"},
           {"version", 1},
           {"name", p.name},
           {"featurization", p.featurization},
           {"prep", std::move(prep)},
           {"vocabulary", p.vocabulary.to_json()}};
  if (const auto* single = std::get_if<classifiers::FittedModel>(&p.model)) {
    doc["model"] = classifiers::to_json(*single);
  } else {
    const auto& bag = std::get<ensemble::BaggedModel>(p.model);
    json members = json::array();
    for (const auto& m : bag.members) members.push_back(classifiers::to_json(m));
    doc["bagging"] = json{{"vote", ensemble::to_string(bag.vote)}, {"members", std::move(members)}};
  }
  return doc;
}

TrainedPipeline pipeline_from_json(const json& doc) {
  try {
    if (doc.at("format") != "appsent-pipeline" || doc.at("version") != 1)
      throw Error(ErrorKind::BadFormat, "not a version 1 model artifact");
    TrainedPipeline p;
    p.name = doc.at("name").get<std::string>();
    p.featurization = doc.at("featurization").get<std::string>();
    const auto& prep = doc.at("prep");
    p.prep.remove_stopwords = prep.at("remove_stopwords").get<bool>();
    p.prep.stem = prep.at("stem").get<bool>();
    if (!prep.at("stopwords").is_null()) {
      const auto words = prep.at("stopwords").get<std::vector<std::string>>();
      p.prep.stopwords = std::make_shared<const textprep::StopwordList>(
          std::unordered_set<std::string>(words.begin(), words.end()));
    }
    p.vocabulary = vectorize::Vocabulary::from_json(doc.at("vocabulary"));
    if (doc.contains("model")) {
      p.model = classifiers::model_from_json(doc.at("model"));
    } else {
      ensemble::BaggedModel bag;
      bag.vote = ensemble::parse_vote(doc.at("bagging").at("vote").get<std::string>());
      for (const auto& m : doc.at("bagging").at("members")) bag.members.push_back(classifiers::model_from_json(m));
      if (bag.members.empty()) throw Error(ErrorKind::BadFormat, "bagged model without members");
      p.model = std::move(bag);
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("model artifact: ") + e.what());
  }
}

TrainedPipeline load_pipeline(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  try {
    return pipeline_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Files

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

/// Collects inputs and outputs of one run and writes the manifest last.
class Run {
 public:
  Run(std::string command, const RunConfig& config) : command_(std::move(command)), config_(config) {}

  void input(const std::string& role, const std::string& path) {
    inputs_[role] = json{{"path", path}, {"sha256", sha256_file(path)}};
  }
  void builtin(const std::string& role, std::string_view content) {
    inputs_[role] = json{{"path", nullptr}, {"sha256", sha256_hex(content)}};
  }
  void output(const std::string& name, std::string_view content) {
    write_atomic(fs::path(config_.out) / name, content);
    outputs_[name] = sha256_hex(content);
  }
  void failure(std::string what) { failures_.push_back(std::move(what)); }
  void notice(std::string what) { notices_.push_back(std::move(what)); }
  bool failed() const { return !failures_.empty(); }

  int finish(std::ostream& log) {
    json manifest{{"format", "appsent-manifest"},
                  {"version", 1},
                  {"command", command_},
                  {"config", config_to_json(config_)},
                  {"seed", config_.seed},
                  {"inputs", inputs_},
                  {"outputs", outputs_},
                  {"failures", failures_},
                  {"notices", notices_}};
    write_atomic(fs::path(config_.out) / "manifest.json", manifest.dump(2) + "\n");
    for (const auto& n : notices_) log << "notice: " << n << '\n';
    for (const auto& f : failures_) log << "failed: " << f << '\n';
    return failures_.empty() ? 0 : 1;
  }

 private:
  std::string command_;
  const RunConfig& config_;
  json inputs_ = json::object();
  json outputs_ = json::object();
  std::vector<std::string> failures_;
  std::vector<std::string> notices_;
};

void require(const std::string& path, std::string_view what) {
  if (path.empty()) throw Error(ErrorKind::MissingFile, "no " + std::string(what) + " path given");
  if (!fs::is_regular_file(path)) throw Error(ErrorKind::MissingFile, path);
}

void record_prep_inputs(Run& run, const RunConfig& config) {
  if (config.stopwords.empty()) run.builtin("stopwords", embedded::kStopwords);
  else run.input("stopwords", config.stopwords);
}

template <typename F>
int guarded(std::ostream& log, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 2;
  }
}

json issues_json(const std::vector<corpus::RowIssue>& issues) {
  json out = json::array();
  for (const auto& i : issues) out.push_back({{"line", i.line}, {"reason", i.reason}});
  return out;
}

template <typename Writer, typename Records>
std::string render(Writer&& write, const Records& records) {
  std::ostringstream out;
  write(out, records);
  return out.str();
}

json ingest_corpus(Run& run, const std::string& role, const std::string& path, std::ostream& log) {
  run.input(role, path);
  if (corpus::is_student_survey(path)) {
    const auto load = corpus::load_student_survey(path);
    run.output(role + ".csv", render(corpus::write_students_csv, load.records));
    log << role << ": " << load.records.size() << " survey rows kept, " << load.rejected.size()
        << " rejected\n";
    return json{{"schema", "survey"},
                {"input_rows", load.input_rows},
                {"kept", load.records.size()},
                {"rejected", issues_json(load.rejected)},
                {"replaced_bytes", load.replaced_bytes}};
  }
  const auto load = corpus::load_review_corpus(path);
  run.output(role + ".csv", render(corpus::write_reviews_csv, load.records));
  log << role << ": " << load.records.size() << " reviews kept, " << load.dropped_count() << " dropped ("
      << load.neutral.size() << " neutral, " << load.duplicates << " duplicates)\n";
  return json{{"schema", "reviews"},
              {"input_rows", load.input_rows},
              {"kept", load.records.size()},
              {"neutral", load.neutral.size()},
              {"duplicates", load.duplicates},
              {"dropped", issues_json(load.dropped)},
              {"replaced_bytes", load.replaced_bytes}};
}

}  // namespace

int cmd_ingest(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    require(config.train, "train corpus");
    if (!config.test.empty()) require(config.test, "test corpus");
    if (!config.apps.empty()) require(config.apps, "app metadata");
    Run run("ingest", config);
    json report = json::object();
    if (!config.apps.empty()) {
      run.input("apps", config.apps);
      const auto load = corpus::load_app_metadata(config.apps);
      run.output("apps.csv", render(corpus::write_apps_csv, load.records));
      log << "apps: " << load.records.size() << " kept, " << load.rejected.size() << " rejected\n";
      report["apps"] = json{{"input_rows", load.input_rows},
                            {"kept", load.records.size()},
                            {"rejected", issues_json(load.rejected)},
                            {"coerced_missing", load.coerced_missing},
                            {"replaced_bytes", load.replaced_bytes}};
    }
    report["train"] = ingest_corpus(run, "train", config.train, log);
    if (!config.test.empty()) report["test"] = ingest_corpus(run, "test", config.test, log);
    run.output("load_report.json", report.dump(2) + "\n");
    return run.finish(log);
  });
}

int cmd_bench(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    require(config.train, "train corpus");
    require(config.test, "test corpus");
    if (!config.stopwords.empty()) require(config.stopwords, "stopword list");
    std::vector<eval::ModelSpec> specs;
    for (const auto& name : model_names(config)) specs.push_back(spec_for(name, config));
    const auto feats = featurizations(config);

    Run run("bench", config);
    run.input("train", config.train);
    run.input("test", config.test);
    record_prep_inputs(run, config);

    const auto prep = prep_config(config);
    const auto exec = exec_for(config);
    const auto train = make_docs(corpus::load_labeled_reviews(config.train), prep, exec);
    const auto test = make_docs(corpus::load_labeled_reviews(config.test), prep, exec);
    log << "bench: " << train.docs.size() << " training and " << test.docs.size() << " test reviews, "
        << specs.size() << " x " << feats.size() << " cells\n";

    const auto result = eval::run_matrix(train, test, specs, feats, config.jobs);
    std::ostringstream accuracy, fscore;
    eval::write_accuracy_table(accuracy, result);
    eval::write_fscore_table(fscore, result);
    run.output("accuracy.csv", accuracy.str());
    run.output("fscore.csv", fscore.str());
    run.output("cells.json", eval::cells_to_json(result).dump(2) + "\n");
    for (const auto& cell : result.cells) {
      if (cell.error) run.failure(cell.model + " / " + cell.featurization + ": " + *cell.error);
    }
    return run.finish(log);
  });
}

int cmd_analyze(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    require(config.apps, "app metadata");
    require(config.train, "train corpus");
    require(config.test, "student survey");
    if (!config.lexicon.empty()) require(config.lexicon, "lexicon");
    if (!config.model.empty()) require(config.model, "model artifact");

    Run run("analyze", config);
    run.input("apps", config.apps);
    run.input("train", config.train);
    run.input("test", config.test);

    analysis::RqInputs in;
    in.apps = corpus::load_app_metadata(config.apps).records;
    in.train_reviews = corpus::load_labeled_reviews(config.train);
    in.students = corpus::load_student_survey(config.test).records;
    if (config.lexicon.empty()) {
      run.builtin("lexicon", embedded::kLexicon);
      in.lexicon = lexicon::default_lexicon();
    } else {
      run.input("lexicon", config.lexicon);
      auto lex = lexicon::load_lexicon(config.lexicon);
      for (const auto& r : lex.rejected)
        run.notice("lexicon line " + std::to_string(r.line) + " rejected: " + r.reason);
      in.lexicon = std::make_shared<const lexicon::Lexicon>(std::move(lex));
    }
    std::shared_ptr<const TrainedPipeline> model;
    if (!config.model.empty()) {
      run.input("model", config.model);
      model = std::make_shared<const TrainedPipeline>(load_pipeline(config.model));
      in.classifier = [model](std::string_view text) { return model->predict(text); };
      in.classifier_name = model->name;
    } else {
      run.notice("RQ6 omitted: no model artifact supplied");
    }

    const auto report = analysis::rq_report(in, exec_for(config));
    run.output(analysis::kRqFiles[0], analysis::rq1_csv(report));
    run.output(analysis::kRqFiles[1], analysis::rq2_csv(report, in.apps));
    run.output(analysis::kRqFiles[2], analysis::rq3_csv(report));
    run.output(analysis::kRqFiles[3], analysis::rq4_csv(report));
    run.output(analysis::kRqFiles[4], analysis::rq5_csv(report, in.apps));
    if (report.rq6) {
      run.output(analysis::kRqFiles[5], analysis::rq6_csv(report));
    } else if (model) {
      run.failure("RQ6: the survey holds no records to classify");
    }
    run.output(analysis::kRqSummary, analysis::rq_summary(report).dump(2) + "\n");
    return run.finish(log);
  });
}

int cmd_score_lexicon(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    const std::string& path = !config.input.empty() ? config.input : !config.test.empty() ? config.test : config.train;
    require(path, "input corpus");
    if (!config.lexicon.empty()) require(config.lexicon, "lexicon");
    Run run("score-lexicon", config);
    run.input("input", path);

    std::shared_ptr<const lexicon::Lexicon> lex;
    if (config.lexicon.empty()) {
      run.builtin("lexicon", embedded::kLexicon);
      lex = lexicon::default_lexicon();
    } else {
      run.input("lexicon", config.lexicon);
      lex = std::make_shared<const lexicon::Lexicon>(lexicon::load_lexicon(config.lexicon));
      for (const auto& r : lex->rejected)
        run.notice("lexicon line " + std::to_string(r.line) + " rejected: " + r.reason);
    }

    struct Row {
      std::string source, app, label, text;
    };
    std::vector<Row> rows;
    if (corpus::is_student_survey(path)) {
      for (const auto& s : corpus::load_student_survey(path).records)
        rows.push_back({"Student", s.app_name, std::string(to_string(corpus::derive_label(s.rating))), s.review_text});
    } else {
      const auto load = corpus::load_review_corpus(path);
      for (const auto& r : load.records)
        rows.push_back({std::string(corpus::to_string(r.source)), r.app_name, std::string(to_string(r.label)), r.raw_text});
      for (const auto& n : load.neutral) rows.push_back({"Google", n.app_name, "Neutral", n.raw_text});
    }
    std::vector<lexicon::SentimentScore> scores(rows.size());
    parallel_for(rows.size(), exec_for(config), [&](std::size_t i) { scores[i] = lexicon::score_text(rows[i].text, *lex); });

    std::ostringstream out;
    csv::write_row(out, {"source", "app_name", "label", "polarity", "subjectivity", "orientation", "text"});
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      ++counts[static_cast<int>(scores[i].orientation)];
      csv::write_row(out, {rows[i].source, rows[i].app, rows[i].label, format_double(scores[i].polarity),
                           format_double(scores[i].subjectivity),
                           std::string(lexicon::to_string(scores[i].orientation)), rows[i].text});
    }
    run.output("lexicon_scores.csv", out.str());
    log << "score-lexicon: " << rows.size() << " reviews, " << counts[2] << " positive, " << counts[1]
        << " neutral, " << counts[0] << " negative\n";
    return run.finish(log);
  });
}

int cmd_export_model(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    require(config.train, "train corpus");
    if (!config.stopwords.empty()) require(config.stopwords, "stopword list");
    Run run("export-model", config);
    run.input("train", config.train);
    record_prep_inputs(run, config);
    const auto pipeline = train_pipeline(corpus::load_labeled_reviews(config.train), config);
    run.output("model.json", to_json(pipeline).dump() + "\n");
    log << "export-model: " << pipeline.name << " on " << pipeline.featurization << " n-grams, "
        << pipeline.vocabulary.size() << " terms\n";
    return run.finish(log);
  });
}

}  // namespace appsent::pipeline
