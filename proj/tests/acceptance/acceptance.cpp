// Acceptance checks, one line per criterion:
//   [PASS|FAIL|SKIP] <n> <title> (<seconds> s)[: detail]
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>

#include "appsent/classifiers.hpp"
#include "appsent/corpus.hpp"
#include "appsent/ensemble.hpp"
#include "appsent/error.hpp"
#include "appsent/eval.hpp"
#include "appsent/lexicon.hpp"
#include "appsent/pipeline.hpp"
#include "appsent/vectorize.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "temp.hpp"

using namespace appsent;
namespace t = appsent::testing;
using classifiers::Algorithm;
using classifiers::DataView;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

Outcome fail(std::string why) { return {Status::Fail, std::move(why)}; }
Outcome skip(std::string why) { return {Status::Skip, std::move(why)}; }

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

#define EXPECT(cond, why)               \
  do {                                  \
    if (!(cond)) return fail(why);      \
  } while (0)

DataView view(const t::Dataset& d) { return DataView(d.rows, d.labels, d.dimension); }

classifiers::ModelConfig model_config(Algorithm a, classifiers::Hyperparameters h = {}, std::uint64_t seed = 1) {
  classifiers::ModelConfig c;
  c.algorithm = a;
  c.hyperparameters = std::move(h);
  c.seed = seed;
  return c;
}

SparseVector counts_vector(const std::vector<int>& counts) {
  std::vector<double> dense(counts.begin(), counts.end());
  return SparseVector::from_dense(dense);
}

// 1 -------------------------------------------------------------------------
Outcome metric_oracle() {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    const auto pred = t::random_labels(rng, n);
    const auto truth = t::random_labels(rng, n);
    const auto o = t::tally(pred, truth);
    const auto c = eval::confusion(pred, truth);
    EXPECT(c.tp == o.tp && c.fp == o.fp && c.fn == o.fn && c.tn == o.tn, "confusion differs from tally");
    EXPECT(std::abs(eval::precision(c) - t::ratio(o.tp, o.tp + o.fp)) <= 1e-12, "precision");
    EXPECT(std::abs(eval::recall(c) - t::ratio(o.tp, o.tp + o.fn)) <= 1e-12, "recall");
    EXPECT(std::abs(eval::f_measure(c) - t::f_from_counts(o)) <= 1e-12, "f-measure");
    EXPECT(std::abs(eval::accuracy(c) - t::ratio(o.tp + o.tn, n)) <= 1e-12, "accuracy");
  }
  return {};
}

// 2 -------------------------------------------------------------------------
Outcome tfidf_oracle() {
  Rng rng(102);
  for (int trial = 0; trial < 50; ++trial) {
    const auto docs = t::random_corpus(rng, 1 + rng.below(50), 30, 2 + rng.below(15));
    const int low = 1 + static_cast<int>(rng.below(2));
    const int high = low + static_cast<int>(rng.below(2));
    vectorize::VectorizerConfig config;
    config.ngram_low = low;
    config.ngram_high = high;
    config.normalize = false;
    config.max_features.reset();
    config.allow_empty_vocabulary = true;
    const auto vocab = vectorize::fit_vocabulary(docs, config);
    const auto oracle = t::dense_tfidf(docs, low, high);
    EXPECT(vocab.terms() == oracle.terms, "term set differs");
    EXPECT(vocab.doc_frequency() == oracle.df, "document frequencies differ");
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto dense = vectorize::transform(docs[d], vocab).to_dense();
      for (std::size_t j = 0; j < dense.size(); ++j)
        EXPECT(std::abs(dense[j] - oracle.rows[d][j]) <= 1e-9, "weight differs beyond 1e-9");
    }
  }
  return {};
}

// 3 -------------------------------------------------------------------------
Outcome nb_exact() {
  auto check = [](const std::vector<std::vector<int>>& docs, const std::vector<Label>& labels, std::size_t v,
                  const std::vector<std::vector<int>>& queries) {
    t::Dataset data{{}, labels, v};
    for (const auto& d : docs) data.rows.push_back(counts_vector(d));
    const auto model = classifiers::fit(view(data), model_config(Algorithm::NB));
    for (const auto& x : queries) {
      if (std::abs(classifiers::predict_score(model, counts_vector(x)) - t::nb_posterior(docs, labels, x, 1.0)) > 1e-9)
        return false;
    }
    return true;
  };
  // Every 0/1 corpus over two terms with at most four documents.
  const std::vector<std::vector<int>> grid{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2}};
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::uint32_t bits = 0; bits < (1u << (2 * n)); ++bits) {
      for (std::uint32_t lab = 1; lab + 1 < (1u << n); ++lab) {
        std::vector<std::vector<int>> docs(n);
        std::vector<Label> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
          docs[i] = {static_cast<int>(bits >> (2 * i) & 1u), static_cast<int>(bits >> (2 * i + 1) & 1u)};
          labels[i] = (lab >> i & 1u) ? Label::Positive : Label::Negative;
        }
        EXPECT(check(docs, labels, 2, grid), "exhaustive two-term corpus");
      }
    }
  }
  // Random corpora up to four terms and six documents, counts 0..3.
  Rng rng(103);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t v = 1 + rng.below(4);
    const std::size_t n = 2 + rng.below(5);
    std::vector<std::vector<int>> docs(n, std::vector<int>(v));
    for (auto& d : docs) {
      for (auto& c : d) c = static_cast<int>(rng.below(4));
    }
    std::vector<std::vector<int>> queries(3, std::vector<int>(v));
    for (auto& q : queries) {
      for (auto& c : q) c = static_cast<int>(rng.below(3));
    }
    EXPECT(check(docs, t::mixed_labels(rng, n), v, queries), "random corpus");
  }
  return {};
}

// 4 -------------------------------------------------------------------------
Outcome lr_gradient() {
  Rng rng(104);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng.below(10);
    const std::size_t n = 2 + rng.below(29);
    t::Dataset data{{}, t::mixed_labels(rng, n), d};
    std::vector<std::vector<double>> dense;
    for (std::size_t i = 0; i < n; ++i) {
      data.rows.push_back(t::random_point(rng, d));
      dense.push_back(data.rows.back().to_dense());
    }
    std::vector<double> w(d);
    for (auto& v : w) v = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-1.0, 1.0);
    const double lambda = rng.uniform(0.0, 0.1);
    double gb = 0.0;
    auto analytic = classifiers::detail::logistic_gradient(view(data), w, b, lambda, gb);
    analytic.push_back(gb);
    double diff = 0.0, scale = 0.0;
    for (std::size_t j = 0; j <= d; ++j) {
      auto wp = w, wm = w;
      double bp = b, bm = b;
      if (j < d) {
        wp[j] += h;
        wm[j] -= h;
      } else {
        bp += h;
        bm -= h;
      }
      const double numeric = (t::dense_logistic_loss(dense, data.labels, wp, bp, lambda) -
                              t::dense_logistic_loss(dense, data.labels, wm, bm, lambda)) /
                             (2 * h);
      diff += (analytic[j] - numeric) * (analytic[j] - numeric);
      scale += analytic[j] * analytic[j] + numeric * numeric;
    }
    const double rel = std::sqrt(diff) / std::max(std::sqrt(scale), 1e-12);
    worst = std::max(worst, rel);
  }
  EXPECT(worst <= 1e-4, "relative error " + std::to_string(worst));
  char buf[32];
  std::snprintf(buf, sizeof buf, "worst relative error %.2e", worst);
  return {Status::Pass, buf};
}

// 5 -------------------------------------------------------------------------
Outcome knn_exact() {
  Rng rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    const std::size_t d = 1 + rng.below(6);
    t::Dataset data;
    if (trial % 2) {
      data = t::tie_heavy(rng, n, d);
    } else {
      data = {{}, t::mixed_labels(rng, n), d};
      for (std::size_t i = 0; i < n; ++i) data.rows.push_back(t::random_point(rng, d, 0.4));
    }
    const std::size_t k = 1 + rng.below(9);
    const auto model = classifiers::fit(view(data), model_config(Algorithm::KNN, {{"k", static_cast<double>(k)}}));
    for (int q = 0; q < 20; ++q) {
      const auto query = q < 10 ? data.rows[rng.below(n)]
                                : (trial % 2 ? t::tie_heavy(rng, 2, d).rows[0] : t::random_point(rng, d, 0.4));
      EXPECT(classifiers::predict(model, query) == t::knn_brute_force(data.rows, data.labels, query, k),
             "prediction differs from exhaustive search");
    }
  }
  return {};
}

// 6 -------------------------------------------------------------------------
Outcome separable() {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = t::separable(seed, 200, 5, 0.5);
    for (auto a : {Algorithm::LR, Algorithm::SVM}) {
      const auto model = classifiers::fit(view(data), model_config(a, {}, seed));
      for (std::size_t i = 0; i < data.rows.size(); ++i)
        EXPECT(classifiers::predict(model, data.rows[i]) == data.labels[i],
               std::string(classifiers::to_string(a)) + " misclassifies a training point, seed " +
                   std::to_string(seed));
    }
  }
  return {};
}

// 7 -------------------------------------------------------------------------
Outcome bagging_properties() {
  Rng rng(107);
  // Unanimity and permutation invariance over fitted members on fuzzed data.
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = 2 + rng.below(5);
    const auto data = t::noisy_separable(derive_seed(107, trial), 40 + rng.below(60), d, 0.05, 0.1);
    ensemble::BaggingConfig config;
    config.base.algorithm = trial % 3 == 0 ? Algorithm::LR : trial % 3 == 1 ? Algorithm::SVM : Algorithm::KNN;
    config.n_estimators = 1 + rng.below(8);
    config.seed = derive_seed(7, trial);
    config.vote = trial % 2 ? ensemble::Vote::Hard : ensemble::Vote::SoftAverage;
    const auto model = ensemble::fit_bagging(view(data), config);
    for (int q = 0; q < 20; ++q) {
      const auto x = t::random_point(rng, d);
      const auto got = ensemble::predict_bagged(model, x);
      std::set<Label> votes;
      for (const auto& m : model.members) votes.insert(classifiers::predict(m, x));
      if (votes.size() == 1) EXPECT(got == *votes.begin(), "unanimity violated");
      auto shuffled = model;
      rng.shuffle(std::span(shuffled.members));
      EXPECT(ensemble::predict_bagged(shuffled, x) == got, "member order changed a prediction");
    }
  }
  // Single-member identity ensemble equals its base model.
  for (auto a : {Algorithm::NB, Algorithm::LR, Algorithm::SVM, Algorithm::KNN, Algorithm::RF}) {
    auto data = t::noisy_separable(derive_seed(108, static_cast<std::uint64_t>(a)), 80, 4, 0.05, 0.1);
    for (auto& row : data.rows) {
      for (auto& e : row.entries) e.weight = std::abs(e.weight);
    }
    ensemble::BaggingConfig config;
    config.base = model_config(a, a == Algorithm::RF ? classifiers::Hyperparameters{{"n_trees", 9}}
                                                     : classifiers::Hyperparameters{});
    config.n_estimators = 1;
    config.identity_bootstrap = true;
    const auto bagged = ensemble::fit_bagging(view(data), config);
    const auto base = classifiers::fit(view(data), config.base);
    for (int q = 0; q < 50; ++q) {
      auto x = t::random_point(rng, 4);
      for (auto& e : x.entries) e.weight = std::abs(e.weight);
      EXPECT(ensemble::predict_bagged(bagged, x) == classifiers::predict(base, x), "single-member degeneracy");
    }
  }
  // Distinct-row fraction of bootstrap samples.
  double total = 0.0;
  const int seeds = 300;
  for (int s = 0; s < seeds; ++s) {
    const auto idx = ensemble::bootstrap_indices(1000, derive_seed(109, static_cast<std::uint64_t>(s)));
    total += static_cast<double>(std::set<std::uint32_t>(idx.begin(), idx.end()).size()) / 1000.0;
  }
  const double fraction = total / seeds;
  EXPECT(std::abs(fraction - 0.632) <= 0.02, "distinct fraction " + std::to_string(fraction));
  // Noisy separable benchmark: 1000 training and 1000 test points, 15% label noise.
  const auto all = t::noisy_separable(2020, 2000, 10, 0.05, 0.15);
  const t::Dataset train{{all.rows.begin(), all.rows.begin() + 1000}, {all.labels.begin(), all.labels.begin() + 1000}, 10};
  ensemble::BaggingConfig config;
  config.base.algorithm = Algorithm::LR;
  const auto base = classifiers::fit(view(train), config.base);
  const auto bagged = ensemble::fit_bagging(view(train), config);
  std::size_t base_right = 0, bag_right = 0;
  for (std::size_t i = 1000; i < 2000; ++i) {
    base_right += classifiers::predict(base, all.rows[i]) == all.labels[i];
    bag_right += ensemble::predict_bagged(bagged, all.rows[i]) == all.labels[i];
  }
  const double base_acc = base_right / 1000.0, bag_acc = bag_right / 1000.0;
  EXPECT(bag_acc >= base_acc - 0.02,
         "bagged " + std::to_string(bag_acc) + " vs base " + std::to_string(base_acc));
  return {Status::Pass, fixed(fraction, 4) + " distinct, LR " + fixed(base_acc, 3) + " vs bagged " + fixed(bag_acc, 3)};
}

// 8 -------------------------------------------------------------------------
Outcome determinism() {
  t::TempDir dir;
  auto config = pipeline::RunConfig{};
  config.train = t::fixture("reviews.csv");
  config.test = t::fixture("students.csv");
  config.seed = 8080;
  std::ostringstream log;
  const char* runs[] = {"a", "b", "c"};
  const int jobs[] = {1, 1, 4};
  for (int r = 0; r < 3; ++r) {
    config.out = (dir.path() / runs[r]).string();
    config.jobs = jobs[r];
    EXPECT(pipeline::cmd_bench(config, log) == 0, "bench run failed: " + log.str());
  }
  for (const char* f : {"accuracy.csv", "fscore.csv", "cells.json", "manifest.json"}) {
    const auto a = t::read_text(dir.path() / "a" / f);
    EXPECT(!a.empty(), std::string(f) + " missing");
    EXPECT(a == t::read_text(dir.path() / "b" / f), std::string(f) + " differs between identical runs");
    EXPECT(a == t::read_text(dir.path() / "c" / f), std::string(f) + " differs with --jobs 4");
  }
  return {};
}

// 9 -------------------------------------------------------------------------
Outcome full_corpus() {
  const char* google = std::getenv("APPSENT_GOOGLE_REVIEWS");
  const char* survey = std::getenv("APPSENT_STUDENT_SURVEY");
  if (!google || !*google || !survey || !*survey)
    return skip("set APPSENT_GOOGLE_REVIEWS and APPSENT_STUDENT_SURVEY to run");
  t::TempDir dir;
  pipeline::RunConfig config;
  config.train = google;
  config.test = survey;
  config.out = dir.path().string();
  config.jobs = available_threads();
  std::ostringstream log;
  const int code = pipeline::cmd_bench(config, log);
  EXPECT(code == 0, "bench exit code " + std::to_string(code) + ": " + log.str());
  const auto cells = nlohmann::json::parse(t::read_text(dir.path() / "cells.json"));
  const auto result_models = cells.at("models").get<std::vector<std::string>>();
  EXPECT(cells.at("cells").size() == 21, "grid is not 7 x 3");
  auto acc = [&](const std::string& model, std::size_t col) {
    const auto row = static_cast<std::size_t>(std::find(result_models.begin(), result_models.end(), model) -
                                              result_models.begin());
    return cells.at("cells").at(row * 3 + col).at("accuracy").get<double>();
  };
  const double reference[] = {0.9289, 0.9341, 0.9337};
  std::string detail = "SVM";
  for (std::size_t col = 0; col < 3; ++col) {
    detail += " " + fixed(acc("SVM", col) * 100, 2);
    EXPECT(std::abs(acc("SVM", col) - reference[col]) <= 0.05,
           "SVM column " + std::to_string(col) + " at " + std::to_string(acc("SVM", col)));
    EXPECT(acc("SVM", col) > acc("NB", col), "SVM does not beat NB in column " + std::to_string(col));
    EXPECT(acc("LR(Bagging)", col) >= acc("LR", col), "bagged LR below LR in column " + std::to_string(col));
  }
  return {Status::Pass, detail};
}

// 10 ------------------------------------------------------------------------
Outcome lexicon_signs() {
  const std::pair<const char*, lexicon::Orientation> rows[] = {
      {"It's helpful to learn at home.Highly recommendable", lexicon::Orientation::Positive},
      {"It's amazing and works well.", lexicon::Orientation::Positive},
      {"Horrible. Keeps crashing my phone.", lexicon::Orientation::Negative},
      {"It' annoying due to adds.", lexicon::Orientation::Negative},
      {"Very well designed. Many updates present.", lexicon::Orientation::Positive},
  };
  const auto lex = lexicon::default_lexicon();
  EXPECT(lex->rejected.empty(), "shipped lexicon has rejected rows");
  for (const auto& [text, expected] : rows) {
    const auto s = lexicon::score_text(text, *lex);
    EXPECT(s.orientation == expected, std::string("\"") + text + "\" scored " +
                                          std::string(lexicon::to_string(s.orientation)));
  }
  return {};
}

// 11 ------------------------------------------------------------------------
Outcome label_boundary() {
  const std::pair<double, Label> cases[] = {{1, Label::Negative},   {2, Label::Negative}, {2.9, Label::Negative},
                                            {3, Label::Positive},   {3.1, Label::Positive}, {5, Label::Positive}};
  for (const auto& [rating, expected] : cases)
    EXPECT(corpus::derive_label(rating) == expected, "rating " + std::to_string(rating));
  return {};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
  double budget_seconds;  // 0 = no per-criterion budget
};

const char* status_text(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
  }
  return "?";
}

}  // namespace

int main() {
  set_warnings_enabled(false);
  const Criterion criteria[] = {
      {1, "metric oracle equivalence", metric_oracle, 5.0},
      {2, "tf-idf oracle equivalence", tfidf_oracle, 10.0},
      {3, "naive Bayes exactness", nb_exact, 0.0},
      {4, "logistic gradient check", lr_gradient, 0.0},
      {5, "KNN exactness", knn_exact, 0.0},
      {6, "separable training", separable, 0.0},
      {7, "bagging properties", bagging_properties, 0.0},
      {8, "determinism", determinism, 0.0},
      {9, "full-corpus reproduction", full_corpus, 0.0},
      {10, "lexicon sign consistency", lexicon_signs, 0.0},
      {11, "label boundary", label_boundary, 0.0},
  };

  bool any_fail = false;
  double suite_seconds = 0.0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.id != 9) suite_seconds += seconds;
    if (outcome.status == Status::Pass && c.budget_seconds > 0 && seconds > c.budget_seconds)
      outcome = fail("over the " + std::to_string(static_cast<int>(c.budget_seconds)) + " s budget");
    any_fail = any_fail || outcome.status == Status::Fail;
    std::printf("[%s] %d %s (%.2f s)%s%s\n", status_text(outcome.status), c.id, c.title, seconds,
                outcome.detail.empty() ? "" : ": ", outcome.detail.c_str());
    std::fflush(stdout);
  }
  const bool fast = suite_seconds < 60.0;
  any_fail = any_fail || !fast;
  std::printf("[%s] 12 property suite runtime (%.2f s, budget 60 s)\n", fast ? "PASS" : "FAIL", suite_seconds);
  return any_fail ? 1 : 0;
}
