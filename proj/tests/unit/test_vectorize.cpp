#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "appsent/error.hpp"
#include "appsent/vectorize.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace appsent;
using namespace appsent::vectorize;
using textprep::TokenizedDocument;
using Strings = std::vector<std::string>;

namespace {

TokenizedDocument doc(Strings tokens, std::size_t id = 0) { return {id, std::move(tokens), 0}; }

std::vector<TokenizedDocument> three_docs() {
  return {doc({"good", "app"}, 0), doc({"bad", "app"}, 1), doc({"good", "good", "game"}, 2)};
}

VectorizerConfig raw(int low = 1, int high = 1) {
  VectorizerConfig c;
  c.ngram_low = low;
  c.ngram_high = high;
  c.normalize = false;
  c.max_features.reset();
  return c;
}

}  // namespace

TEST_SUITE("vectorize") {
  TEST_CASE("extract_ngrams") {
    const Strings nvg{"not", "very", "great"};
    CHECK(extract_ngrams(nvg, 2, 2) == Strings{"not very", "very great"});
    const Strings good{"good"};
    CHECK(extract_ngrams(good, 1, 3) == Strings{"good"});
    const Strings abc{"a", "b", "c"};
    CHECK(extract_ngrams(abc, 1, 2) == Strings{"a", "b", "c", "a b", "b c"});
    CHECK(extract_ngrams({}, 1, 3).empty());
  }

  TEST_CASE("three-document example") {
    const auto docs = three_docs();
    const auto vocab = fit_vocabulary(docs, raw());
    CHECK(vocab.corpus_size() == 3);
    CHECK(vocab.size() == 4);
    CHECK(vocab.df("app") == 2);
    CHECK(vocab.df("good") == 2);
    CHECK(vocab.df("bad") == 1);
    CHECK(vocab.df("game") == 1);

    const auto v = transform(docs[2], vocab);
    CHECK(v.at(*vocab.index_of("good")) == doctest::Approx(0.81093).epsilon(1e-5));
    CHECK(v.at(*vocab.index_of("good")) == doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-15));
    CHECK(v.at(*vocab.index_of("game")) == doctest::Approx(1.09861).epsilon(1e-5));
    CHECK(v.nnz() == 2);

    auto capped = raw();
    capped.max_features = 2;
    CHECK(fit_vocabulary(docs, capped).terms() == Strings{"app", "good"});

    const std::vector<Label> labels{Label::Positive, Label::Negative, Label::Positive};
    const auto data = fit_transform(docs, labels, raw());
    CHECK(data.rows() == 3);
    CHECK(data.dimension() == 4);
    for (const auto& row : data.matrix) CHECK(row.dimension == 4);
  }

  TEST_CASE("df equal to C gives zero weight and unseen documents give zero vectors") {
    const std::vector<TokenizedDocument> docs{doc({"app", "one"}), doc({"app", "two"})};
    const auto vocab = fit_vocabulary(docs, raw());
    CHECK(transform(doc({"app", "app", "app"}), vocab).nnz() == 0);
    CHECK(transform(doc({"zebra"}), vocab).nnz() == 0);
    CHECK(transform(doc({}), vocab).nnz() == 0);
  }

  TEST_CASE("empty inputs") {
    CHECK_THROWS_AS(fit_vocabulary({}, raw()), Error);
    const std::vector<TokenizedDocument> empty{doc({})};
    try {
      fit_vocabulary(empty, raw());
      FAIL("expected EmptyVocabulary");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptyVocabulary);
    }
    auto allow = raw();
    allow.allow_empty_vocabulary = true;
    CHECK(fit_vocabulary(empty, allow).size() == 0);

    const std::vector<Label> one{Label::Positive, Label::Negative};
    CHECK_THROWS_AS(fit_transform(three_docs(), one, raw()), Error);
  }

  TEST_CASE("featurizations") {
    CHECK(featurization("uni").config.ngram_high == 1);
    CHECK(featurization("bi").config.ngram_low == 1);
    CHECK(featurization("bi").config.ngram_high == 2);
    CHECK(featurization("tri").config.ngram_high == 3);
    CHECK(featurization("tri", false).config.ngram_low == 3);
    CHECK(featurization("2").name == "bi");
    CHECK_THROWS_AS(featurization("quad"), Error);
    CHECK(featurization("uni").config.max_features == std::optional<std::size_t>(20000));
    CHECK(featurization("uni").config.normalize);
  }

  TEST_CASE("sparse transform equals the dense oracle") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto docs = appsent::testing::random_corpus(rng, 1 + rng.below(50), 30, 2 + rng.below(12));
      const int low = 1 + static_cast<int>(rng.below(2));
      const int high = low + static_cast<int>(rng.below(2));
      auto config = raw(low, high);
      config.allow_empty_vocabulary = true;
      const auto vocab = fit_vocabulary(docs, config);
      const auto oracle = appsent::testing::dense_tfidf(docs, low, high);
      REQUIRE(vocab.terms() == oracle.terms);
      REQUIRE(vocab.doc_frequency() == oracle.df);
      for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto v = transform(docs[d], vocab);
        REQUIRE(v.well_formed());
        REQUIRE(v.nnz() <= extract_ngrams(docs[d].tokens, low, high).size());
        const auto dense = v.to_dense();
        for (std::size_t j = 0; j < dense.size(); ++j) REQUIRE(std::abs(dense[j] - oracle.rows[d][j]) <= 1e-9);
      }
    }
  }

  TEST_CASE("normalized rows have unit length and ignore IDF scale") {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
      const auto docs = appsent::testing::random_corpus(rng, 2 + rng.below(40), 20, 15);
      VectorizerConfig on;
      on.allow_empty_vocabulary = true;
      const auto vocab = fit_vocabulary(docs, on);
      auto off = on;
      off.normalize = false;
      const Vocabulary raw_vocab(vocab.terms(), vocab.doc_frequency(), vocab.corpus_size(), off);
      for (const auto& d : docs) {
        const auto v = transform(d, vocab);
        if (v.nnz() == 0) continue;
        REQUIRE(std::abs(v.norm() - 1.0) <= 1e-12);
        auto scaled = transform(d, raw_vocab);
        const double factor = 0.1 + rng.uniform() * 10.0;
        for (auto& e : scaled.entries) e.weight *= factor;
        const double n = scaled.norm();
        for (std::size_t k = 0; k < v.nnz(); ++k) REQUIRE(std::abs(scaled.entries[k].weight / n - v.entries[k].weight) <= 1e-12);
      }
    }
  }

  TEST_CASE("vocabulary ignores document order") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
      auto docs = appsent::testing::random_corpus(rng, 1 + rng.below(60), 25, 20);
      auto config = featurization("tri").config;
      config.allow_empty_vocabulary = true;
      config.max_features = 1 + rng.below(40);
      const auto a = fit_vocabulary(docs, config, Exec::Serial);
      rng.shuffle(std::span(docs));
      CHECK(fit_vocabulary(docs, config, Exec::Serial) == a);
    }
  }

  TEST_CASE("max_features keeps the most frequent terms, ties lexicographic") {
    const std::vector<TokenizedDocument> docs{doc({"b", "b", "a", "c"}), doc({"c", "d", "a"})};
    auto config = raw();
    config.max_features = 2;
    CHECK(fit_vocabulary(docs, config).terms() == Strings{"a", "b"});
    config.max_features = 3;
    CHECK(fit_vocabulary(docs, config).terms() == Strings{"a", "b", "c"});
  }

  TEST_CASE("min_df and sublinear tf") {
    const auto docs = three_docs();
    auto config = raw();
    config.min_df = 2;
    CHECK(fit_vocabulary(docs, config).terms() == Strings{"app", "good"});
    config.min_df = 1;
    config.sublinear_tf = true;
    const auto vocab = fit_vocabulary(docs, config);
    CHECK(transform(docs[2], vocab).at(*vocab.index_of("good")) ==
          doctest::Approx((1.0 + std::log(2.0)) * std::log(1.5)).epsilon(1e-15));
    config.sublinear_tf = false;
    config.smooth_idf = true;
    const auto smooth = fit_vocabulary(docs, config);
    CHECK(transform(docs[0], smooth).at(*smooth.index_of("app")) ==
          doctest::Approx(std::log(4.0 / 3.0) + 1.0).epsilon(1e-15));
  }

  TEST_CASE("serial and parallel paths agree bit for bit") {
    Rng rng(14);
    const auto docs = appsent::testing::random_corpus(rng, 700, 30, 400);
    const auto config = featurization("tri").config;
    const auto serial = fit_vocabulary(docs, config, Exec::Serial);
    const auto parallel = fit_vocabulary(docs, config, Exec::Parallel);
    CHECK(serial == parallel);
    CHECK(transform_all(docs, serial, Exec::Serial) == transform_all(docs, parallel, Exec::Parallel));
  }

  TEST_CASE("vocabulary json round trip") {
    Rng rng(15);
    const auto docs = appsent::testing::random_corpus(rng, 40, 20, 30);
    const auto vocab = fit_vocabulary(docs, featurization("bi").config);
    const auto back = Vocabulary::from_json(nlohmann::json::parse(vocab.to_json().dump()));
    CHECK(back == vocab);
    CHECK(back.idf() == vocab.idf());
    CHECK(transform_all(docs, back) == transform_all(docs, vocab));

    auto broken = vocab.to_json();
    broken["corpus_size"] = 0;
    CHECK_THROWS_AS(Vocabulary::from_json(broken), Error);
    CHECK(config_from_json(config_to_json(featurization("tri", false).config)) == featurization("tri", false).config);
  }

  TEST_CASE("config validation") {
    VectorizerConfig c;
    c.ngram_low = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.ngram_low = 3;
    c.ngram_high = 2;
    CHECK_THROWS_AS(c.validate(), Error);
  }
}
