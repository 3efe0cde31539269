// Serial reference vs OpenMP path for each data-parallel kernel.
// The second argument of every benchmark selects the policy: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "../tests/support/generators.hpp"
#include "appsent/classifiers.hpp"
#include "appsent/ensemble.hpp"
#include "appsent/vectorize.hpp"

namespace {

using namespace appsent;

Exec policy(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

std::vector<textprep::TokenizedDocument> corpus(std::size_t docs) {
  Rng rng(7);
  return testing::random_corpus(rng, docs, 40, 3000);
}

vectorize::VectorizedDataset dataset(std::size_t docs) {
  const auto c = corpus(docs);
  Rng rng(8);
  const auto labels = testing::mixed_labels(rng, docs);
  return vectorize::fit_transform(c, labels, vectorize::featurization("bi").config, Exec::Serial);
}

void BM_FitVocabulary(benchmark::State& state) {
  const auto c = corpus(static_cast<std::size_t>(state.range(0)));
  const auto config = vectorize::featurization("tri").config;
  for (auto _ : state) benchmark::DoNotOptimize(vectorize::fit_vocabulary(c, config, policy(state)));
}

void BM_Transform(benchmark::State& state) {
  const auto c = corpus(static_cast<std::size_t>(state.range(0)));
  const auto vocab = vectorize::fit_vocabulary(c, vectorize::featurization("tri").config, Exec::Serial);
  for (auto _ : state) benchmark::DoNotOptimize(vectorize::transform_all(c, vocab, policy(state)));
}

void BM_LogisticGradient(benchmark::State& state) {
  const auto data = dataset(static_cast<std::size_t>(state.range(0)));
  const classifiers::DataView view(data);
  std::vector<double> w(data.dimension(), 0.01);
  double gb = 0.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(classifiers::detail::logistic_gradient(view, w, 0.0, 1e-4, gb, policy(state)));
}

void BM_KnnScan(benchmark::State& state) {
  const auto data = dataset(static_cast<std::size_t>(state.range(0)));
  classifiers::ModelConfig config;
  config.algorithm = classifiers::Algorithm::KNN;
  const auto model = classifiers::fit(data, config, Exec::Serial);
  const auto& index = std::get<classifiers::KnnIndex>(model.params);
  for (auto _ : state) benchmark::DoNotOptimize(classifiers::detail::cosine_scan(index, data.matrix[0], policy(state)));
}

void BM_RandomForest(benchmark::State& state) {
  const auto data = dataset(static_cast<std::size_t>(state.range(0)));
  classifiers::ModelConfig config;
  config.algorithm = classifiers::Algorithm::RF;
  config.hyperparameters["n_trees"] = 16;
  for (auto _ : state) benchmark::DoNotOptimize(classifiers::fit(data, config, policy(state)));
}

void BM_Bagging(benchmark::State& state) {
  const auto data = dataset(static_cast<std::size_t>(state.range(0)));
  ensemble::BaggingConfig config;
  config.base.algorithm = classifiers::Algorithm::NB;
  for (auto _ : state) benchmark::DoNotOptimize(ensemble::fit_bagging(data, config, policy(state)));
}

}  // namespace

BENCHMARK(BM_FitVocabulary)->ArgsProduct({{2000, 8000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Transform)->ArgsProduct({{2000, 8000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogisticGradient)->ArgsProduct({{2000, 8000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnScan)->ArgsProduct({{2000, 8000}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RandomForest)->ArgsProduct({{1000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bagging)->ArgsProduct({{2000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
