// Linear SVM trained with Pegasos stochastic subgradient steps on the
// regularized hinge loss. The bias is a weight on an implicit constant
// feature. Weights are kept as scale * v so the shrink step is O(1).

#include <numeric>

#include "classifiers_internal.hpp"

namespace appsent::classifiers {

LinearParams internal::fit_linear_svm(const DataView& data, const ModelConfig& config) {
  const double lambda = config.get("lambda");
  const auto epochs = static_cast<std::size_t>(config.get("epochs"));
  const std::size_t d = data.dimension();

  std::vector<double> v(d + 1, 0.0);  // v[d] is the bias weight
  double scale = 1.0;
  std::vector<std::uint32_t> order(data.size());
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(derive_seed(config.seed, {0x5e9a5u, epoch}));
    rng.shuffle(std::span<std::uint32_t>(order));
    for (const auto i : order) {
      ++t;
      const auto& x = data.row(i);
      const double y = data.label(i) == Label::Positive ? 1.0 : -1.0;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double margin = y * scale * (dot(x, std::span<const double>(v.data(), d)) + v[d]);
      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double step = eta * y / scale;
        for (const auto& e : x.entries) v[e.index] += step * e.weight;
        v[d] += step;
      }
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }
  LinearParams p;
  p.weights.resize(d);
  for (std::size_t j = 0; j < d; ++j) p.weights[j] = scale * v[j];
  p.bias = scale * v[d];
  p.epochs_run = epochs;
  return p;
}

}  // namespace appsent::classifiers
