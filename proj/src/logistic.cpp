// Binary logistic regression, full-batch gradient descent with a fixed step.
// Loss: mean log-loss + (lambda / 2) |w|^2, bias unpenalized.

#include <algorithm>
#include <cmath>
#include <string>

#include "appsent/error.hpp"
#include "classifiers_internal.hpp"

namespace appsent::classifiers {

namespace {

// Row partition used for the gradient sums. It does not depend on the thread
// count, so serial and parallel runs add the same partial sums in the same order.
constexpr std::size_t kGradientShards = 16;

double softplus(double z) noexcept {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double target(Label l) noexcept { return l == Label::Positive ? 1.0 : 0.0; }

}  // namespace

double detail::sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double detail::logistic_loss(const DataView& data, std::span<const double> weights, double bias,
                             double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double z = dot(data.row(i), weights) + bias;
    loss += softplus(z) - target(data.label(i)) * z;
  }
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return loss / static_cast<double>(data.size()) + 0.5 * lambda * penalty;
}

std::vector<double> detail::logistic_gradient(const DataView& data, std::span<const double> weights,
                                              double bias, double lambda, double& bias_gradient,
                                              Exec exec) {
  const std::size_t d = weights.size();
  const std::size_t n = data.size();
  const std::size_t shards = std::min(n, kGradientShards);
  std::vector<std::vector<double>> partial(shards, std::vector<double>(d, 0.0));
  std::vector<double> partial_bias(shards, 0.0);
  parallel_for(shards, exec, [&](std::size_t s) {
    auto& g = partial[s];
    for (std::size_t i = n * s / shards; i < n * (s + 1) / shards; ++i) {
      const auto& x = data.row(i);
      const double r = sigmoid(dot(x, weights) + bias) - target(data.label(i));
      for (const auto& e : x.entries) g[e.index] += r * e.weight;
      partial_bias[s] += r;
    }
  });
  std::vector<double> grad(d, 0.0);
  bias_gradient = 0.0;
  for (std::size_t s = 0; s < shards; ++s) {
    for (std::size_t j = 0; j < d; ++j) grad[j] += partial[s][j];
    bias_gradient += partial_bias[s];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + lambda * weights[j];
  bias_gradient *= inv_n;
  return grad;
}

LinearParams internal::fit_logistic(const DataView& data, const ModelConfig& config, Exec exec) {
  const double lambda = config.get("lambda");
  const double step = config.get("step");
  const double tolerance = config.get("tolerance");
  const auto max_epochs = static_cast<std::size_t>(config.get("max_epochs"));

  LinearParams p;
  p.weights.assign(data.dimension(), 0.0);
  for (p.epochs_run = 0; p.epochs_run < max_epochs; ++p.epochs_run) {
    double gb = 0.0;
    const auto g = detail::logistic_gradient(data, p.weights, p.bias, lambda, gb, exec);
    double g_max = std::abs(gb);
    for (double v : g) g_max = std::max(g_max, std::abs(v));
    if (g_max < tolerance) return p;
    for (std::size_t j = 0; j < g.size(); ++j) p.weights[j] -= step * g[j];
    p.bias -= step * gb;
  }
  warn_once("logistic regression stopped at the epoch cap (" + std::to_string(max_epochs) +
       ") before the gradient tolerance was met");
  return p;
}

}  // namespace appsent::classifiers
