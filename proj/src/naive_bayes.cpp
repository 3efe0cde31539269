// Multinomial naive Bayes over nonnegative feature weights. TF-IDF weights act
// as fractional term counts; integer count vectors give the textbook model.

#include <cmath>

#include "appsent/error.hpp"
#include "classifiers_internal.hpp"

namespace appsent::classifiers {

namespace internal {

NbParams fit_naive_bayes(const DataView& data, double alpha) {
  const std::size_t d = data.dimension();
  std::array<std::vector<double>, 2> feature_totals{std::vector<double>(d, 0.0),
                                                    std::vector<double>(d, 0.0)};
  std::array<double, 2> class_totals{};
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto c = static_cast<std::size_t>(data.label(i));
    for (const auto& e : data.row(i).entries) {
      if (e.weight < 0.0)
        throw Error(ErrorKind::OutOfRange, "naive Bayes needs nonnegative feature weights");
      feature_totals[c][e.index] += e.weight;
      class_totals[c] += e.weight;
    }
  }
  const auto counts = data.class_counts();
  NbParams nb;
  nb.alpha = alpha;
  const double n = static_cast<double>(data.size());
  for (std::size_t c = 0; c < 2; ++c) {
    nb.log_prior[c] = std::log(static_cast<double>(counts[c]) / n);
    const double denom = std::log(class_totals[c] + alpha * static_cast<double>(d));
    nb.log_likelihood[c].resize(d);
    for (std::size_t j = 0; j < d; ++j)
      nb.log_likelihood[c][j] = std::log(feature_totals[c][j] + alpha) - denom;
  }
  return nb;
}

}  // namespace internal

std::array<double, 2> detail::nb_joint_log(const NbParams& nb, const SparseVector& x) {
  std::array<double, 2> joint = nb.log_prior;
  for (std::size_t c = 0; c < 2; ++c) {
    for (const auto& e : x.entries) joint[c] += e.weight * nb.log_likelihood[c][e.index];
  }
  return joint;
}

}  // namespace appsent::classifiers
