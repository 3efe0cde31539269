// k-nearest neighbours by cosine similarity. Ties in similarity go to the lower
// training index; a tied vote goes to the label of the single nearest vector.

#include <algorithm>
#include <numeric>

#include "classifiers_internal.hpp"

namespace appsent::classifiers {

KnnIndex internal::fit_knn(const DataView& data, std::size_t k) {
  KnnIndex index;
  index.k = k;
  index.vectors.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    index.vectors.push_back(data.row(i));
    index.labels.push_back(data.label(i));
    index.norms.push_back(index.vectors.back().norm());
  }
  return index;
}

std::vector<double> detail::cosine_scan(const KnnIndex& index, const SparseVector& query, Exec exec) {
  const double qn = query.norm();
  std::vector<double> sims(index.vectors.size(), 0.0);
  if (qn == 0.0) return sims;
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (sims.size() + kBlock - 1) / kBlock;
  parallel_for(blocks, exec, [&](std::size_t b) {
    const std::size_t end = std::min(sims.size(), (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double n = index.norms[i];
      sims[i] = n == 0.0 ? 0.0 : dot(query, index.vectors[i]) / (qn * n);
    }
  });
  return sims;
}

std::vector<std::size_t> detail::nearest(const KnnIndex& index, const SparseVector& query, Exec exec) {
  const auto sims = cosine_scan(index, query, exec);
  std::vector<std::size_t> order(sims.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t k = std::min(index.k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (sims[a] != sims[b]) return sims[a] > sims[b];
                      return a < b;
                    });
  order.resize(k);
  return order;
}

internal::KnnVote internal::knn_vote(const KnnIndex& index, const SparseVector& query) {
  const auto top = detail::nearest(index, query, Exec::Serial);
  KnnVote vote;
  for (auto i : top) {
    if (index.labels[i] == Label::Positive) {
      ++vote.positive;
    } else {
      ++vote.negative;
    }
  }
  vote.nearest = index.labels[top.front()];
  return vote;
}

}  // namespace appsent::classifiers
