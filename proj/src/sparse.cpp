#include "appsent/sparse.hpp"

#include <algorithm>

namespace appsent {

double SparseVector::at(std::uint32_t index) const noexcept {
  const auto it = std::lower_bound(entries.begin(), entries.end(), index,
                                   [](const Entry& e, std::uint32_t i) { return e.index < i; });
  return it != entries.end() && it->index == index ? it->weight : 0.0;
}

double SparseVector::squared_norm() const noexcept {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.weight * e.weight;
  return sum;
}

bool SparseVector::well_formed() const noexcept {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].index >= dimension || entries[i].weight == 0.0) return false;
    if (i && entries[i - 1].index >= entries[i].index) return false;
  }
  return true;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector v;
  v.dimension = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) v.entries.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return v;
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> dense(dimension, 0.0);
  for (const auto& e : entries) dense[e.index] = e.weight;
  return dense;
}

double dot(const SparseVector& a, const SparseVector& b) noexcept {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      sum += ia->weight * ib->weight;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double dot(const SparseVector& a, std::span<const double> dense) noexcept {
  double sum = 0.0;
  for (const auto& e : a.entries) {
    if (e.index < dense.size()) sum += e.weight * dense[e.index];
  }
  return sum;
}

}  // namespace appsent
