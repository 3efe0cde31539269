#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace appsent {

/// Sparse row: indices strictly increasing and < dimension, no stored zeros.
struct SparseVector {
  struct Entry {
    std::uint32_t index = 0;
    double weight = 0.0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::size_t dimension = 0;
  std::vector<Entry> entries;

  std::size_t nnz() const noexcept { return entries.size(); }

  /// Weight at `index`, 0 when absent.
  double at(std::uint32_t index) const noexcept;

  double squared_norm() const noexcept;
  double norm() const noexcept { return std::sqrt(squared_norm()); }

  /// Checks the structural invariants.
  bool well_formed() const noexcept;

  /// From a dense row, dropping zeros.
  static SparseVector from_dense(std::span<const double> dense);
  std::vector<double> to_dense() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// Sparse-sparse dot product; entries are summed in increasing index order.
double dot(const SparseVector& a, const SparseVector& b) noexcept;

/// Sparse-dense dot product; entries are summed in increasing index order.
double dot(const SparseVector& a, std::span<const double> dense) noexcept;

}  // namespace appsent
