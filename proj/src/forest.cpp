// Random forest of Gini decision trees grown to purity.
//
// Each tree gets its own seed derived from the model seed and the tree index,
// which is all the state a tree depends on; trees can therefore be grown in any
// order on any thread. Bootstrap repeats are carried as integer sample weights.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "classifiers_internal.hpp"

namespace appsent::classifiers {

const TreeNode& DecisionTree::leaf_for(const SparseVector& x) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0) {
    const double v = x.at(static_cast<std::uint32_t>(node->feature));
    node = &nodes[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

Label DecisionTree::predict(const SparseVector& x) const {
  const auto& leaf = leaf_for(x);
  return leaf.class_counts[1] >= leaf.class_counts[0] ? Label::Positive : Label::Negative;
}

namespace {

struct ColumnEntry {
  std::uint32_t row;
  double value;
};

/// Column-major copy of the training rows.
struct Columns {
  std::vector<std::size_t> offsets;
  std::vector<ColumnEntry> entries;

  std::span<const ColumnEntry> column(std::size_t f) const {
    return {entries.data() + offsets[f], offsets[f + 1] - offsets[f]};
  }
};

Columns build_columns(const DataView& data) {
  Columns cols;
  const std::size_t d = data.dimension();
  cols.offsets.assign(d + 1, 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const auto& e : data.row(i).entries) ++cols.offsets[e.index + 1];
  }
  std::partial_sum(cols.offsets.begin(), cols.offsets.end(), cols.offsets.begin());
  cols.entries.resize(cols.offsets.back());
  std::vector<std::size_t> fill(cols.offsets.begin(), cols.offsets.end() - 1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (const auto& e : data.row(i).entries)
      cols.entries[fill[e.index]++] = {static_cast<std::uint32_t>(i), e.weight};
  }
  return cols;
}

using Counts = std::array<std::uint64_t, 2>;

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = -1.0;  // sum over children of (n0^2 + n1^2) / n; larger is purer
};

class TreeBuilder {
 public:
  TreeBuilder(const DataView& data, const Columns& cols, std::size_t mtry,
              std::uint64_t min_split, std::uint64_t seed, bool bootstrap)
      : data_(data), cols_(cols), mtry_(mtry), min_split_(min_split),
        feature_rng_(derive_seed(seed, 2)), weight_(data.size(), 0), member_(data.size(), -1),
        perm_(data.dimension()) {
    std::iota(perm_.begin(), perm_.end(), 0u);
    if (bootstrap) {
      Rng rng(derive_seed(seed, 1));
      for (std::size_t i = 0; i < data.size(); ++i) ++weight_[rng.below(data.size())];
    } else {
      std::fill(weight_.begin(), weight_.end(), 1u);
    }
  }

  DecisionTree build() {
    DecisionTree tree;
    std::vector<std::uint32_t> root_rows;
    for (std::size_t i = 0; i < weight_.size(); ++i) {
      if (weight_[i]) root_rows.push_back(static_cast<std::uint32_t>(i));
    }
    tree.nodes.emplace_back();
    std::vector<std::pair<std::int32_t, std::vector<std::uint32_t>>> stack;
    stack.emplace_back(0, std::move(root_rows));
    while (!stack.empty()) {
      auto [id, rows] = std::move(stack.back());
      stack.pop_back();
      Counts totals{};
      for (auto r : rows) {
        totals[static_cast<std::size_t>(data_.label(r))] += weight_[r];
        member_[r] = id;
      }
      auto& node = tree.nodes[static_cast<std::size_t>(id)];
      node.class_counts = {static_cast<std::uint32_t>(totals[0]), static_cast<std::uint32_t>(totals[1])};
      if (totals[0] == 0 || totals[1] == 0 || totals[0] + totals[1] < min_split_) continue;

      const Split split = best_split(id, rows, totals);
      if (split.feature < 0) continue;  // no feature separates these rows

      std::vector<std::uint32_t> left, right;
      gather(static_cast<std::size_t>(split.feature), id, rows);
      for (auto r : rows) side_[r] = 0.0 <= split.threshold;
      for (const auto& [value, r] : values_) side_[r] = value <= split.threshold;
      for (auto r : rows) (side_[r] ? left : right).push_back(r);

      const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = left_id + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      stack.emplace_back(left_id + 1, std::move(right));
      stack.emplace_back(left_id, std::move(left));
    }
    return tree;
  }

 private:
  const DataView& data_;
  const Columns& cols_;
  std::size_t mtry_;
  std::uint64_t min_split_;
  Rng feature_rng_;
  std::vector<std::uint32_t> weight_;
  std::vector<std::int32_t> member_;  // id of the node a row was last assigned to
  std::vector<std::uint32_t> perm_;
  std::vector<std::pair<double, std::uint32_t>> values_;  // nonzero (value, row) in the node
  std::vector<char> side_ = std::vector<char>(data_.size(), 0);

  // Nonzero values of feature f among the node's rows, whichever way is cheaper.
  void gather(std::size_t f, std::int32_t id, const std::vector<std::uint32_t>& rows) {
    values_.clear();
    const auto col = cols_.column(f);
    if (col.size() <= 4 * rows.size()) {
      for (const auto& e : col) {
        if (member_[e.row] == id) values_.emplace_back(e.value, e.row);
      }
    } else {
      for (auto r : rows) {
        const double v = data_.row(r).at(static_cast<std::uint32_t>(f));
        if (v != 0.0) values_.emplace_back(v, r);
      }
    }
  }

  void evaluate(std::size_t f, std::int32_t id, const std::vector<std::uint32_t>& rows,
                const Counts& totals, Split& best) {
    gather(f, id, rows);
    if (values_.empty()) return;
    std::sort(values_.begin(), values_.end());

    // Distinct values with their class weights; rows absent from values_ sit at 0.
    struct Group {
      double value;
      Counts counts;
    };
    std::vector<Group> groups;
    Counts nonzero{};
    bool zero_placed = false;
    Counts zero{};
    for (const auto& [value, r] : values_) nonzero[static_cast<std::size_t>(data_.label(r))] += weight_[r];
    zero = {totals[0] - nonzero[0], totals[1] - nonzero[1]};
    const bool has_zero = zero[0] + zero[1] > 0;
    const auto push = [&](double value, std::size_t c, std::uint64_t w) {
      if (groups.empty() || groups.back().value != value) groups.push_back({value, {}});
      groups.back().counts[c] += w;
    };
    for (const auto& [value, r] : values_) {
      if (has_zero && !zero_placed && value > 0.0) {
        groups.push_back({0.0, zero});
        zero_placed = true;
      }
      push(value, static_cast<std::size_t>(data_.label(r)), weight_[r]);
    }
    if (has_zero && !zero_placed) groups.push_back({0.0, zero});
    if (groups.size() < 2) return;

    Counts left{};
    const double n = static_cast<double>(totals[0] + totals[1]);
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      left[0] += groups[g].counts[0];
      left[1] += groups[g].counts[1];
      const double l0 = static_cast<double>(left[0]), l1 = static_cast<double>(left[1]);
      const double r0 = static_cast<double>(totals[0] - left[0]);
      const double r1 = static_cast<double>(totals[1] - left[1]);
      const double nl = l0 + l1;
      const double nr = n - nl;
      const double score = (l0 * l0 + l1 * l1) / nl + (r0 * r0 + r1 * r1) / nr;
      if (score > best.score) {
        const double a = groups[g].value, b = groups[g + 1].value;
        double mid = a + (b - a) / 2.0;
        if (!(mid >= a && mid < b)) mid = a;
        best = {static_cast<std::int32_t>(f), mid, score};
      }
    }
  }

  Split best_split(std::int32_t id, const std::vector<std::uint32_t>& rows, const Counts& totals) {
    Split best;
    const std::size_t d = perm_.size();
    for (std::size_t i = 0; i < d; ++i) {
      std::swap(perm_[i], perm_[i + feature_rng_.below(d - i)]);
      evaluate(perm_[i], id, rows, totals, best);
      if (i + 1 >= mtry_ && best.feature >= 0) break;
    }
    return best;
  }
};

}  // namespace

Forest internal::fit_forest(const DataView& data, const ModelConfig& config, Exec exec) {
  const auto n_trees = static_cast<std::size_t>(config.get("n_trees"));
  const auto requested = static_cast<std::size_t>(config.get("max_features"));
  const std::size_t d = data.dimension();
  const std::size_t mtry =
      requested == 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))))
                     : std::min(requested, d);
  const auto min_split = static_cast<std::uint64_t>(config.get("min_samples_split"));
  const bool bootstrap = config.get("bootstrap") != 0.0;

  const Columns cols = build_columns(data);
  Forest forest;
  forest.trees.resize(n_trees);
  parallel_for(n_trees, exec, [&](std::size_t t) {
    TreeBuilder builder(data, cols, std::max<std::size_t>(mtry, 1), min_split,
                        derive_seed(config.seed, {0xf0e57u, t}), bootstrap);
    forest.trees[t] = builder.build();
  });
  return forest;
}

}  // namespace appsent::classifiers
