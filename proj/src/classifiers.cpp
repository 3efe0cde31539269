#include "appsent/classifiers.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "appsent/error.hpp"
#include "appsent/strings.hpp"
#include "appsent/vectorize.hpp"
#include "classifiers_internal.hpp"

namespace appsent::classifiers {

using nlohmann::json;

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::NB: return "NB";
    case Algorithm::LR: return "LR";
    case Algorithm::SVM: return "SVM";
    case Algorithm::KNN: return "KNN";
    case Algorithm::RF: return "RF";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  const auto key = to_lower(trim(name));
  if (key == "nb") return Algorithm::NB;
  if (key == "lr") return Algorithm::LR;
  if (key == "svm") return Algorithm::SVM;
  if (key == "knn") return Algorithm::KNN;
  if (key == "rf") return Algorithm::RF;
  throw Error(ErrorKind::InvalidHyperparameter, "unknown algorithm '" + std::string(name) + "'");
}

const Hyperparameters& default_hyperparameters(Algorithm algorithm) {
  static const Hyperparameters nb{{"alpha", 1.0}};
  static const Hyperparameters lr{
      {"lambda", 1e-4}, {"step", 0.5}, {"tolerance", 1e-6}, {"max_epochs", 1000}};
  static const Hyperparameters svm{{"lambda", 1e-4}, {"epochs", 20}};
  static const Hyperparameters knn{{"k", 5}};
  static const Hyperparameters rf{
      {"n_trees", 100}, {"max_features", 0}, {"bootstrap", 1}, {"min_samples_split", 2}};
  switch (algorithm) {
    case Algorithm::NB: return nb;
    case Algorithm::LR: return lr;
    case Algorithm::SVM: return svm;
    case Algorithm::KNN: return knn;
    case Algorithm::RF: return rf;
  }
  return nb;
}

double ModelConfig::get(const std::string& key) const {
  if (const auto it = hyperparameters.find(key); it != hyperparameters.end()) return it->second;
  const auto& defaults = default_hyperparameters(algorithm);
  if (const auto it = defaults.find(key); it != defaults.end()) return it->second;
  throw Error(ErrorKind::InvalidHyperparameter,
              std::string(to_string(algorithm)) + " has no hyperparameter '" + key + "'");
}

void ModelConfig::validate() const {
  const auto& defaults = default_hyperparameters(algorithm);
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidHyperparameter, std::string(to_string(algorithm)) + ": " + what);
  };
  for (const auto& [key, value] : hyperparameters) {
    if (!defaults.count(key)) fail("unknown hyperparameter '" + key + "'");
    if (!std::isfinite(value)) fail(key + " must be finite");
  }
  const auto positive = [&](const char* key) {
    if (!(get(key) > 0.0)) fail(std::string(key) + " must be > 0");
  };
  const auto whole = [&](const char* key, double min) {
    const double v = get(key);
    if (v < min || v != std::floor(v)) fail(std::string(key) + " must be an integer >= " + format_double(min));
  };
  switch (algorithm) {
    case Algorithm::NB:
      positive("alpha");
      break;
    case Algorithm::LR:
      if (get("lambda") < 0.0) fail("lambda must be >= 0");
      positive("step");
      positive("tolerance");
      whole("max_epochs", 1);
      break;
    case Algorithm::SVM:
      positive("lambda");
      whole("epochs", 1);
      break;
    case Algorithm::KNN:
      whole("k", 1);
      break;
    case Algorithm::RF:
      whole("n_trees", 1);
      whole("max_features", 0);
      whole("min_samples_split", 2);
      if (get("bootstrap") != 0.0 && get("bootstrap") != 1.0) fail("bootstrap must be 0 or 1");
      break;
  }
}

DataView::DataView(std::span<const SparseVector> rows, std::span<const Label> labels,
                   std::size_t dimension)
    : rows_(rows), labels_(labels), dimension_(dimension) {
  if (rows.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch, "rows and labels differ in length");
}

DataView::DataView(std::span<const SparseVector> rows, std::span<const Label> labels,
                   std::size_t dimension, std::vector<std::uint32_t> selection)
    : DataView(rows, labels, dimension) {
  for (auto idx : selection) {
    if (idx >= rows.size()) throw Error(ErrorKind::OutOfRange, "selection index out of range");
  }
  selection_ = std::move(selection);
  selected_ = true;
}

DataView::DataView(const vectorize::VectorizedDataset& dataset)
    : DataView(dataset.matrix, dataset.labels, dataset.dimension()) {}

std::array<std::size_t, 2> DataView::class_counts() const {
  std::array<std::size_t, 2> counts{};
  for (std::size_t i = 0; i < size(); ++i) ++counts[static_cast<std::size_t>(label(i))];
  return counts;
}

FittedModel fit(const DataView& data, const ModelConfig& config, Exec exec) {
  config.validate();
  if (data.size() == 0) throw Error(ErrorKind::EmptyDataset, "no training rows");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.row(i).dimension != data.dimension())
      throw Error(ErrorKind::DimensionMismatch, "training row " + std::to_string(i) +
                                                    " has dimension " +
                                                    std::to_string(data.row(i).dimension));
  }
  const auto counts = data.class_counts();
  if (counts[0] == 0 || counts[1] == 0)
    throw Error(ErrorKind::SingleClassDataset, "training data contains one class only");

  FittedModel model;
  model.config = config;
  model.dimension = data.dimension();
  switch (config.algorithm) {
    case Algorithm::NB:
      model.params = internal::fit_naive_bayes(data, config.get("alpha"));
      break;
    case Algorithm::LR:
      model.params = internal::fit_logistic(data, config, exec);
      break;
    case Algorithm::SVM:
      model.params = internal::fit_linear_svm(data, config);
      break;
    case Algorithm::KNN:
      model.params = internal::fit_knn(data, static_cast<std::size_t>(config.get("k")));
      break;
    case Algorithm::RF:
      model.params = internal::fit_forest(data, config, exec);
      break;
  }
  return model;
}

FittedModel fit(const vectorize::VectorizedDataset& dataset, const ModelConfig& config, Exec exec) {
  return fit(DataView(dataset), config, exec);
}

namespace {

void check_dimension(const FittedModel& model, const SparseVector& x) {
  if (x.dimension != model.dimension)
    throw Error(ErrorKind::DimensionMismatch, "vector dimension " + std::to_string(x.dimension) +
                                                  " but model expects " +
                                                  std::to_string(model.dimension));
}

double linear_score(const LinearParams& p, const SparseVector& x) {
  return dot(x, p.weights) + p.bias;
}

}  // namespace

double predict_score(const FittedModel& model, const SparseVector& x) {
  check_dimension(model, x);
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          const auto joint = detail::nb_joint_log(p, x);
          return detail::sigmoid(joint[1] - joint[0]);
        } else if constexpr (std::is_same_v<T, LinearParams>) {
          const double z = linear_score(p, x);
          return model.config.algorithm == Algorithm::LR ? detail::sigmoid(z) : z;
        } else if constexpr (std::is_same_v<T, KnnIndex>) {
          const auto vote = internal::knn_vote(p, x);
          return static_cast<double>(vote.positive) / static_cast<double>(vote.positive + vote.negative);
        } else {
          std::size_t positive = 0;
          for (const auto& tree : p.trees) positive += tree.predict(x) == Label::Positive;
          return static_cast<double>(positive) / static_cast<double>(p.trees.size());
        }
      },
      model.params);
}

Label predict(const FittedModel& model, const SparseVector& x) {
  check_dimension(model, x);
  return std::visit(
      [&](const auto& p) -> Label {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          const auto joint = detail::nb_joint_log(p, x);
          return joint[1] >= joint[0] ? Label::Positive : Label::Negative;
        } else if constexpr (std::is_same_v<T, LinearParams>) {
          return linear_score(p, x) >= 0.0 ? Label::Positive : Label::Negative;
        } else if constexpr (std::is_same_v<T, KnnIndex>) {
          const auto vote = internal::knn_vote(p, x);
          if (vote.positive == vote.negative) return vote.nearest;
          return vote.positive > vote.negative ? Label::Positive : Label::Negative;
        } else {
          std::size_t positive = 0;
          for (const auto& tree : p.trees) positive += tree.predict(x) == Label::Positive;
          return 2 * positive >= p.trees.size() ? Label::Positive : Label::Negative;
        }
      },
      model.params);
}

double positive_probability(const FittedModel& model, const SparseVector& x) {
  if (const auto* knn = std::get_if<KnnIndex>(&model.params)) {
    check_dimension(model, x);
    // A tied vote leans toward the nearest neighbour, as predict() does.
    const auto vote = internal::knn_vote(*knn, x);
    const double k = static_cast<double>(vote.positive + vote.negative);
    if (vote.positive == vote.negative)
      return 0.5 + (vote.nearest == Label::Positive ? 0.5 : -0.5) / (k + 1.0);
    return static_cast<double>(vote.positive) / k;
  }
  const double s = predict_score(model, x);
  return model.config.algorithm == Algorithm::SVM ? detail::sigmoid(s) : s;
}

std::vector<Label> predict_all(const FittedModel& model, std::span<const SparseVector> rows,
                               Exec exec) {
  std::vector<Label> out(rows.size());
  parallel_for(rows.size(), exec, [&](std::size_t i) { out[i] = predict(model, rows[i]); });
  return out;
}

// Serialization ------------------------------------------------------------

namespace {

json sparse_to_json(const SparseVector& v) {
  json idx = json::array();
  json w = json::array();
  for (const auto& e : v.entries) {
    idx.push_back(e.index);
    w.push_back(e.weight);
  }
  return json{{"i", std::move(idx)}, {"w", std::move(w)}};
}

SparseVector sparse_from_json(const json& doc, std::size_t dimension) {
  SparseVector v;
  v.dimension = dimension;
  const auto& idx = doc.at("i");
  const auto& w = doc.at("w");
  if (idx.size() != w.size()) throw Error(ErrorKind::BadFormat, "sparse vector arrays differ in length");
  for (std::size_t i = 0; i < idx.size(); ++i)
    v.entries.push_back({idx[i].get<std::uint32_t>(), w[i].get<double>()});
  if (!v.well_formed()) throw Error(ErrorKind::BadFormat, "sparse vector violates invariants");
  return v;
}

json labels_to_json(const std::vector<Label>& labels) {
  std::string s;
  s.reserve(labels.size());
  for (auto l : labels) s.push_back(l == Label::Positive ? 'P' : 'N');
  return s;
}

std::vector<Label> labels_from_json(const json& doc) {
  std::vector<Label> out;
  for (char c : doc.get<std::string>()) {
    if (c != 'P' && c != 'N') throw Error(ErrorKind::BadFormat, "label string");
    out.push_back(c == 'P' ? Label::Positive : Label::Negative);
  }
  return out;
}

json params_to_json(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NbParams>) {
          return json{{"alpha", p.alpha},
                      {"log_prior", p.log_prior},
                      {"log_likelihood", p.log_likelihood}};
        } else if constexpr (std::is_same_v<T, LinearParams>) {
          return json{{"weights", p.weights}, {"bias", p.bias}, {"epochs_run", p.epochs_run}};
        } else if constexpr (std::is_same_v<T, KnnIndex>) {
          json vectors = json::array();
          for (const auto& v : p.vectors) vectors.push_back(sparse_to_json(v));
          return json{{"k", p.k}, {"labels", labels_to_json(p.labels)}, {"vectors", std::move(vectors)}};
        } else {
          json trees = json::array();
          for (const auto& tree : p.trees) {
            json feature = json::array(), threshold = json::array(), left = json::array(),
                 right = json::array(), negative = json::array(), positive = json::array();
            for (const auto& n : tree.nodes) {
              feature.push_back(n.feature);
              threshold.push_back(n.threshold);
              left.push_back(n.left);
              right.push_back(n.right);
              negative.push_back(n.class_counts[0]);
              positive.push_back(n.class_counts[1]);
            }
            trees.push_back(json{{"feature", feature},
                                 {"threshold", threshold},
                                 {"left", left},
                                 {"right", right},
                                 {"negative", negative},
                                 {"positive", positive}});
          }
          return json{{"trees", std::move(trees)}};
        }
      },
      params);
}

}  // namespace

json to_json(const FittedModel& model) {
  json hp = json::object();
  for (const auto& [k, v] : model.config.hyperparameters) hp[k] = v;
  return json{{"format", "appsent-model"},
              {"version", 1},
              {"algorithm", to_string(model.config.algorithm)},
              {"dimension", model.dimension},
              {"seed", model.config.seed},
              {"hyperparameters", std::move(hp)},
              {"params", params_to_json(model.params)}};
}

FittedModel model_from_json(const json& doc) {
  try {
    if (doc.at("format") != "appsent-model" || doc.at("version") != 1)
      throw Error(ErrorKind::BadFormat, "not a version 1 model document");
    FittedModel model;
    model.config.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    model.config.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : doc.at("hyperparameters").items())
      model.config.hyperparameters[k] = v.get<double>();
    model.config.validate();
    model.dimension = doc.at("dimension").get<std::size_t>();
    const auto& p = doc.at("params");
    const std::size_t d = model.dimension;
    switch (model.config.algorithm) {
      case Algorithm::NB: {
        NbParams nb;
        nb.alpha = p.at("alpha").get<double>();
        nb.log_prior = p.at("log_prior").get<std::array<double, 2>>();
        nb.log_likelihood = p.at("log_likelihood").get<std::array<std::vector<double>, 2>>();
        if (nb.log_likelihood[0].size() != d || nb.log_likelihood[1].size() != d)
          throw Error(ErrorKind::BadFormat, "NB likelihood table size");
        model.params = std::move(nb);
        break;
      }
      case Algorithm::LR:
      case Algorithm::SVM: {
        LinearParams lin;
        lin.weights = p.at("weights").get<std::vector<double>>();
        lin.bias = p.at("bias").get<double>();
        lin.epochs_run = p.at("epochs_run").get<std::size_t>();
        if (lin.weights.size() != d) throw Error(ErrorKind::BadFormat, "weight vector size");
        model.params = std::move(lin);
        break;
      }
      case Algorithm::KNN: {
        KnnIndex knn;
        knn.k = p.at("k").get<std::size_t>();
        knn.labels = labels_from_json(p.at("labels"));
        for (const auto& v : p.at("vectors")) {
          knn.vectors.push_back(sparse_from_json(v, d));
          knn.norms.push_back(knn.vectors.back().norm());
        }
        if (knn.labels.size() != knn.vectors.size() || knn.vectors.empty())
          throw Error(ErrorKind::BadFormat, "KNN index size");
        model.params = std::move(knn);
        break;
      }
      case Algorithm::RF: {
        Forest forest;
        for (const auto& t : p.at("trees")) {
          DecisionTree tree;
          const auto feature = t.at("feature").get<std::vector<std::int32_t>>();
          const auto threshold = t.at("threshold").get<std::vector<double>>();
          const auto left = t.at("left").get<std::vector<std::int32_t>>();
          const auto right = t.at("right").get<std::vector<std::int32_t>>();
          const auto negative = t.at("negative").get<std::vector<std::uint32_t>>();
          const auto positive = t.at("positive").get<std::vector<std::uint32_t>>();
          const auto n = feature.size();
          if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
              negative.size() != n || positive.size() != n)
            throw Error(ErrorKind::BadFormat, "tree arrays differ in length");
          for (std::size_t i = 0; i < n; ++i) {
            const auto in_range = [&](std::int32_t c) {
              return c > static_cast<std::int32_t>(i) && c < static_cast<std::int32_t>(n);
            };
            if (feature[i] >= 0 &&
                (static_cast<std::size_t>(feature[i]) >= d || !in_range(left[i]) || !in_range(right[i])))
              throw Error(ErrorKind::BadFormat, "tree node links");
            tree.nodes.push_back({feature[i], threshold[i], left[i], right[i], {negative[i], positive[i]}});
          }
          forest.trees.push_back(std::move(tree));
        }
        if (forest.trees.empty()) throw Error(ErrorKind::BadFormat, "empty forest");
        model.params = std::move(forest);
        break;
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("model: ") + e.what());
  }
}

}  // namespace appsent::classifiers
