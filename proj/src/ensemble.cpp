#include "appsent/ensemble.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "appsent/error.hpp"
#include "appsent/strings.hpp"

namespace appsent::ensemble {

using classifiers::DataView;
using classifiers::FittedModel;
using nlohmann::json;

std::string_view to_string(Vote vote) noexcept { return vote == Vote::Hard ? "hard" : "soft"; }

Vote parse_vote(std::string_view text) {
  const auto key = to_lower(trim(text));
  if (key == "hard") return Vote::Hard;
  if (key == "soft" || key == "softaverage") return Vote::SoftAverage;
  throw Error(ErrorKind::InvalidHyperparameter, "vote '" + std::string(text) + "'");
}

std::vector<std::uint32_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorKind::EmptyDataset, "cannot resample zero rows");
  Rng rng(seed);
  std::vector<std::uint32_t> idx(n);
  for (auto& i : idx) i = static_cast<std::uint32_t>(rng.below(n));
  return idx;
}

vectorize::VectorizedDataset bootstrap_sample(const vectorize::VectorizedDataset& dataset,
                                              std::uint64_t seed) {
  const auto idx = bootstrap_indices(dataset.rows(), seed);
  vectorize::VectorizedDataset out;
  out.vocabulary = dataset.vocabulary;
  out.matrix.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (auto i : idx) {
    out.matrix.push_back(dataset.matrix[i]);
    out.labels.push_back(dataset.labels[i]);
  }
  return out;
}

BaggedModel fit_bagging(const DataView& data, const BaggingConfig& config, Exec exec) {
  if (config.n_estimators < 1)
    throw Error(ErrorKind::InvalidHyperparameter, "n_estimators must be >= 1");
  config.base.validate();
  if (data.size() == 0) throw Error(ErrorKind::EmptyDataset, "no training rows");

  // Materialize the view once so member views can select from it.
  std::vector<SparseVector> rows;
  std::vector<Label> labels;
  rows.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    rows.push_back(data.row(i));
    labels.push_back(data.label(i));
  }

  BaggedModel model;
  model.vote = config.vote;
  model.members.resize(config.n_estimators);
  const Exec inner = exec == Exec::Parallel ? Exec::Serial : exec;
  parallel_for(config.n_estimators, exec, [&](std::size_t m) {
    for (int attempt = 0; attempt <= kMaxSingleClassRetries; ++attempt) {
      const auto member_seed = derive_seed(config.seed, {m, static_cast<std::uint64_t>(attempt)});
      std::vector<std::uint32_t> idx;
      if (config.identity_bootstrap) {
        idx.resize(rows.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
      } else {
        idx = bootstrap_indices(rows.size(), member_seed);
      }
      DataView view(rows, labels, data.dimension(), std::move(idx));
      const auto counts = view.class_counts();
      if (counts[0] == 0 || counts[1] == 0) {
        if (config.identity_bootstrap) break;
        continue;
      }
      auto base = config.base;
      if (!config.identity_bootstrap) base.seed = derive_seed(member_seed, 1);
      model.members[m] = classifiers::fit(view, base, inner);
      return;
    }
    throw Error(ErrorKind::SingleClassDataset,
                "bagging member " + std::to_string(m) + " drew single-class samples " +
                    std::to_string(kMaxSingleClassRetries + 1) + " times");
  });
  return model;
}

BaggedModel fit_bagging(const vectorize::VectorizedDataset& dataset, const BaggingConfig& config,
                        Exec exec) {
  return fit_bagging(DataView(dataset), config, exec);
}

double predict_bagged_score(const BaggedModel& model, const SparseVector& x) {
  double sum = 0.0;
  for (const auto& m : model.members) sum += classifiers::positive_probability(m, x);
  return sum / static_cast<double>(model.members.size());
}

Label predict_bagged(const BaggedModel& model, const SparseVector& x) {
  // Sums of probabilities are order dependent in the last bit; accumulate in a
  // canonical order so that member permutations cannot change a tie-break.
  std::vector<double> probs;
  probs.reserve(model.members.size());
  std::size_t positive = 0;
  for (const auto& m : model.members) {
    probs.push_back(classifiers::positive_probability(m, x));
    positive += classifiers::predict(m, x) == Label::Positive;
  }
  std::sort(probs.begin(), probs.end());
  double support_pos = 0.0, support_neg = 0.0;
  for (double p : probs) {
    support_pos += p;
    support_neg += 1.0 - p;
  }
  const std::size_t negative = model.members.size() - positive;
  if (model.vote == Vote::Hard && positive != negative)
    return positive > negative ? Label::Positive : Label::Negative;
  return support_pos >= support_neg ? Label::Positive : Label::Negative;
}

void save_bagged(const BaggedModel& model, const std::filesystem::path& dir, std::string_view stem) {
  std::filesystem::create_directories(dir);
  json members = json::array();
  for (std::size_t i = 0; i < model.members.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, ".member-%03zu.json", i);
    const std::string file = std::string(stem) + name;
    std::ofstream out(dir / file);
    out << classifiers::to_json(model.members[i]).dump() << '\n';
    members.push_back(file);
  }
  std::ofstream out(dir / (std::string(stem) + ".json"));
  out << json{{"format", "appsent-bagging"},
              {"version", 1},
              {"vote", to_string(model.vote)},
              {"members", std::move(members)}}
             .dump(2)
      << '\n';
}

BaggedModel load_bagged(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error(ErrorKind::MissingFile, manifest.string());
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != "appsent-bagging" || doc.at("version") != 1)
      throw Error(ErrorKind::BadFormat, "not a version 1 bagging manifest");
    BaggedModel model;
    model.vote = parse_vote(doc.at("vote").get<std::string>());
    for (const auto& name : doc.at("members")) {
      const auto path = manifest.parent_path() / name.get<std::string>();
      std::ifstream member(path);
      if (!member) throw Error(ErrorKind::MissingFile, path.string());
      model.members.push_back(classifiers::model_from_json(json::parse(member)));
    }
    if (model.members.empty()) throw Error(ErrorKind::BadFormat, "bagging manifest lists no members");
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadFormat, std::string("bagging manifest: ") + e.what());
  }
}

}  // namespace appsent::ensemble
