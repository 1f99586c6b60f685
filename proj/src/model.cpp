#include "newscomm/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "newscomm/error.hpp"
#include "newscomm/metrics.hpp"
#include "newscomm/parallel.hpp"
#include "newscomm/random.hpp"

namespace newscomm {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "forest" || name == "rf") return Algorithm::Forest;
  if (name == "linear" || name == "svm") return Algorithm::Linear;
  throw UsageError("unknown algorithm '" + std::string(name) + "' (expected forest or linear)");
}

std::string_view to_string(Algorithm a) { return a == Algorithm::Forest ? "forest" : "linear"; }

Algorithm algorithm_of(const ModelParams& params) {
  return std::holds_alternative<ForestParams>(params) ? Algorithm::Forest : Algorithm::Linear;
}

ModelParams with_seed(ModelParams params, std::uint64_t seed) {
  std::visit([seed](auto& p) { p.seed = seed; }, params);
  return params;
}

nlohmann::json to_json(const ModelParams& params) {
  nlohmann::json j = std::visit([](const auto& p) { return newscomm::to_json(p); }, params);
  j["algorithm"] = to_string(algorithm_of(params));
  return j;
}

ModelParams model_params_from_json(const nlohmann::json& j) {
  if (parse_algorithm(j.at("algorithm").get<std::string>()) == Algorithm::Forest) {
    return forest_params_from_json(j);
  }
  return linear_params_from_json(j);
}

ClassWeights balanced_weights(std::span<const std::string> labels) {
  if (labels.empty()) throw UsageError("balanced_weights: no labels");
  std::map<std::string, double, std::less<>> counts;
  for (const std::string& l : labels) counts[l] += 1.0;
  if (counts.size() < 2) throw UsageError("balanced_weights: need at least two classes");
  ClassWeights out;
  const double n = static_cast<double>(labels.size());
  const double k = static_cast<double>(counts.size());
  for (const auto& [label, c] : counts) out[label] = n / (k * c);
  return out;
}

std::vector<double> sample_weights(std::span<const int> y, bool balanced) {
  std::vector<double> w(y.size(), 1.0);
  if (!balanced) return w;
  std::array<double, 2> counts{};
  for (int label : y) counts[label == 1 ? 1 : 0] += 1.0;
  if (counts[0] == 0 || counts[1] == 0) throw UsageError("balanced weights need both classes");
  const double n = static_cast<double>(y.size());
  const std::array<double, 2> per_class{n / (2.0 * counts[0]), n / (2.0 * counts[1])};
  for (std::size_t i = 0; i < y.size(); ++i) w[i] = per_class[y[i] == 1 ? 1 : 0];
  return w;
}

Classifier train_classifier(const FeatureMatrix& X, std::span<const int> y,
                            std::span<const double> sample_weight, const ModelParams& params,
                            std::span<const std::size_t> columns, unsigned workers) {
  if (const auto* fp = std::get_if<ForestParams>(&params)) {
    return train_forest(X, y, sample_weight, *fp, columns, workers);
  }
  return train_linear(X, y, sample_weight, std::get<LinearParams>(params), columns);
}

double predict_proba(const Classifier& model, std::span<const double> x) {
  return std::visit([&](const auto& m) { return m.predict_proba(x); }, model);
}

nlohmann::json to_json(const Classifier& model) {
  if (const auto* f = std::get_if<ForestModel>(&model)) {
    nlohmann::json j = newscomm::to_json(*f);
    j["kind"] = "forest";
    return j;
  }
  nlohmann::json j = newscomm::to_json(std::get<LinearModel>(model));
  j["kind"] = "linear";
  return j;
}

Classifier classifier_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "forest") return forest_from_json(j);
  if (kind == "linear") return linear_from_json(j);
  throw DataError("unknown classifier kind '" + kind + "'");
}

std::vector<ModelParams> default_grid(Algorithm algorithm) {
  std::vector<ModelParams> grid;
  if (algorithm == Algorithm::Forest) {
    for (int trees : {100, 200}) {
      for (std::optional<int> depth : {std::optional<int>(8), std::optional<int>(16), std::optional<int>()}) {
        for (int leaf : {1, 5}) {
          ForestParams p;
          p.n_trees = trees;
          p.max_depth = depth;
          p.min_leaf = leaf;
          grid.emplace_back(p);
        }
      }
    }
  } else {
    for (double l2 : {1e-4, 1e-3, 1e-2}) {
      LinearParams p;
      p.l2 = l2;
      grid.emplace_back(p);
    }
  }
  return grid;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> y, std::size_t k,
                                                       std::uint64_t seed) {
  if (k < 2) throw UsageError("cross-validation needs at least 2 folds");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i] == 1 ? 1 : 0].push_back(i);
  for (const auto& members : by_class) {
    if (members.size() < k) {
      throw UsageError("a class has only " + std::to_string(members.size()) + " examples, fewer than " +
                       std::to_string(k) + " folds; use a smaller k");
    }
  }
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  for (auto& members : by_class) {
    rng.shuffle(members.begin(), members.end());
    for (std::size_t j = 0; j < members.size(); ++j) folds[j % k].push_back(members[j]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

TuneResult tune(const FeatureMatrix& X, std::span<const int> y, std::span<const ModelParams> grid,
                std::span<const std::size_t> columns, const TuneOptions& options) {
  if (grid.empty()) throw UsageError("hyperparameter grid is empty");
  if (X.rows() != y.size()) throw UsageError("dimension mismatch in tune");
  const auto folds = stratified_folds(y, options.folds, options.seed);
  const std::size_t k = folds.size();

  std::vector<double> fold_auc(grid.size() * k, 0.0);
  const std::size_t tasks = grid.size() * k;
  const unsigned inner_workers = tasks > 1 ? 1 : options.workers;
  parallel_for(tasks, options.workers, [&](std::size_t task) {
    const std::size_t config = task / k;
    const std::size_t fold = task % k;
    std::vector<std::size_t> train_idx;
    for (std::size_t f = 0; f < k; ++f) {
      if (f != fold) train_idx.insert(train_idx.end(), folds[f].begin(), folds[f].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    const std::vector<std::size_t>& valid_idx = folds[fold];

    const FeatureMatrix X_train = X.subset(train_idx);
    std::vector<int> y_train;
    for (std::size_t i : train_idx) y_train.push_back(y[i]);
    const auto w = sample_weights(y_train, options.balanced);
    const Classifier model = train_classifier(X_train, y_train, w, with_seed(grid[config], options.seed),
                                              columns, inner_workers);
    std::vector<double> scores;
    std::vector<int> labels;
    for (std::size_t i : valid_idx) {
      scores.push_back(predict_proba(model, X.row(i)));
      labels.push_back(y[i]);
    }
    fold_auc[task] = auc(scores, labels);
  });

  TuneResult result;
  result.scores.resize(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double sum = 0;
    for (std::size_t f = 0; f < k; ++f) sum += fold_auc[c * k + f];
    result.scores[c] = sum / static_cast<double>(k);
    if (result.scores[c] > result.scores[result.best_index]) result.best_index = c;
  }
  result.best = with_seed(grid[result.best_index], options.seed);
  const auto w = sample_weights(y, options.balanced);
  result.model = train_classifier(X, y, w, result.best, columns, options.workers);
  return result;
}

double TrainedModel::predict_proba(std::span<const double> x) const {
  return newscomm::predict_proba(classifier, x);
}

double TrainedModel::predict_article(const Article& article, const Resources& res) const {
  return predict_proba(extract(article, groups, &encoders, res).values);
}

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json j;
  j["format"] = "newscomm-model";
  j["version"] = kFormatVersion;
  j["schema_version"] = kSchemaVersion;
  j["classes"] = {negative_class, positive_class};
  j["groups"] = groups.to_string();
  j["encoders"] = {{"source", encoders.source.to_json()}, {"entity", encoders.entity.to_json()}};
  j["params"] = newscomm::to_json(params);
  j["classifier"] = newscomm::to_json(classifier);
  j["n_train"] = n_train;
  j["cv_scores"] = cv_scores;
  return j;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "newscomm-model") throw DataError("not a newscomm model file");
    if (j.at("version").get<int>() != kFormatVersion) {
      throw DataError("unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion) throw DataError("feature schema version mismatch");
    TrainedModel m;
    m.negative_class = j.at("classes").at(0).get<std::string>();
    m.positive_class = j.at("classes").at(1).get<std::string>();
    m.groups = parse_groups(j.at("groups").get<std::string>());
    m.encoders.source = LabelEncoder::from_json(j.at("encoders").at("source"));
    m.encoders.entity = LabelEncoder::from_json(j.at("encoders").at("entity"));
    m.params = model_params_from_json(j.at("params"));
    m.classifier = classifier_from_json(j.at("classifier"));
    m.n_train = j.at("n_train").get<std::size_t>();
    m.cv_scores = j.at("cv_scores").get<std::vector<double>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void TrainedModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file " + path.string());
  out << to_json().dump() << '\n';
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed model file " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace newscomm
