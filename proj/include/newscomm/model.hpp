#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "newscomm/features.hpp"
#include "newscomm/forest.hpp"
#include "newscomm/linear.hpp"

namespace newscomm {

enum class Algorithm { Forest, Linear };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

using ModelParams = std::variant<ForestParams, LinearParams>;
using Classifier = std::variant<ForestModel, LinearModel>;

Algorithm algorithm_of(const ModelParams& params);
ModelParams with_seed(ModelParams params, std::uint64_t seed);
nlohmann::json to_json(const ModelParams& params);
ModelParams model_params_from_json(const nlohmann::json& j);

/// label -> n_total / (n_classes * n_label). Needs at least two classes.
using ClassWeights = std::map<std::string, double, std::less<>>;
ClassWeights balanced_weights(std::span<const std::string> labels);

/// Per-example weights for 0/1 labels: balanced, or all ones.
std::vector<double> sample_weights(std::span<const int> y, bool balanced);

Classifier train_classifier(const FeatureMatrix& X, std::span<const int> y,
                            std::span<const double> sample_weight, const ModelParams& params,
                            std::span<const std::size_t> columns, unsigned workers = 1);
double predict_proba(const Classifier& model, std::span<const double> x);
nlohmann::json to_json(const Classifier& model);
Classifier classifier_from_json(const nlohmann::json& j);

/// Forest: n_trees {100, 200} x max_depth {8, 16, unlimited} x min_leaf {1, 5}.
/// Linear: l2 {1e-4, 1e-3, 1e-2}.
std::vector<ModelParams> default_grid(Algorithm algorithm);

/// Stratified k folds of example indices from a seeded shuffle of each class.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> y, std::size_t k,
                                                       std::uint64_t seed);

struct TuneOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  bool balanced = true;
  unsigned workers = 1;
};

struct TuneResult {
  ModelParams best;
  std::size_t best_index = 0;
  std::vector<double> scores;  // mean validation AUC per grid entry
  Classifier model;            // refit on all data with `best`
};

/// k-fold cross-validated grid search scored by mean validation AUC; the
/// first config wins ties. Every config is trained with `options.seed`.
TuneResult tune(const FeatureMatrix& X, std::span<const int> y, std::span<const ModelParams> grid,
                std::span<const std::size_t> columns, const TuneOptions& options);

/// A binary community classifier together with everything needed to
/// score a raw article: class labels, feature groups and fitted encoders.
struct TrainedModel {
  static constexpr int kFormatVersion = 1;

  std::string negative_class;
  std::string positive_class;  // the lexicographically larger label
  GroupSet groups;
  Encoders encoders;
  ModelParams params;
  Classifier classifier;
  std::size_t n_train = 0;
  std::vector<double> cv_scores;

  double predict_proba(std::span<const double> x) const;
  double predict_article(const Article& article, const Resources& res) const;

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);
};

}  // namespace newscomm
