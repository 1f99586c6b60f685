#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "newscomm/features.hpp"

namespace newscomm {

struct ForestParams {
  int n_trees = 100;
  std::optional<int> max_depth;  // nullopt: unlimited
  int min_leaf = 1;
  std::optional<int> max_features;  // nullopt: floor(sqrt(active columns))
  bool bootstrap = true;
  std::uint64_t seed = 0;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

/// Preorder node. Leaves have feature == -1 and carry the class-weighted
/// class distribution {negative, positive}.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::array<double, 2> distribution{0.5, 0.5};

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict_positive(std::span<const double> x) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
  ForestParams params;
  std::vector<std::size_t> columns;  // active feature columns
  std::vector<DecisionTree> trees;

  /// Mean of the trees' positive-class leaf probabilities.
  double predict_proba(std::span<const double> x) const;
  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

/// Trains a binary random forest. y holds 0/1 labels; sample_weight the
/// per-example class weights. At each node floor(sqrt(|columns|)) (or
/// params.max_features) candidate columns are drawn without replacement from the tree's own
/// generator; if none of them admits a split the remaining columns are
/// tried in the same random order. Splits maximise the weighted Gini
/// decrease, ties going to the lowest column then the lowest threshold.
/// Output is independent of `workers`.
ForestModel train_forest(const FeatureMatrix& X, std::span<const int> y,
                         std::span<const double> sample_weight, const ForestParams& params,
                         std::span<const std::size_t> columns, unsigned workers = 1);

/// Seed of tree `index` under master seed `seed`.
std::uint64_t tree_seed(std::uint64_t seed, std::size_t index);

nlohmann::json to_json(const ForestParams& p);
ForestParams forest_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ForestModel& m);
ForestModel forest_from_json(const nlohmann::json& j);

}  // namespace newscomm
