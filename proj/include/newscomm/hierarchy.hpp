#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "newscomm/experiment.hpp"
#include "newscomm/model.hpp"

namespace newscomm {

struct CascadeStage {
  std::string name;
  std::set<std::string> positive;
  std::set<std::string> negative;
  GroupSet groups;
  double threshold = 0.5;

  std::set<std::string> reachable() const;
};

/// Ordered binary stages. Stage 0 is the root and covers every community;
/// each branch holding more than one community is handled by exactly one
/// later stage whose two sets together equal that branch.
struct CascadeSpec {
  std::vector<CascadeStage> stages;

  /// Throws DataError describing the first structural problem found.
  void validate() const;
  /// Also checks that the spec's communities match the given ones exactly.
  void validate(const std::set<std::string>& communities) const;

  std::set<std::string> communities() const;
  /// Index of the stage handling `branch`, or nullopt for a leaf.
  std::optional<std::size_t> stage_for(const std::set<std::string>& branch) const;

  nlohmann::json to_json() const;
  static CascadeSpec from_json(const nlohmann::json& j);
  static CascadeSpec load(const std::filesystem::path& path);
};

/// The spec shipped with the library: a mainstream gate followed by the
/// conspiracy and partisan branches.
CascadeSpec default_cascade_spec();

struct RouteStep {
  std::string stage;
  double probability = 0.0;
  bool positive = false;
};

struct CascadePrediction {
  std::string label;
  std::vector<RouteStep> path;
};

struct Cascade {
  CascadeSpec spec;
  std::vector<TrainedModel> models;  // one per stage

  CascadePrediction predict(const ArticleProfile& profile) const;
  CascadePrediction predict(const Article& article, const Resources& res) const;

  void save(const std::filesystem::path& dir) const;
  static Cascade load(const std::filesystem::path& dir);
};

/// Each stage trains on the articles of its reachable set, relabelled
/// positive vs negative, with its own groups and tuned parameters.
Cascade train_cascade(const CascadeSpec& spec, const Corpus& corpus, const ExperimentConfig& config,
                      const Resources& res);

struct CommunityScore {
  std::size_t support = 0;
  std::optional<double> precision;  // absent when nothing was predicted as this community
  std::optional<double> recall;     // absent when the community has no test articles
};

struct StageScore {
  std::string stage;
  std::size_t n = 0;
  std::optional<double> auc;  // absent unless both branches occur among arriving articles
};

struct CascadeEvaluation {
  std::size_t n = 0;
  double accuracy = 0.0;
  std::map<std::string, CommunityScore> communities;
  std::vector<StageScore> stages;
  std::vector<std::string> predictions;  // per test article, corpus order

  nlohmann::json to_json() const;
};

CascadeEvaluation evaluate_cascade(const Cascade& cascade, const Corpus& test, const Resources& res,
                                   unsigned workers = 1);

/// One-vs-rest baseline: a binary model per community over the given
/// groups; the highest probability wins (ties: first label in sorted order).
struct FlatClassifier {
  std::vector<std::string> labels;
  std::vector<TrainedModel> models;

  std::string predict(const ArticleProfile& profile) const;
};

FlatClassifier train_flat(const Corpus& corpus, GroupSet groups, const ExperimentConfig& config,
                          const Resources& res);

/// Fraction of test articles the flat baseline labels correctly.
double flat_accuracy(const FlatClassifier& flat, const Corpus& test, const Resources& res, unsigned workers = 1);

}  // namespace newscomm
