#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newscomm/corpus.hpp"
#include "newscomm/features.hpp"
#include "newscomm/metrics.hpp"
#include "newscomm/model.hpp"

namespace newscomm {

struct ExperimentConfig {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::Forest;
  std::vector<ModelParams> grid;  // empty: default_grid(algorithm)
  std::size_t folds = 10;
  std::size_t community_floor = 20;
  bool balanced = true;
  unsigned workers = 1;

  std::vector<ModelParams> effective_grid() const;
};

/// One (community pair, feature group[, slice, fraction]) result.
struct ExperimentCell {
  std::string pair_a;  // negative class (lexicographically smaller)
  std::string pair_b;  // positive class
  FeatureGroup group = FeatureGroup::Style;
  std::string train_slice;
  std::string test_slice;
  double fraction = 1.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  RocCurve curve;
  nlohmann::json params = nlohmann::json::object();
  bool skipped = false;
  std::string note;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, a seeded shuffle puts round(train_fraction * n_c) examples
/// in train (at least one on each side). Indices come back sorted.
SplitIndices stratified_split(std::span<const int> y, double train_fraction, std::uint64_t seed);

/// Multi-class form: classes are processed in ascending id order from one
/// seeded generator, so two classes {0, 1} give exactly stratified_split.
SplitIndices stratified_split(std::span<const std::size_t> classes, std::size_t n_classes,
                              double train_fraction, std::uint64_t seed);

/// Splits a corpus stratified by community (sorted labels as class ids).
/// For a two-community corpus this is the split pairwise_matrix uses.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double train_fraction, std::uint64_t seed);

/// Encoders, tuned parameters and fitted classifier for one binary task.
struct BinaryFit {
  Encoders encoders;
  ModelParams params;
  std::vector<double> cv_scores;
  Classifier classifier;
};

/// Fits encoders on `train`, tunes over the config grid, refits.
BinaryFit fit_binary(std::span<const ArticleProfile> train, std::span<const int> y, GroupSet groups,
                     const ExperimentConfig& config, unsigned workers);

/// Packages a fit as a self-contained model that scores raw articles.
TrainedModel make_trained_model(BinaryFit fit, std::string negative_class, std::string positive_class,
                                GroupSet groups, std::size_t n_train);

std::vector<double> score_profiles(const BinaryFit& fit, std::span<const ArticleProfile> profiles,
                                   GroupSet groups);

std::vector<ExperimentCell> pairwise_matrix(const Corpus& corpus, GroupSet groups,
                                            const ExperimentConfig& config, const Resources& res);

/// Same, with article profiles already computed (profiles[i] belongs to corpus[i]).
std::vector<ExperimentCell> pairwise_matrix(const Corpus& corpus, std::span<const ArticleProfile> profiles,
                                            GroupSet groups, const ExperimentConfig& config);

/// Runs the matrix on each popularity-filtered corpus. Fraction 1.0 is
/// always included first. Fractions that leave a community under the
/// floor produce skipped cells instead of failing.
std::vector<ExperimentCell> threshold_sweep(const Corpus& corpus, std::vector<double> fractions,
                                            PopularityMetric metric, GroupSet groups,
                                            const ExperimentConfig& config, const Resources& res);

/// Within-slice rows (train and test inside each slice) followed by
/// cross-slice rows (train on the earliest slice, test on every slice),
/// for every community pair present in all slices.
std::vector<ExperimentCell> drift_run(const std::vector<std::pair<std::string, Corpus>>& slices,
                                      GroupSet groups, const ExperimentConfig& config, const Resources& res);

}  // namespace newscomm
