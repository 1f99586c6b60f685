#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "newscomm/error.hpp"
#include "newscomm/experiment.hpp"
#include "newscomm/metrics.hpp"
#include "newscomm/random.hpp"
#include "newscomm/report.hpp"
#include "test_util.hpp"

using namespace newscomm;
using newscomm::testing::fast_config;
using newscomm::testing::small_corpus;

namespace {

double pairwise_oracle(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1;
      wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("newscomm_eval_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Auc, WorkedExamples) {
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{1, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.4, 0.4, 0.4}, std::vector<int>{1, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.8, 0.3, 0.5, 0.1}, std::vector<int>{1, 1, 0, 0}), 0.75);
}

TEST(Auc, NeedsBothClasses) {
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), UsageError);
  EXPECT_THROW(roc_curve(std::vector<double>{0.1}, std::vector<int>{0}), UsageError);
  EXPECT_THROW(auc(std::vector<double>{0.1}, std::vector<int>{1, 0}), UsageError);
}

TEST(Auc, MatchesPairwiseOracleOnRandomInstances) {
  Rng rng(2024);
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t n = 2 + rng.below(49);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Coarse scores force plenty of ties.
      s[i] = instance % 2 ? static_cast<double>(rng.below(6)) / 5.0 : rng.uniform();
      y[i] = static_cast<int>(rng.below(2));
    }
    y[0] = 0;
    y[1] = 1;
    const double oracle = pairwise_oracle(s, y);
    EXPECT_NEAR(roc_curve(s, y).auc, oracle, 1e-12);
    EXPECT_NEAR(auc(s, y), oracle, 1e-12);
  }
}

TEST(Auc, NegationAndMonotoneTransforms) {
  Rng rng(5);
  for (int instance = 0; instance < 100; ++instance) {
    std::vector<double> s(30), neg(30), warped(30);
    std::vector<int> y(30), swapped(30);
    for (std::size_t i = 0; i < 30; ++i) {
      s[i] = static_cast<double>(rng.below(10));
      neg[i] = -s[i];
      warped[i] = std::exp(3.0 * s[i]) + 7.0;
      y[i] = static_cast<int>(rng.below(2));
      swapped[i] = 1 - y[i];
    }
    y[0] = 0;
    y[1] = 1;
    swapped[0] = 1;
    swapped[1] = 0;
    EXPECT_NEAR(auc(s, y) + auc(neg, y), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(auc(warped, y), auc(s, y));
    EXPECT_NEAR(auc(s, swapped), 1.0 - auc(s, y), 1e-12);
  }
}

TEST(RocCurve, PointShapes) {
  const RocCurve two = roc_curve(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0});
  EXPECT_EQ(two.points, (std::vector<RocPoint>{{0, 0}, {0, 1}, {1, 1}}));

  const RocCurve perfect = roc_curve(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<int>{1, 1, 0, 0});
  EXPECT_NE(std::find(perfect.points.begin(), perfect.points.end(), RocPoint{0, 1}), perfect.points.end());

  Rng rng(8);
  std::vector<double> s(40);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    s[i] = static_cast<double>(rng.below(7));
    y[i] = static_cast<int>(i % 2);
  }
  const RocCurve c = roc_curve(s, y);
  EXPECT_EQ(c.points.front(), (RocPoint{0, 0}));
  EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    EXPECT_GE(c.points[i].fpr, c.points[i - 1].fpr);
    EXPECT_GE(c.points[i].tpr, c.points[i - 1].tpr);
  }
}

TEST(AucBand, Rubric) {
  EXPECT_EQ(auc_band(0.95), "excellent");
  EXPECT_EQ(auc_band(0.85), "good");
  EXPECT_EQ(auc_band(0.75), "fair");
  EXPECT_EQ(auc_band(0.65), "poor");
  EXPECT_EQ(auc_band(0.55), "fail");
}

TEST(StratifiedSplit, ProportionsAndDeterminism) {
  std::vector<int> y(100, 0);
  for (std::size_t i = 0; i < 20; ++i) y[i] = 1;
  const SplitIndices s = stratified_split(y, 0.7, 11);
  EXPECT_EQ(s.train.size(), 70u);
  EXPECT_EQ(s.test.size(), 30u);
  std::size_t pos = 0;
  for (std::size_t i : s.train) pos += y[i];
  EXPECT_EQ(pos, 14u);
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  const SplitIndices again = stratified_split(y, 0.7, 11);
  EXPECT_EQ(s.train, again.train);

  std::vector<std::size_t> classes(y.begin(), y.end());
  EXPECT_EQ(stratified_split(classes, 2, 0.7, 11).test, s.test);
}

TEST(PairwiseMatrix, CellCountAndOrder) {
  const Corpus corpus = small_corpus(3, 30);
  const GroupSet groups{FeatureGroup::Complexity, FeatureGroup::Source};
  const auto cells = pairwise_matrix(corpus, groups, fast_config(), *Resources::builtin());
  ASSERT_EQ(cells.size(), 6u);
  EXPECT_EQ(cells[0].pair_a, "a");
  EXPECT_EQ(cells[0].pair_b, "b");
  EXPECT_EQ(cells[0].group, FeatureGroup::Complexity);
  EXPECT_EQ(cells[1].group, FeatureGroup::Source);
  EXPECT_EQ(cells[5].pair_a, "b");
  EXPECT_EQ(cells[5].pair_b, "c");
  for (const auto& c : cells) {
    EXPECT_EQ(c.n_train, 42u);
    EXPECT_EQ(c.n_test, 18u);
    EXPECT_TRUE(c.params.contains("cv_auc"));
    if (c.group == FeatureGroup::Source) EXPECT_GE(c.curve.auc, 0.99);
  }
}

TEST(PairwiseMatrix, DeterministicCsvAcrossWorkers) {
  const Corpus corpus = small_corpus(3, 30);
  const GroupSet groups{FeatureGroup::Style, FeatureGroup::Source};
  ExperimentConfig one = fast_config(4);
  ExperimentConfig many = one;
  many.workers = 4;
  const auto a = pairwise_matrix(corpus, groups, one, *Resources::builtin());
  const auto b = pairwise_matrix(corpus, groups, many, *Resources::builtin());
  EXPECT_EQ(results_csv(a), results_csv(b));
}

TEST(PairwiseMatrix, FloorAndCommunityCount) {
  const Corpus corpus = small_corpus(2, 12);
  ExperimentConfig c = fast_config();
  c.community_floor = 20;
  try {
    pairwise_matrix(corpus, GroupSet{FeatureGroup::Source}, c, *Resources::builtin());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos) << e.what();
  }
  EXPECT_THROW(pairwise_matrix(small_corpus(1, 30), GroupSet{FeatureGroup::Source}, fast_config(),
                               *Resources::builtin()),
               DataError);
}

TEST(ThresholdSweep, BaselineMatchesMatrixAndSmallFractionsSkip) {
  const Corpus corpus = small_corpus(2, 30);
  const GroupSet groups{FeatureGroup::Source};
  const ExperimentConfig config = fast_config(2);
  const auto& res = *Resources::builtin();
  const auto base = pairwise_matrix(corpus, groups, config, res);
  const auto sweep = threshold_sweep(corpus, {1.0}, PopularityMetric::Score, groups, config, res);
  EXPECT_EQ(results_csv(base), results_csv(sweep));

  const auto with_small = threshold_sweep(corpus, {0.1}, PopularityMetric::Score, groups, config, res);
  ASSERT_EQ(with_small.size(), 2u);
  EXPECT_EQ(with_small[0].fraction, 1.0);
  EXPECT_FALSE(with_small[0].skipped);
  EXPECT_TRUE(with_small[1].skipped);
  EXPECT_EQ(with_small[1].fraction, 0.1);

  EXPECT_THROW(threshold_sweep(corpus, {0.0}, PopularityMetric::Score, groups, config, res), UsageError);
  EXPECT_THROW(threshold_sweep(corpus, {1.5}, PopularityMetric::Score, groups, config, res), UsageError);
}

TEST(DriftRun, RowCounts) {
  const auto& res = *Resources::builtin();
  std::vector<std::pair<std::string, Corpus>> slices;
  for (std::uint64_t k = 0; k < 3; ++k) slices.emplace_back("s" + std::to_string(k), small_corpus(2, 30, 10 + k));
  const auto rows = drift_run(slices, GroupSet{FeatureGroup::Source}, fast_config(), res);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(rows[k].train_slice, rows[k].test_slice);
    EXPECT_EQ(rows[k].params.at("protocol"), "within");
    EXPECT_EQ(rows[3 + k].train_slice, "s0");
    EXPECT_EQ(rows[3 + k].test_slice, "s" + std::to_string(k));
    EXPECT_EQ(rows[3 + k].params.at("protocol"), "cross");
  }
  EXPECT_THROW(drift_run({slices[0]}, GroupSet{FeatureGroup::Source}, fast_config(), res), UsageError);
}

TEST(Report, CsvRoundTripAndSvgCounts) {
  const Corpus corpus = small_corpus(3, 30);
  const GroupSet groups{FeatureGroup::Complexity, FeatureGroup::Entity, FeatureGroup::Source};
  const auto cells = pairwise_matrix(corpus, groups, fast_config(), *Resources::builtin());
  const auto dir = fresh_dir("report");
  const ReportFiles files = emit_report(cells, dir);
  ASSERT_EQ(files.svgs.size(), 3u);

  const auto rows = read_results_csv(files.csv);
  ASSERT_EQ(rows.size(), cells.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].auc.has_value());
    EXPECT_EQ(*rows[i].auc, cells[i].curve.auc);
    EXPECT_EQ(rows[i].pair_a, cells[i].pair_a);
    EXPECT_EQ(nlohmann::json::parse(rows[i].params_json), cells[i].params);
  }
  for (const auto& svg_path : files.svgs) {
    std::ifstream in(svg_path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(count_of(text.str(), "class=\"roc\""), 3u);
    EXPECT_EQ(count_of(text.str(), "class=\"chance\""), 1u);
    EXPECT_NE(text.str().find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(text.str().find("source (AUC="), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Report, SingleCell) {
  ExperimentCell cell;
  cell.pair_a = "a";
  cell.pair_b = "b";
  cell.group = FeatureGroup::Bias;
  cell.curve = roc_curve(std::vector<double>{0.8, 0.3, 0.5, 0.1}, std::vector<int>{1, 1, 0, 0});
  const std::string svg = roc_svg(std::span<const ExperimentCell>(&cell, 1), "a vs b");
  EXPECT_EQ(count_of(svg, "<polyline"), 1u);
  EXPECT_EQ(count_of(svg, "class=\"chance\""), 1u);
  EXPECT_NE(svg.find("bias (AUC=0.75)"), std::string::npos);

  const std::string csv = results_csv(std::span<const ExperimentCell>(&cell, 1));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kResultsCsvHeader);
  EXPECT_EQ(count_of(csv, "\n"), 2u);
}

TEST(Report, UnwritableDirectory) {
  ExperimentCell cell;
  cell.pair_a = "a";
  cell.pair_b = "b";
  cell.curve = roc_curve(std::vector<double>{0.9, 0.1}, std::vector<int>{1, 0});
  const auto file = std::filesystem::temp_directory_path() / "newscomm_eval_blocker";
  std::ofstream(file) << "x";
  EXPECT_THROW(emit_report(std::span<const ExperimentCell>(&cell, 1), file / "sub"), DataError);
  std::filesystem::remove(file);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 0.75, 1e-300, 12345.678}) EXPECT_EQ(std::stod(format_double(v)), v);
}
