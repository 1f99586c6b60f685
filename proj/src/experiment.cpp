#include "newscomm/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "newscomm/error.hpp"
#include "newscomm/parallel.hpp"
#include "newscomm/random.hpp"

namespace newscomm {

namespace {

template <class T>
std::vector<T> gather(std::span<const T> items, std::span<const std::size_t> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(items[i]);
  return out;
}

void check_floor(const Corpus& corpus, std::size_t floor, const std::string& where) {
  for (const std::string& c : corpus.communities()) {
    const std::size_t n = corpus.count(c);
    if (n < floor) {
      throw DataError(where + "community '" + c + "' has " + std::to_string(n) +
                      " articles, below the floor of " + std::to_string(floor));
    }
  }
}

std::vector<std::pair<std::string, std::string>> sorted_pairs(const std::set<std::string>& communities) {
  std::vector<std::string> names(communities.begin(), communities.end());
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) pairs.emplace_back(names[i], names[j]);
  }
  return pairs;
}

// Articles of one pair, labelled 1 for the lexicographically larger community.
struct PairData {
  std::vector<ArticleProfile> profiles;
  std::vector<int> y;
  SplitIndices split;
};

PairData pair_data(const Corpus& corpus, std::span<const ArticleProfile> profiles, const std::string& a,
                   const std::string& b, const ExperimentConfig& config) {
  PairData d;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string& c = corpus[i].community;
    if (c != a && c != b) continue;
    d.profiles.push_back(profiles[i]);
    d.y.push_back(c == b ? 1 : 0);
  }
  d.split = stratified_split(d.y, config.train_fraction, config.seed);
  return d;
}

ExperimentCell evaluate_cell(const PairData& train_data, const PairData& test_data, const BinaryFit& fit,
                             const std::string& a, const std::string& b, FeatureGroup group) {
  const auto test_profiles = gather<ArticleProfile>(test_data.profiles, test_data.split.test);
  const auto test_y = gather<int>(test_data.y, test_data.split.test);
  ExperimentCell cell;
  cell.pair_a = a;
  cell.pair_b = b;
  cell.group = group;
  cell.n_train = train_data.split.train.size();
  cell.n_test = test_y.size();
  cell.curve = roc_curve(score_profiles(fit, test_profiles, GroupSet{group}), test_y);
  cell.params = to_json(fit.params);
  cell.params["cv_auc"] = fit.cv_scores;
  return cell;
}

BinaryFit fit_pair(const PairData& d, FeatureGroup group, const ExperimentConfig& config, unsigned workers) {
  const auto train_profiles = gather<ArticleProfile>(d.profiles, d.split.train);
  const auto train_y = gather<int>(d.y, d.split.train);
  return fit_binary(train_profiles, train_y, GroupSet{group}, config, workers);
}

}  // namespace

std::vector<ModelParams> ExperimentConfig::effective_grid() const {
  if (grid.empty()) return default_grid(algorithm);
  for (const ModelParams& p : grid) {
    if (algorithm_of(p) != algorithm) throw UsageError("grid entry does not match the configured algorithm");
  }
  return grid;
}

SplitIndices stratified_split(std::span<const int> y, double train_fraction, std::uint64_t seed) {
  std::vector<std::size_t> classes(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) classes[i] = y[i] == 1 ? 1 : 0;
  return stratified_split(classes, 2, train_fraction, seed);
}

SplitIndices stratified_split(std::span<const std::size_t> classes, std::size_t n_classes,
                              double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw UsageError("train fraction must be in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] >= n_classes) throw UsageError("class id out of range");
    by_class[classes[i]].push_back(i);
  }
  Rng rng(mix_seed(seed, 0x5EED5EEDULL));
  SplitIndices out;
  for (auto& members : by_class) {
    if (members.size() < 2) throw UsageError("each class needs at least two examples to split");
    rng.shuffle(members.begin(), members.end());
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
    out.train.insert(out.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.insert(out.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  const std::vector<std::string> names(corpus.communities().begin(), corpus.communities().end());
  std::vector<std::size_t> classes;
  classes.reserve(corpus.size());
  for (const Article& a : corpus) {
    classes.push_back(static_cast<std::size_t>(std::lower_bound(names.begin(), names.end(), a.community) -
                                               names.begin()));
  }
  const SplitIndices split = stratified_split(classes, names.size(), train_fraction, seed);
  auto take = [&](const std::vector<std::size_t>& idx) {
    std::vector<Article> articles;
    articles.reserve(idx.size());
    for (std::size_t i : idx) articles.push_back(corpus[i]);
    return Corpus(std::move(articles));
  };
  return {take(split.train), take(split.test)};
}

BinaryFit fit_binary(std::span<const ArticleProfile> train, std::span<const int> y, GroupSet groups,
                     const ExperimentConfig& config, unsigned workers) {
  BinaryFit fit;
  fit.encoders = fit_encoders(train);
  const FeatureMatrix X = assemble_matrix(train, groups, &fit.encoders);
  const auto grid = config.effective_grid();
  TuneOptions options;
  options.folds = config.folds;
  options.seed = config.seed;
  options.balanced = config.balanced;
  options.workers = workers;
  TuneResult tuned = tune(X, y, grid, groups.columns(), options);
  fit.params = tuned.best;
  fit.cv_scores = std::move(tuned.scores);
  fit.classifier = std::move(tuned.model);
  return fit;
}

TrainedModel make_trained_model(BinaryFit fit, std::string negative_class, std::string positive_class,
                                GroupSet groups, std::size_t n_train) {
  TrainedModel m;
  m.negative_class = std::move(negative_class);
  m.positive_class = std::move(positive_class);
  m.groups = groups;
  m.encoders = std::move(fit.encoders);
  m.params = std::move(fit.params);
  m.classifier = std::move(fit.classifier);
  m.n_train = n_train;
  m.cv_scores = std::move(fit.cv_scores);
  return m;
}

std::vector<double> score_profiles(const BinaryFit& fit, std::span<const ArticleProfile> profiles,
                                   GroupSet groups) {
  std::vector<double> scores;
  scores.reserve(profiles.size());
  for (const ArticleProfile& p : profiles) {
    scores.push_back(predict_proba(fit.classifier, assemble(p, groups, &fit.encoders).values));
  }
  return scores;
}

std::vector<ExperimentCell> pairwise_matrix(const Corpus& corpus, GroupSet groups,
                                            const ExperimentConfig& config, const Resources& res) {
  const auto profiles = profile_corpus(corpus, res, config.workers);
  return pairwise_matrix(corpus, profiles, groups, config);
}

std::vector<ExperimentCell> pairwise_matrix(const Corpus& corpus, std::span<const ArticleProfile> profiles,
                                            GroupSet groups, const ExperimentConfig& config) {
  if (profiles.size() != corpus.size()) throw UsageError("profiles do not match corpus");
  if (corpus.communities().size() < 2) throw DataError("pairwise matrix needs at least two communities");
  if (groups.empty()) throw UsageError("no feature groups selected");
  check_floor(corpus, config.community_floor, "");

  const auto pairs = sorted_pairs(corpus.communities());
  std::vector<PairData> data;
  data.reserve(pairs.size());
  for (const auto& [a, b] : pairs) data.push_back(pair_data(corpus, profiles, a, b, config));

  const auto group_list = groups.groups();
  const std::size_t tasks = pairs.size() * group_list.size();
  const unsigned inner = tasks > 1 ? 1 : config.workers;
  std::vector<ExperimentCell> cells(tasks);
  parallel_for(tasks, config.workers, [&](std::size_t t) {
    const std::size_t p = t / group_list.size();
    const FeatureGroup g = group_list[t % group_list.size()];
    const BinaryFit fit = fit_pair(data[p], g, config, inner);
    cells[t] = evaluate_cell(data[p], data[p], fit, pairs[p].first, pairs[p].second, g);
  });
  return cells;
}

std::vector<ExperimentCell> threshold_sweep(const Corpus& corpus, std::vector<double> fractions,
                                            PopularityMetric metric, GroupSet groups,
                                            const ExperimentConfig& config, const Resources& res) {
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw UsageError("sweep fractions must lie in (0, 1]");
  }
  std::erase(fractions, 1.0);
  fractions.insert(fractions.begin(), 1.0);

  const auto profiles = profile_corpus(corpus, res, config.workers);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.size(); ++i) index.emplace(corpus[i].id, i);

  std::vector<ExperimentCell> out;
  for (double fraction : fractions) {
    const Corpus filtered = filter_top_fraction(corpus, metric, fraction);
    std::vector<ArticleProfile> sub;
    sub.reserve(filtered.size());
    for (const Article& a : filtered) sub.push_back(profiles[index.at(a.id)]);

    std::string reason;
    for (const std::string& c : corpus.communities()) {
      const std::size_t n = filtered.count(c);
      if (n < config.community_floor) {
        reason = "community '" + c + "' has " + std::to_string(n) + " articles, below the floor of " +
                 std::to_string(config.community_floor);
        break;
      }
    }
    if (!reason.empty()) {
      for (const auto& [a, b] : sorted_pairs(corpus.communities())) {
        for (FeatureGroup g : groups.groups()) {
          ExperimentCell cell;
          cell.pair_a = a;
          cell.pair_b = b;
          cell.group = g;
          cell.fraction = fraction;
          cell.skipped = true;
          cell.note = reason;
          cell.params = {{"skipped", reason}};
          out.push_back(std::move(cell));
        }
      }
      continue;
    }
    for (ExperimentCell& cell : pairwise_matrix(filtered, sub, groups, config)) {
      cell.fraction = fraction;
      out.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<ExperimentCell> drift_run(const std::vector<std::pair<std::string, Corpus>>& slices,
                                      GroupSet groups, const ExperimentConfig& config, const Resources& res) {
  if (slices.size() < 2) throw UsageError("drift needs at least two slices");
  if (groups.empty()) throw UsageError("no feature groups selected");
  std::set<std::string> common = slices.front().second.communities();
  for (const auto& [label, corpus] : slices) {
    std::set<std::string> keep;
    for (const std::string& c : common) {
      if (corpus.communities().contains(c)) keep.insert(c);
    }
    common = std::move(keep);
  }
  if (common.size() < 2) throw DataError("slices share fewer than two communities");

  std::vector<std::vector<PairData>> data(slices.size());  // [slice][pair]
  const auto pairs = sorted_pairs(common);
  for (std::size_t s = 0; s < slices.size(); ++s) {
    const Corpus restricted = slices[s].second.restrict_to(common);
    check_floor(restricted, config.community_floor, "slice '" + slices[s].first + "': ");
    const auto profiles = profile_corpus(restricted, res, config.workers);
    for (const auto& [a, b] : pairs) data[s].push_back(pair_data(restricted, profiles, a, b, config));
  }

  const auto group_list = groups.groups();
  const std::size_t per_slice = pairs.size() * group_list.size();
  const std::size_t tasks = slices.size() * per_slice;
  const unsigned inner = tasks > 1 ? 1 : config.workers;
  std::vector<BinaryFit> fits(tasks);
  parallel_for(tasks, config.workers, [&](std::size_t t) {
    const std::size_t s = t / per_slice;
    const std::size_t p = (t % per_slice) / group_list.size();
    const FeatureGroup g = group_list[t % group_list.size()];
    fits[t] = fit_pair(data[s][p], g, config, inner);
  });

  std::vector<ExperimentCell> out;
  auto emit = [&](std::size_t train_s, std::size_t test_s, std::size_t p, std::size_t gi, const char* protocol) {
    const BinaryFit& fit = fits[train_s * per_slice + p * group_list.size() + gi];
    ExperimentCell cell = evaluate_cell(data[train_s][p], data[test_s][p], fit, pairs[p].first,
                                        pairs[p].second, group_list[gi]);
    cell.train_slice = slices[train_s].first;
    cell.test_slice = slices[test_s].first;
    cell.params["protocol"] = protocol;
    out.push_back(std::move(cell));
  };
  for (std::size_t s = 0; s < slices.size(); ++s) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t gi = 0; gi < group_list.size(); ++gi) emit(s, s, p, gi, "within");
    }
  }
  for (std::size_t s = 0; s < slices.size(); ++s) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      for (std::size_t gi = 0; gi < group_list.size(); ++gi) emit(0, s, p, gi, "cross");
    }
  }
  return out;
}

}  // namespace newscomm
