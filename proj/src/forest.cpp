#include "newscomm/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newscomm/error.hpp"
#include "newscomm/parallel.hpp"
#include "newscomm/random.hpp"

namespace newscomm {

namespace {

// One distinct training row inside a tree's (bootstrap) sample.
struct Sample {
  std::size_t row;
  double count;   // multiplicity, used for min_leaf
  double weight;  // multiplicity * class weight
  int label;
};

double gini(double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0.0) return 0.0;
  const double p0 = w0 / w;
  const double p1 = w1 / w;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& X, const ForestParams& params, std::span<const std::size_t> columns,
              Rng& rng)
      : X_(X), params_(params), columns_(columns), rng_(rng) {
    const auto k = params.max_features
                       ? static_cast<std::size_t>(*params.max_features)
                       : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(columns.size()))));
    candidates_ = std::max<std::size_t>(1, k);
  }

  DecisionTree build(std::vector<Sample> samples) {
    DecisionTree tree;
    grow(tree, samples, 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, std::vector<Sample>& samples, int depth) {
    double w0 = 0, w1 = 0, count = 0;
    for (const Sample& s : samples) {
      (s.label == 1 ? w1 : w0) += s.weight;
      count += s.count;
    }
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const double total = w0 + w1;
    tree.nodes[index].distribution = total > 0 ? std::array<double, 2>{w0 / total, w1 / total}
                                               : std::array<double, 2>{0.5, 0.5};

    const bool depth_reached = params_.max_depth && depth >= *params_.max_depth;
    if (w0 == 0.0 || w1 == 0.0 || depth_reached || count < 2.0 * params_.min_leaf) return index;

    const Split split = best_split(samples, w0, w1);
    if (!split.found) return index;

    std::vector<Sample> left, right;
    for (const Sample& s : samples) {
      (X_.at(s.row, split.feature) <= split.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();

    tree.nodes[index].feature = static_cast<int>(split.feature);
    tree.nodes[index].threshold = split.threshold;
    const int l = grow(tree, left, depth + 1);
    tree.nodes[index].left = l;
    const int r = grow(tree, right, depth + 1);
    tree.nodes[index].right = r;
    return index;
  }

  Split best_split(std::vector<Sample>& samples, double w0, double w1) {
    std::vector<std::size_t> order(columns_.begin(), columns_.end());
    rng_.shuffle(order.begin(), order.end());

    Split best;
    const double parent = (w0 + w1) * gini(w0, w1);
    std::size_t evaluated = 0;
    for (std::size_t feature : order) {
      if (evaluated >= candidates_ && best.found) break;
      ++evaluated;
      evaluate_feature(samples, feature, parent, best);
    }
    return best;
  }

  void evaluate_feature(std::vector<Sample>& samples, std::size_t feature, double parent, Split& best) {
    std::sort(samples.begin(), samples.end(), [&](const Sample& a, const Sample& b) {
      const double va = X_.at(a.row, feature);
      const double vb = X_.at(b.row, feature);
      if (va != vb) return va < vb;
      return a.row < b.row;
    });
    double total0 = 0, total1 = 0, total_count = 0;
    for (const Sample& s : samples) {
      (s.label == 1 ? total1 : total0) += s.weight;
      total_count += s.count;
    }
    double l0 = 0, l1 = 0, lcount = 0;
    const double min_leaf = params_.min_leaf;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const Sample& s = samples[i];
      (s.label == 1 ? l1 : l0) += s.weight;
      lcount += s.count;
      const double here = X_.at(s.row, feature);
      const double next = X_.at(samples[i + 1].row, feature);
      if (here == next) continue;
      if (lcount < min_leaf || total_count - lcount < min_leaf) continue;
      const double r0 = total0 - l0;
      const double r1 = total1 - l1;
      const double decrease = parent - (l0 + l1) * gini(l0, l1) - (r0 + r1) * gini(r0, r1);
      double threshold = here + (next - here) / 2.0;
      if (!(threshold < next)) threshold = here;
      if (is_better(decrease, feature, threshold, best)) {
        best = Split{true, feature, threshold, decrease};
      }
    }
  }

  static bool is_better(double decrease, std::size_t feature, double threshold, const Split& best) {
    if (!best.found) return true;
    const double tol = 1e-12 * std::max(1.0, std::abs(best.decrease));
    if (decrease > best.decrease + tol) return true;
    if (decrease < best.decrease - tol) return false;
    if (feature != best.feature) return feature < best.feature;
    return threshold < best.threshold;
  }

  const FeatureMatrix& X_;
  const ForestParams& params_;
  std::span<const std::size_t> columns_;
  Rng& rng_;
  std::size_t candidates_ = 1;
};

void validate_inputs(const FeatureMatrix& X, std::span<const int> y, std::span<const double> w,
                     std::span<const std::size_t> columns) {
  if (X.rows() != y.size() || y.size() != w.size()) {
    throw UsageError("dimension mismatch: " + std::to_string(X.rows()) + " rows, " +
                     std::to_string(y.size()) + " labels, " + std::to_string(w.size()) + " weights");
  }
  bool has0 = false, has1 = false;
  for (int label : y) {
    if (label != 0 && label != 1) throw UsageError("labels must be 0 or 1");
    has0 = has0 || label == 0;
    has1 = has1 || label == 1;
  }
  if (!has0 || !has1) throw UsageError("training data must contain both classes");
  if (columns.empty()) throw UsageError("no active feature columns");
  for (std::size_t c : columns) {
    if (c >= kFeatureCount) throw UsageError("feature column out of range");
  }
}

}  // namespace

std::uint64_t tree_seed(std::uint64_t seed, std::size_t index) { return mix_seed(seed, index); }

double DecisionTree::predict_positive(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].distribution[1];
}

double ForestModel::predict_proba(std::span<const double> x) const {
  if (x.size() != kFeatureCount) {
    throw UsageError("feature vector must have 98 values, got " + std::to_string(x.size()));
  }
  if (trees.empty()) throw UsageError("forest has no trees");
  double sum = 0.0;
  for (const DecisionTree& t : trees) sum += t.predict_positive(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel train_forest(const FeatureMatrix& X, std::span<const int> y,
                         std::span<const double> sample_weight, const ForestParams& params,
                         std::span<const std::size_t> columns, unsigned workers) {
  validate_inputs(X, y, sample_weight, columns);
  if (params.n_trees < 1) throw UsageError("n_trees must be at least 1");
  if (params.min_leaf < 1) throw UsageError("min_leaf must be at least 1");
  if (params.max_depth && *params.max_depth < 0) throw UsageError("max_depth must be non-negative");
  if (params.max_features && *params.max_features < 1) throw UsageError("max_features must be at least 1");

  ForestModel model;
  model.params = params;
  model.columns.assign(columns.begin(), columns.end());
  std::sort(model.columns.begin(), model.columns.end());
  model.trees.resize(static_cast<std::size_t>(params.n_trees));

  const std::size_t n = X.rows();
  parallel_for(model.trees.size(), workers, [&](std::size_t t) {
    Rng rng(tree_seed(params.seed, t));
    std::vector<double> counts(n, params.bootstrap ? 0.0 : 1.0);
    if (params.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) counts[rng.below(n)] += 1.0;
    }
    std::vector<Sample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] > 0) samples.push_back({i, counts[i], counts[i] * sample_weight[i], y[i]});
    }
    TreeBuilder builder(X, params, model.columns, rng);
    model.trees[t] = builder.build(std::move(samples));
  });
  return model;
}

nlohmann::json to_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", p.max_depth ? nlohmann::json(*p.max_depth) : nlohmann::json(nullptr)},
          {"min_leaf", p.min_leaf},
          {"max_features", p.max_features ? nlohmann::json(*p.max_features) : nlohmann::json("sqrt")},
          {"bootstrap", p.bootstrap},
          {"seed", p.seed}};
}

ForestParams forest_params_from_json(const nlohmann::json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<int>();
  if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<int>();
  p.min_leaf = j.at("min_leaf").get<int>();
  if (j.contains("max_features") && j["max_features"].is_number_integer()) {
    p.max_features = j["max_features"].get<int>();
  }
  p.bootstrap = j.value("bootstrap", true);
  p.seed = j.value("seed", std::uint64_t{0});
  return p;
}

nlohmann::json to_json(const ForestModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const DecisionTree& t : m.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : t.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.distribution[0], n.distribution[1]});
    }
    trees.push_back(std::move(nodes));
  }
  return {{"params", to_json(m.params)}, {"columns", m.columns}, {"trees", std::move(trees)}};
}

ForestModel forest_from_json(const nlohmann::json& j) {
  ForestModel m;
  m.params = forest_params_from_json(j.at("params"));
  m.columns = j.at("columns").get<std::vector<std::size_t>>();
  for (const auto& jt : j.at("trees")) {
    DecisionTree t;
    for (const auto& jn : jt) {
      TreeNode n;
      n.feature = jn.at(0).get<int>();
      n.threshold = jn.at(1).get<double>();
      n.left = jn.at(2).get<int>();
      n.right = jn.at(3).get<int>();
      n.distribution = {jn.at(4).get<double>(), jn.at(5).get<double>()};
      if (n.feature >= static_cast<int>(kFeatureCount)) throw DataError("tree node feature out of range");
      t.nodes.push_back(n);
    }
    const auto size = static_cast<int>(t.nodes.size());
    for (const TreeNode& n : t.nodes) {
      if (!n.is_leaf() && (n.left <= 0 || n.left >= size || n.right <= 0 || n.right >= size)) {
        throw DataError("tree node child index out of range");
      }
    }
    if (t.nodes.empty()) throw DataError("empty tree in model file");
    m.trees.push_back(std::move(t));
  }
  return m;
}

}  // namespace newscomm
