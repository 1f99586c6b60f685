#include "newscomm/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newscomm/error.hpp"
#include "newscomm/random.hpp"

namespace newscomm {

double LinearModel::margin(std::span<const double> x) const {
  if (x.size() != kFeatureCount) {
    throw UsageError("feature vector must have 98 values, got " + std::to_string(x.size()));
  }
  double m = intercept;
  for (std::size_t c : columns) m += weights[c] * (x[c] - mean[c]) / scale[c];
  return m;
}

double LinearModel::predict_proba(std::span<const double> x) const {
  const double m = margin(x);
  return 1.0 / (1.0 + std::exp(-m));
}

LinearModel train_linear(const FeatureMatrix& X, std::span<const int> y,
                         std::span<const double> sample_weight, const LinearParams& params,
                         std::span<const std::size_t> columns) {
  const std::size_t n = X.rows();
  if (n != y.size() || n != sample_weight.size()) throw UsageError("dimension mismatch in linear training");
  if (columns.empty()) throw UsageError("no active feature columns");
  bool has0 = false, has1 = false;
  for (int label : y) {
    has0 = has0 || label == 0;
    has1 = has1 || label == 1;
  }
  if (!has0 || !has1) throw UsageError("training data must contain both classes");
  if (params.epochs < 1 || !(params.learning_rate > 0) || !(params.l2 >= 0)) {
    throw UsageError("invalid linear model parameters");
  }

  LinearModel model;
  model.params = params;
  model.columns.assign(columns.begin(), columns.end());
  std::sort(model.columns.begin(), model.columns.end());
  model.scale.fill(1.0);

  for (std::size_t c : model.columns) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += X.at(i, c);
    const double mean = sum / static_cast<double>(n);
    double var = 0;
    for (std::size_t i = 0; i < n; ++i) var += (X.at(i, c) - mean) * (X.at(i, c) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    model.mean[c] = mean;
    model.scale[c] = sd > 1e-12 ? sd : 1.0;
  }

  std::vector<std::vector<double>> z(n, std::vector<double>(model.columns.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < model.columns.size(); ++k) {
      const std::size_t c = model.columns[k];
      z[i][k] = (X.at(i, c) - model.mean[c]) / model.scale[c];
    }
  }

  std::vector<double> w(model.columns.size(), 0.0);
  double b = 0.0;
  Rng rng(params.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  double t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    for (std::size_t i : order) {
      t += 1;
      const double eta = params.learning_rate / (1.0 + params.learning_rate * params.l2 * t);
      const double sign = y[i] == 1 ? 1.0 : -1.0;
      double m = b;
      for (std::size_t k = 0; k < w.size(); ++k) m += w[k] * z[i][k];
      const double shrink = 1.0 - eta * params.l2;
      for (double& wk : w) wk *= shrink;
      if (sign * m < 1.0) {
        const double step = eta * sample_weight[i] * sign;
        for (std::size_t k = 0; k < w.size(); ++k) w[k] += step * z[i][k];
        b += step;
      }
    }
  }
  for (std::size_t k = 0; k < model.columns.size(); ++k) {
    if (!std::isfinite(w[k])) throw Error("linear training diverged");
    model.weights[model.columns[k]] = w[k];
  }
  model.intercept = b;
  return model;
}

nlohmann::json to_json(const LinearParams& p) {
  return {{"learning_rate", p.learning_rate}, {"l2", p.l2}, {"epochs", p.epochs}, {"seed", p.seed}};
}

LinearParams linear_params_from_json(const nlohmann::json& j) {
  LinearParams p;
  p.learning_rate = j.at("learning_rate").get<double>();
  p.l2 = j.at("l2").get<double>();
  p.epochs = j.at("epochs").get<int>();
  p.seed = j.value("seed", std::uint64_t{0});
  return p;
}

nlohmann::json to_json(const LinearModel& m) {
  return {{"params", to_json(m.params)}, {"columns", m.columns}, {"weights", m.weights},
          {"intercept", m.intercept},    {"mean", m.mean},       {"scale", m.scale}};
}

LinearModel linear_from_json(const nlohmann::json& j) {
  LinearModel m;
  m.params = linear_params_from_json(j.at("params"));
  m.columns = j.at("columns").get<std::vector<std::size_t>>();
  m.weights = j.at("weights").get<std::array<double, kFeatureCount>>();
  m.intercept = j.at("intercept").get<double>();
  m.mean = j.at("mean").get<std::array<double, kFeatureCount>>();
  m.scale = j.at("scale").get<std::array<double, kFeatureCount>>();
  for (std::size_t c : m.columns) {
    if (c >= kFeatureCount) throw DataError("linear model column out of range");
  }
  return m;
}

}  // namespace newscomm
