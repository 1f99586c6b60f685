#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "newscomm/features.hpp"

namespace newscomm {

struct LinearParams {
  double learning_rate = 0.1;
  double l2 = 1e-3;
  int epochs = 20;
  std::uint64_t seed = 0;

  friend bool operator==(const LinearParams&, const LinearParams&) = default;
};

/// Class-weighted hinge loss with L2 penalty, trained by stochastic
/// subgradient descent on internally standardized features.
struct LinearModel {
  LinearParams params;
  std::vector<std::size_t> columns;
  std::array<double, kFeatureCount> weights{};  // in standardized space
  double intercept = 0.0;
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> scale{};  // 1 for constant columns

  double margin(std::span<const double> x) const;
  /// Logistic squashing of the margin.
  double predict_proba(std::span<const double> x) const;
  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

LinearModel train_linear(const FeatureMatrix& X, std::span<const int> y,
                         std::span<const double> sample_weight, const LinearParams& params,
                         std::span<const std::size_t> columns);

nlohmann::json to_json(const LinearParams& p);
LinearParams linear_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LinearModel& m);
LinearModel linear_from_json(const nlohmann::json& j);

}  // namespace newscomm
