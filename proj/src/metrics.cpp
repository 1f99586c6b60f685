#include "newscomm/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "newscomm/error.hpp"

namespace newscomm {

namespace {

struct ClassCounts {
  double positives = 0;
  double negatives = 0;
};

ClassCounts check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw UsageError("scores and labels differ in length (" + std::to_string(scores.size()) +
                     " vs " + std::to_string(labels.size()) + ")");
  }
  ClassCounts c;
  for (int y : labels) {
    if (y == 1) c.positives += 1;
    else c.negatives += 1;
  }
  if (c.positives == 0 || c.negatives == 0) {
    throw UsageError("AUC needs both classes present");
  }
  return c;
}

std::vector<std::size_t> order_descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double auc(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts c = check_inputs(scores, labels);
  // Walk tie blocks from the top: every positive in a block beats the
  // negatives below it and ties half of the negatives inside it.
  const auto order = order_descending(scores);
  double negatives_above = 0;
  double wins = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double block_pos = 0, block_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1) block_pos += 1;
      else block_neg += 1;
      ++j;
    }
    wins += block_pos * (c.negatives - negatives_above - block_neg) + 0.5 * block_pos * block_neg;
    negatives_above += block_neg;
    i = j;
  }
  return wins / (c.positives * c.negatives);
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const ClassCounts c = check_inputs(scores, labels);
  const auto order = order_descending(scores);
  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  double tp = 0, fp = 0;
  double area = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double block_pos = 0, block_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1) block_pos += 1;
      else block_neg += 1;
      ++j;
    }
    // Trapezoid in count space; normalized once at the end.
    area += block_neg * (tp + 0.5 * block_pos);
    tp += block_pos;
    fp += block_neg;
    curve.points.push_back({fp / c.negatives, tp / c.positives});
    i = j;
  }
  curve.points.back() = {1.0, 1.0};
  curve.auc = area / (c.positives * c.negatives);
  return curve;
}

std::string_view auc_band(double value) {
  if (value >= 0.9) return "excellent";
  if (value >= 0.8) return "good";
  if (value >= 0.7) return "fair";
  if (value >= 0.6) return "poor";
  return "fail";
}

}  // namespace newscomm
