#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace newscomm {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1), monotone in both axes
  double auc = 0.0;
};

/// Mann-Whitney AUC: the fraction of (positive, negative) pairs where the
/// positive scores higher, ties counting one half. Labels are 1 for the
/// positive class and 0 otherwise. Throws UsageError when a class is absent.
double auc(std::span<const double> scores, std::span<const int> labels);

/// ROC points from a threshold sweep over the distinct scores, highest
/// first; `auc` is the trapezoidal area under the points.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

/// Rule-of-thumb band: excellent, good, fair, poor, fail (below 0.6).
std::string_view auc_band(double auc);

}  // namespace newscomm
