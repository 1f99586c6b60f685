#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "newscomm/experiment.hpp"

namespace newscomm {

inline constexpr const char* kResultsCsvHeader =
    "pair_a,pair_b,group,train_slice,test_slice,fraction,n_train,n_test,auc,params_json";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

std::string results_csv(std::span<const ExperimentCell> cells);

/// Rows read back from a results CSV (curves are not stored).
struct ResultRow {
  std::string pair_a, pair_b, group, train_slice, test_slice;
  double fraction = 1.0;
  std::size_t n_train = 0, n_test = 0;
  std::optional<double> auc;
  std::string params_json;
};
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

/// SVG with one ROC polyline per cell plus the dashed chance diagonal.
std::string roc_svg(std::span<const ExperimentCell> cells, const std::string& title);

struct ReportFiles {
  std::filesystem::path csv;
  std::vector<std::filesystem::path> svgs;
};

/// Writes results.csv and one SVG per (pair, slices, fraction) panel.
ReportFiles emit_report(std::span<const ExperimentCell> cells, const std::filesystem::path& out_dir);

}  // namespace newscomm
