#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcurr/annotator.hpp"

namespace relcurr {

double accuracy(std::span<const int> preds, std::span<const int> labels);

/// Support-weighted mean of per-class F1; a class with P + R = 0 scores 0.
double weighted_f1(std::span<const int> preds, std::span<const int> labels, int num_classes);

/// Fraction with |pred - label| <= tol.
double tolerance_accuracy(std::span<const int> preds, std::span<const int> labels, int tol = 1);

/// Rows are true labels, columns predictions.
std::vector<std::vector<int>> confusion_matrix(std::span<const int> preds, std::span<const int> labels,
                                               int num_classes);

struct MetricBundle {
  std::size_t n = 0;
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  double tolerance_accuracy = 0.0;
  std::vector<std::vector<int>> confusion;
};

MetricBundle compute_metrics(std::span<const int> preds, std::span<const int> labels, int num_classes);

/// Subset metrics; nullopt marks an empty (undefined) cell.
struct EvalReport {
  std::string label_source = "observed";  // "pristine" or "observed"
  std::string config_hash;
  int num_classes = 4;
  MetricBundle full;
  std::optional<MetricBundle> accepted;
  std::optional<MetricBundle> rejected;
};

/// ids, preds and labels are parallel arrays; the partition must cover
/// exactly the ids.
EvalReport evaluate_subsets(std::span<const std::string> ids, std::span<const int> preds, std::span<const int> labels,
                            const PartitionResult& partition, int num_classes);

nlohmann::ordered_json metrics_to_json(const std::optional<MetricBundle>& m);
std::optional<MetricBundle> metrics_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json report_to_json(const EvalReport& r);
EvalReport report_from_json(const nlohmann::ordered_json& j);

/// Terminal table: one row per subset with n, accuracy, ±1 accuracy and
/// weighted F1, and the signed gap of each subset's accuracy to Full.
std::string render_table(const EvalReport& r);

}  // namespace relcurr
