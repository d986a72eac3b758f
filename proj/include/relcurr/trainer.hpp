#pragma once

// Training regimes over the reference classifier:
//   Baseline  all samples, hard observed labels, unit weights, one stage.
//   OneStage  all samples with soft targets and reliability weights from the
//             first epoch, one stage, no augmentation.
//   TwoStage  stage 1 on Confident samples only; stage 2 on every sample plus
//             weighted augmentation generated at the start of stage 2.
// Single-stage regimes run epochs_stage1 + epochs_stage2 epochs so every
// regime sees the same number of epochs.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcurr/augmentation.hpp"
#include "relcurr/evaluation.hpp"
#include "relcurr/label_model.hpp"
#include "relcurr/model.hpp"
#include "relcurr/parallel.hpp"

namespace relcurr {

enum class Regime { Baseline, OneStage, TwoStage };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct TrainConfig {
  Regime regime = Regime::TwoStage;
  int epochs_stage1 = 60;
  int epochs_stage2 = 60;
  double learning_rate = 0.05;
  int batch_size = 32;
  double alpha = 0.7;
  WeightConfig weights;
  AugmentConfig augment;
  int hidden = 0;
  std::uint64_t seed = 1;

  void validate() const;
  LabelConfig label_config() const { return {alpha, weights}; }
};

struct TrainExample {
  std::vector<double> features;
  ReliabilityRecord record;
};

using BatchObserver = std::function<void(int stage, int epoch, std::span<const TrainExample* const> batch)>;

struct StageOptions {
  int epochs = 1;
  double learning_rate = 0.05;
  int batch_size = 32;
  std::uint64_t seed = 1;
  /// Distinguishes shuffling streams of different stages.
  std::uint64_t stream = 1;
  BatchObserver on_batch;
};

struct StageHistory {
  std::string name;
  std::size_t n_examples = 0;
  std::vector<double> epoch_losses;  // weighted loss over the whole pool after each epoch
  std::vector<double> batch_losses;  // in memory only
};

/// (1/N) sum_j w_j L_j over every example; N is the pool size.
double pool_loss(const ClassifierModel& model, std::span<const TrainExample> examples);

/// Mini-batch SGD on the weighted batch loss. Batches are drawn from a
/// permutation seeded by (seed, stream, epoch). Throws TrainingDiverged on a
/// non-finite loss.
StageHistory train_stage(ClassifierModel& model, std::span<const TrainExample> examples, const StageOptions& opts);

/// Hard observed-label records with unit weights; what Baseline trains on.
std::vector<ReliabilityRecord> baseline_records(const Dataset& dataset);

/// Hard record for an augmented sample of class c with weight w_aug.
ReliabilityRecord augmented_record(const std::string& id, int cls, int num_classes, double weight);

struct TrainReport {
  Regime regime = Regime::TwoStage;
  std::vector<StageHistory> stages;
  std::size_t n_stage1 = 0;
  std::size_t n_stage2 = 0;
  std::size_t n_augmented = 0;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
  std::optional<MetricBundle> train_metrics;  // against the observed training labels
};

struct TrainResult {
  ClassifierModel model;
  TrainReport report;
};

/// Trains under cfg.regime. records must cover the dataset (ignored by
/// Baseline). An empty Stage 1 pool under TwoStage degrades to OneStage and
/// records a warning.
TrainResult train_curriculum(const Dataset& dataset, std::span<const ReliabilityRecord> records,
                             const TrainConfig& cfg, const BatchObserver& on_batch = {}, Exec exec = Exec::Parallel);

/// Report document; `config` is the snapshot of the producing configuration.
nlohmann::ordered_json train_report_to_json(const TrainReport& r, const nlohmann::ordered_json& config,
                                            const std::string& config_hash);

}  // namespace relcurr
