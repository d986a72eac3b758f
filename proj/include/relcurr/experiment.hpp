#pragma once

// End-to-end runs over synthetic data: generate, corrupt, annotate, train
// under one or more regimes, and score the test split.

#include <span>
#include <vector>

#include "relcurr/config.hpp"
#include "relcurr/evaluation.hpp"
#include "relcurr/trainer.hpp"

namespace relcurr {

struct SplitData {
  Dataset dataset;            // observed labels, latent blocks kept
  std::vector<int> pristine;  // pre-noise labels
};

struct PreparedData {
  SplitData train;
  SplitData test;
};

PreparedData prepare_data(const PipelineConfig& cfg, Exec exec = Exec::Parallel);

/// Runs the synthetic oracle with the configured frames and questions.
std::vector<AnnotationResult> annotate_synthetic(const PipelineConfig& cfg, const Dataset& dataset,
                                                 Exec exec = Exec::Parallel);

/// Scores `model` on `dataset` against `labels`, split by `partition`.
EvalReport evaluate_model(const ClassifierModel& model, const Dataset& dataset, std::span<const int> labels,
                          const PartitionResult& partition, Exec exec = Exec::Parallel);

struct RegimeOutcome {
  Regime regime = Regime::TwoStage;
  TrainResult trained;
  EvalReport test_pristine;
  EvalReport test_observed;
};

struct ExperimentResult {
  PreparedData data;
  std::vector<AnnotationResult> train_annotations;
  std::vector<AnnotationResult> test_annotations;
  PartitionResult train_partition;
  PartitionResult test_partition;
  std::vector<ReliabilityRecord> records;
  std::vector<RegimeOutcome> outcomes;
};

ExperimentResult run_experiment(const PipelineConfig& cfg, std::span<const Regime> regimes,
                                Exec exec = Exec::Parallel);

}  // namespace relcurr
