#pragma once

// Label reliability: discrepancy between the human label and the oracle's
// prediction decides curriculum stage, training target and sample weight.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "relcurr/types.hpp"

namespace relcurr {

enum class Reliability { Confident, Ambiguous };
enum class Stage { Stage1, Stage2 };

const char* to_string(Reliability r);
const char* to_string(Stage s);

/// Hard target is the ground-truth class; soft target is the two-point
/// distribution produced for one-level disagreements.
using Target = std::variant<OrdinalLabel, SoftLabel>;

inline bool is_soft(const Target& t) { return std::holds_alternative<SoftLabel>(t); }

/// Target as a dense length-K distribution (one-hot for hard targets).
std::vector<double> target_distribution(const Target& t, int num_classes);

struct WeightConfig {
  double w_confident = 1.0;
  double w_ambiguous = 0.5;

  void validate() const;
};

struct LabelConfig {
  double alpha = 0.7;
  WeightConfig weights;

  void validate() const;
};

struct ReliabilityRecord {
  std::string sample_id;
  OrdinalLabel gt;
  OrdinalLabel pred;
  int discrepancy = 0;
  Reliability reliability = Reliability::Confident;
  Stage stage = Stage::Stage1;
  double weight = 1.0;
  Target target;
};

int discrepancy(OrdinalLabel gt, OrdinalLabel pred);

/// d == 1 is Ambiguous. d == 0 and d >= 2 are Confident: large gaps are read
/// as oracle failures and the human label is kept.
Reliability classify_reliability(int d, int num_classes);

/// Soft [.., alpha at gt, 1 - alpha at pred, ..] when |gt - pred| == 1,
/// otherwise the hard ground truth. alpha must lie in (0, 1).
Target make_soft_label(OrdinalLabel gt, OrdinalLabel pred, double alpha, int num_classes);

/// Same construction, with alpha allowed to reach 1 (limit checks only).
Target make_soft_label_unchecked(OrdinalLabel gt, OrdinalLabel pred, double alpha, int num_classes);

double reliability_weight(Reliability r, const WeightConfig& cfg);

/// One fully populated record for a (gt, pred) pair.
ReliabilityRecord make_record(std::string sample_id, OrdinalLabel gt, OrdinalLabel pred, const LabelConfig& cfg);

/// One record per sample, in dataset order. Every sample must have exactly
/// one annotation; labels in the dataset are never modified.
std::vector<ReliabilityRecord> build_reliability_records(const Dataset& dataset,
                                                         std::span<const AnnotationResult> annotations,
                                                         const LabelConfig& cfg);

/// Checks the record invariants; throws DataIntegrity naming the sample.
void check_record(const ReliabilityRecord& r);

}  // namespace relcurr
