#pragma once

// Annotation oracles (synthetic and remote), the annotation cache, and the
// Accepted/Rejected split by oracle agreement.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "relcurr/datasetgen.hpp"
#include "relcurr/parallel.hpp"
#include "relcurr/questionnaire.hpp"
#include "relcurr/rng.hpp"
#include "relcurr/types.hpp"

namespace relcurr {

struct SyntheticOracleConfig {
  /// Probability of flipping each yes/no answer after it is computed.
  double answer_noise = 0.0;

  void validate() const;
};

/// Rule-based stand-in for a questionnaire-driven annotator. Each question is
/// answered from one channel read at the F sampled frames only, against a
/// threshold in level coordinates taken from the generator's channel model.
/// The predicted level is floor(K * engaged / answered), clamped to [0, K-1],
/// where engaged counts positive-yes and negative-no answers.
class SyntheticAnnotator {
 public:
  explicit SyntheticAnnotator(GeneratorConfig generator, SyntheticOracleConfig cfg = {});

  AnnotationResult annotate(const LabeledSample& sample, const Questionnaire& q, int frames, Rng& rng) const;

  /// Sample i uses a generator derived from (seed, hash(sample id)).
  std::vector<AnnotationResult> annotate_all(const Dataset& dataset, const Questionnaire& q, int frames,
                                             std::uint64_t seed, Exec exec = Exec::Parallel) const;

  const GeneratorConfig& generator() const { return generator_; }

 private:
  GeneratorConfig generator_;
  SyntheticOracleConfig cfg_;
};

/// Free-function form of SyntheticAnnotator::annotate.
AnnotationResult synthetic_annotate(const LabeledSample& sample, const GeneratorConfig& generator,
                                    const Questionnaire& q, int frames, Rng& rng,
                                    const SyntheticOracleConfig& cfg = {});

struct PartitionResult {
  std::vector<std::string> accepted;  // dataset order
  std::vector<std::string> rejected;  // dataset order

  friend bool operator==(const PartitionResult&, const PartitionResult&) = default;
};

/// Accepted where the oracle's level equals the dataset label.
PartitionResult partition(const Dataset& dataset, std::span<const AnnotationResult> annotations);

/// Count of samples per discrepancy |label - predicted|, indices 0..K-1.
std::vector<int> discrepancy_histogram(const Dataset& dataset, std::span<const AnnotationResult> annotations);

}  // namespace relcurr
