#pragma once

// Reliability-weighted segmentation-and-recombination. Within one class,
// each of n segment slots is filled from a sample drawn with probability
// proportional to its reliability weight; the augmented weight is the mean
// weight of the contributing samples.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relcurr/label_model.hpp"
#include "relcurr/parallel.hpp"
#include "relcurr/rng.hpp"
#include "relcurr/types.hpp"

namespace relcurr {

struct AugmentConfig {
  int n_segments = 4;
  /// Augmented samples per class; unset means the class's original size.
  std::optional<int> per_class_count;
  std::uint64_t seed = 0;

  void validate() const;
};

struct WeightedSignal {
  const Signal* signal = nullptr;
  double weight = 1.0;
};

/// w_i / sum_j w_j over one class. `class_id` only labels errors.
std::vector<double> sampling_probabilities(std::span<const double> weights, int class_id = -1);

/// Length after truncation to a multiple of n: n * floor(L / n).
std::size_t usable_length(std::size_t length, int n_segments);

/// n contiguous equal segments of the truncated signal.
std::vector<Signal> segment_signal(const Signal& x, int n_segments);

/// One augmented signal and its weight. One index is drawn per segment slot
/// and applies to every channel of that slot.
std::pair<Signal, double> recombine(std::span<const WeightedSignal> class_samples, std::span<const double> probs,
                                    int n_segments, Rng& rng);

struct WeightedSample {
  LabeledSample sample;
  double weight = 1.0;
  bool augmented = false;
};

struct AugmentedDataset {
  std::vector<WeightedSample> samples;  // originals first, then augmented in class order
  std::size_t original_count = 0;
  std::vector<std::string> warnings;
};

/// Appends per-class augmented samples labelled with their source class.
/// Augmented sample k of class c uses a generator derived from
/// (seed, c, k), so serial and parallel runs agree bit for bit.
AugmentedDataset augment_dataset(const Dataset& dataset, std::span<const ReliabilityRecord> records,
                                 const AugmentConfig& cfg, Exec exec = Exec::Parallel);

}  // namespace relcurr
