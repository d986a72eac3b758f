#pragma once

// Synthetic multichannel engagement data with known latent levels, plus
// controllable ordinal label noise.
//
// For a sample at latent level l (K classes, mid = (K-1)/2) the latent
// engagement is e = class_separation * (l - mid) + d with the subject offset
// d ~ N(0, subject_variability). Each channel c then reads
//
//   x_c[t] = center_c + slope_c * e + |slope_c| * observation_noise * eps_t
//
// with eps_t ~ N(0, 1) i.i.d. Slopes are signed: gaze offset and distraction
// fall with engagement, eye openness and forward lean rise.

#include <cstdint>
#include <string>
#include <vector>

#include "relcurr/parallel.hpp"
#include "relcurr/types.hpp"

namespace relcurr {

struct ChannelModel {
  std::string name;
  double center = 0.0;
  double slope = 1.0;

  friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

/// gaze_offset, eye_openness, posture_lean, distraction_rate.
std::vector<ChannelModel> default_channels();

struct GeneratorConfig {
  int n_samples = 2000;
  int num_classes = 4;
  int length = 128;
  std::vector<ChannelModel> channels = default_channels();
  double class_separation = 1.0;
  double observation_noise = 1.0;
  double subject_variability = 0.35;
  /// Relative class frequencies; empty means balanced.
  std::vector<double> class_proportions;
  std::string id_prefix = "s";
  std::uint64_t seed = 1;

  void validate() const;

  /// Level coordinate of a channel reading: inverts the channel map so that a
  /// noiseless reading of level l maps to exactly l.
  double level_coordinate(const ChannelModel& c, double value) const;
};

enum class NoiseModel { AdjacentOnly, Uniform };

const char* to_string(NoiseModel m);
NoiseModel noise_model_from_string(const std::string& s);

struct NoiseConfig {
  double flip_rate = 0.3;
  NoiseModel model = NoiseModel::AdjacentOnly;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Samples carry latent metadata; labels equal latent levels.
Dataset generate(const GeneratorConfig& cfg, Exec exec = Exec::Parallel);

struct NoisyDataset {
  Dataset dataset;           // observed (possibly corrupted) labels
  std::vector<int> pristine;  // pre-noise labels, evaluation only
};

NoisyDataset inject_label_noise(const Dataset& dataset, const NoiseConfig& nc);

/// Copy without latent blocks, as handed to training.
Dataset blind(const Dataset& dataset);

}  // namespace relcurr
