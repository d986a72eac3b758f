#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relcurr {

/// Class index in [0, num_classes).
struct OrdinalLabel {
  int value = 0;
  int num_classes = 4;

  /// Validating constructor; throws InvalidInput when out of range or K < 2.
  static OrdinalLabel make(int value, int num_classes);

  friend bool operator==(const OrdinalLabel&, const OrdinalLabel&) = default;
};

/// Probability distribution over classes.
struct SoftLabel {
  std::vector<double> probs;

  friend bool operator==(const SoftLabel&, const SoftLabel&) = default;
};

struct Channel {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Multichannel series; all channels share one length.
struct Signal {
  std::vector<Channel> channels;

  std::size_t length() const { return channels.empty() ? 0 : channels.front().values.size(); }
  const Channel* find(const std::string& name) const;

  /// Throws InvalidInput if empty, ragged or non-finite.
  void validate() const;

  friend bool operator==(const Signal&, const Signal&) = default;
};

/// Generator-side ground truth. Never visible to training.
struct LatentInfo {
  int level = 0;
  std::map<std::string, double> params;

  friend bool operator==(const LatentInfo&, const LatentInfo&) = default;
};

struct LabeledSample {
  std::string id;
  int label = 0;
  Signal signal;
  std::optional<LatentInfo> latent;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

struct Dataset {
  int num_classes = 4;
  std::vector<LabeledSample> samples;

  std::size_t size() const { return samples.size(); }
  std::vector<int> labels() const;
  std::vector<std::string> ids() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct Answer {
  std::string question_id;
  bool value = false;

  friend bool operator==(const Answer&, const Answer&) = default;
};

/// One oracle opinion for one sample.
struct AnnotationResult {
  std::string sample_id;
  std::vector<Answer> answers;
  OrdinalLabel predicted;
  int frames_used = 0;
  std::vector<std::string> questions_used;
  int questionnaire_version = 1;

  friend bool operator==(const AnnotationResult&, const AnnotationResult&) = default;
};

}  // namespace relcurr
