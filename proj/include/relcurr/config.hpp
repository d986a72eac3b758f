#pragma once

// File-backed pipeline configuration. Every section is optional in the file;
// missing keys keep their defaults and unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcurr/annotator.hpp"
#include "relcurr/datasetgen.hpp"
#include "relcurr/remote_annotator.hpp"
#include "relcurr/trainer.hpp"

namespace relcurr {

struct AnnotatorSettings {
  int frames = 8;
  int questions = 15;
  double answer_noise = 0.0;
  /// Questionnaire JSON file; empty means the built-in questionnaire.
  std::string questionnaire_file;
  int max_retries = 2;
  int timeout_ms = 10000;
  int max_in_flight = 4;
};

struct SweepSettings {
  std::vector<double> alphas = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> w_ambiguous = {0.25, 0.5, 0.75, 1.0};
  double validation_fraction = 0.2;
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  GeneratorConfig generator;
  int test_samples = 500;
  NoiseConfig noise;
  bool noise_on_test = true;
  AnnotatorSettings annotator;
  TrainConfig train;
  SweepSettings sweep;
  /// Where commands read and write artifacts; not part of the hash.
  std::string out_dir = "out";

  /// Seeds of generator, noise, annotator and trainer follow from `seed`.
  void apply_seed(std::uint64_t new_seed);
  void validate() const;

  GeneratorConfig test_generator() const;
  NoiseConfig test_noise() const;
  std::uint64_t annotator_seed() const;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose);

nlohmann::ordered_json to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const nlohmann::ordered_json& j);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

/// Hash of the canonical JSON form; stamped into every output file.
std::string config_hash(const PipelineConfig& cfg);

nlohmann::ordered_json train_config_to_json(const TrainConfig& cfg);

}  // namespace relcurr
