#pragma once

// File formats. Datasets and annotations are JSON Lines; configs, splits,
// checkpoints and reports are single JSON documents. Key order is fixed and
// doubles are printed in shortest round-trip form, so write -> read -> write
// reproduces the same bytes.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "relcurr/annotator.hpp"
#include "relcurr/questionnaire.hpp"
#include "relcurr/types.hpp"

namespace relcurr {

using Json = nlohmann::ordered_json;

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories; throws Io on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
std::vector<Json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);
Json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& doc);

// Dataset lines: {id, label, num_classes, channels: {name: [...]}, latent?, config_hash?}
Json sample_to_json(const LabeledSample& s, int num_classes, bool include_latent, const std::string& config_hash = {});
LabeledSample sample_from_json(const Json& j, int* num_classes = nullptr);
void write_dataset(const std::filesystem::path& path, const Dataset& ds, bool include_latent,
                   const std::string& config_hash = {});
Dataset read_dataset(const std::filesystem::path& path);
/// Hash carried by the first line of a dataset or annotation file, if any.
std::optional<std::string> file_config_hash(const std::filesystem::path& path);

// Latent sidecar lines: {id, label (pristine), latent, config_hash?}
struct PristineLabels {
  std::map<std::string, int> by_id;
};
void write_sidecar(const std::filesystem::path& path, const Dataset& generated, const std::vector<int>& pristine,
                   const std::string& config_hash = {});
PristineLabels read_sidecar(const std::filesystem::path& path);

Json annotation_to_json(const AnnotationResult& a, const std::string& config_hash = {});
AnnotationResult annotation_from_json(const Json& j);

Json questionnaire_to_json(const Questionnaire& q);
Questionnaire questionnaire_from_json(const Json& j);

struct SplitFile {
  PartitionResult partition;
  std::vector<int> histogram;
  int frames = 0;
  int questions = 0;
  std::string config_hash;

  friend bool operator==(const SplitFile&, const SplitFile&) = default;
};
Json split_to_json(const SplitFile& s);
SplitFile split_from_json(const Json& j);

}  // namespace relcurr
