#pragma once

// Two-round client for a remote questionnaire annotator, and the annotation
// cache it shares with the synthetic oracle.
//
// Wire format (JSON over a single POST endpoint):
//   request  {sample_id, frame_refs: [...], round: 1|2, questions: [{id, text}]}
//   round 1  {answers: [{id, value: true|false}]}
//   round 2  {level: integer}

#include <atomic>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "relcurr/questionnaire.hpp"
#include "relcurr/types.hpp"

namespace relcurr {

struct AnnotationKey {
  std::string sample_id;
  int frames = 0;
  std::string question_hash;
  int questionnaire_version = 1;

  auto operator<=>(const AnnotationKey&) const = default;
};

AnnotationKey make_key(const std::string& sample_id, int frames, const Questionnaire& q);
AnnotationKey key_of(const AnnotationResult& a);

/// Thread-safe map from AnnotationKey to result; last write wins. Persisted
/// as JSON Lines sorted by key.
class AnnotationCache {
 public:
  AnnotationCache() = default;
  /// Loads `file` when it exists; save() writes back to it.
  explicit AnnotationCache(std::filesystem::path file);

  std::optional<AnnotationResult> get(const AnnotationKey& key) const;
  void put(const AnnotationResult& a);
  std::size_t size() const;
  std::vector<AnnotationResult> entries() const;

  void save(const std::string& config_hash = {}) const;
  void save_as(const std::filesystem::path& file, const std::string& config_hash = {}) const;

 private:
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::map<AnnotationKey, AnnotationResult> entries_;
};

struct EndpointConfig {
  std::string url;  // e.g. http://127.0.0.1:8080/annotate
  int num_classes = 4;
  int max_retries = 2;
  int timeout_ms = 10000;
  int max_in_flight = 4;

  void validate() const;
};

/// What the remote side needs to resolve a sample: its id and frame count.
struct SampleRef {
  std::string sample_id;
  int length = 0;
};

/// Round-2 instruction asking for a single integer level.
std::string classification_instruction(int num_classes);

/// Frame references sent for a sample: "<sample_id>#<frame index>".
std::vector<std::string> frame_refs(const SampleRef& ref, int frames);

class RemoteAnnotator {
 public:
  RemoteAnnotator(EndpointConfig endpoint, AnnotationCache& cache);

  /// Cached by (sample, F, question set, questionnaire version). Transport
  /// failures are retried; malformed replies raise Protocol immediately.
  AnnotationResult annotate(const SampleRef& ref, const Questionnaire& q, int frames);

  struct BatchOutcome {
    std::vector<std::optional<AnnotationResult>> results;  // input order
    std::vector<std::string> failures;                     // "<id>: <message>"
    std::size_t fetched = 0;                               // results not served from cache
  };

  /// Annotates with at most max_in_flight concurrent requests. Per-sample
  /// failures are collected; remaining samples still run.
  BatchOutcome annotate_many(std::span<const SampleRef> refs, const Questionnaire& q, int frames);

  std::size_t network_calls() const { return calls_.load(); }

 private:
  std::string post(const std::string& body);

  EndpointConfig endpoint_;
  AnnotationCache& cache_;
  std::string base_;
  std::string path_;
  std::atomic<std::size_t> calls_{0};
};

AnnotationResult remote_annotate(const EndpointConfig& endpoint, AnnotationCache& cache, const SampleRef& ref,
                                 const Questionnaire& q, int frames);

}  // namespace relcurr
