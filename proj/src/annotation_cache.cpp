#include <mutex>

#include "relcurr/errors.hpp"
#include "relcurr/io.hpp"
#include "relcurr/remote_annotator.hpp"

namespace relcurr {

AnnotationKey make_key(const std::string& sample_id, int frames, const Questionnaire& q) {
  return {sample_id, frames, question_set_hash(q.ids()), q.version};
}

AnnotationKey key_of(const AnnotationResult& a) {
  return {a.sample_id, a.frames_used, question_set_hash(a.questions_used), a.questionnaire_version};
}

AnnotationCache::AnnotationCache(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(file_)) return;
  for (const auto& row : read_jsonl(file_)) {
    auto a = annotation_from_json(row);
    entries_[key_of(a)] = std::move(a);
  }
}

std::optional<AnnotationResult> AnnotationCache::get(const AnnotationKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void AnnotationCache::put(const AnnotationResult& a) {
  std::unique_lock lock(mutex_);
  entries_[key_of(a)] = a;
}

std::size_t AnnotationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::vector<AnnotationResult> AnnotationCache::entries() const {
  std::shared_lock lock(mutex_);
  std::vector<AnnotationResult> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(v);
  return out;
}

void AnnotationCache::save(const std::string& config_hash) const {
  if (file_.empty()) throw Error(ErrorKind::Io, "annotation cache has no backing file");
  save_as(file_, config_hash);
}

void AnnotationCache::save_as(const std::filesystem::path& file, const std::string& config_hash) const {
  std::vector<Json> rows;
  {
    std::shared_lock lock(mutex_);
    for (const auto& [k, v] : entries_) rows.push_back(annotation_to_json(v, config_hash));
  }
  write_jsonl(file, rows);
}

}  // namespace relcurr
