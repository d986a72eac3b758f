#include <unordered_map>

#include "relcurr/annotator.hpp"
#include "relcurr/errors.hpp"

namespace relcurr {

namespace {

std::unordered_map<std::string, const AnnotationResult*> index_annotations(std::span<const AnnotationResult> annotations) {
  std::unordered_map<std::string, const AnnotationResult*> by_id;
  for (const auto& a : annotations)
    if (!by_id.emplace(a.sample_id, &a).second)
      throw Error(ErrorKind::DataIntegrity, "duplicate annotation for sample '" + a.sample_id + "'");
  return by_id;
}

const AnnotationResult& lookup(const std::unordered_map<std::string, const AnnotationResult*>& by_id,
                               const std::string& id) {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw Error(ErrorKind::DataIntegrity, "missing annotation for sample '" + id + "'");
  return *it->second;
}

}  // namespace

PartitionResult partition(const Dataset& dataset, std::span<const AnnotationResult> annotations) {
  const auto by_id = index_annotations(annotations);
  PartitionResult out;
  for (const auto& s : dataset.samples) {
    const auto& a = lookup(by_id, s.id);
    (a.predicted.value == s.label ? out.accepted : out.rejected).push_back(s.id);
  }
  return out;
}

std::vector<int> discrepancy_histogram(const Dataset& dataset, std::span<const AnnotationResult> annotations) {
  const auto by_id = index_annotations(annotations);
  std::vector<int> hist(dataset.num_classes, 0);
  for (const auto& s : dataset.samples) {
    const auto& a = lookup(by_id, s.id);
    const int d = std::abs(a.predicted.value - s.label);
    if (d >= dataset.num_classes)
      throw Error(ErrorKind::DataIntegrity, "annotation for '" + s.id + "' is outside the class range");
    ++hist[d];
  }
  return hist;
}

}  // namespace relcurr
