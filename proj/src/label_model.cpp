#include "relcurr/label_model.hpp"

#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "relcurr/errors.hpp"

namespace relcurr {

const char* to_string(Reliability r) { return r == Reliability::Ambiguous ? "ambiguous" : "confident"; }
const char* to_string(Stage s) { return s == Stage::Stage2 ? "stage2" : "stage1"; }

std::vector<double> target_distribution(const Target& t, int num_classes) {
  if (const auto* soft = std::get_if<SoftLabel>(&t)) {
    if (static_cast<int>(soft->probs.size()) != num_classes)
      throw Error(ErrorKind::InvalidInput, "soft label length does not match class count");
    return soft->probs;
  }
  const auto& hard = std::get<OrdinalLabel>(t);
  if (hard.value < 0 || hard.value >= num_classes)
    throw Error(ErrorKind::InvalidInput, "hard target outside class range");
  std::vector<double> out(num_classes, 0.0);
  out[hard.value] = 1.0;
  return out;
}

void WeightConfig::validate() const {
  auto ok = [](double w) { return std::isfinite(w) && w > 0.0 && w <= 1.0; };
  if (!ok(w_confident) || !ok(w_ambiguous))
    throw Error(ErrorKind::InvalidConfig, "reliability weights must lie in (0, 1]");
}

void LabelConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 1)");
  weights.validate();
}

int discrepancy(OrdinalLabel gt, OrdinalLabel pred) {
  if (gt.num_classes != pred.num_classes)
    throw Error(ErrorKind::InvalidInput, "labels have different class counts (" + std::to_string(gt.num_classes) +
                                             " vs " + std::to_string(pred.num_classes) + ")");
  return std::abs(gt.value - pred.value);
}

Reliability classify_reliability(int d, int num_classes) {
  if (d < 0 || d >= num_classes)
    throw Error(ErrorKind::InvalidInput, "discrepancy " + std::to_string(d) + " impossible with " +
                                             std::to_string(num_classes) + " classes");
  return d == 1 ? Reliability::Ambiguous : Reliability::Confident;
}

Target make_soft_label_unchecked(OrdinalLabel gt, OrdinalLabel pred, double alpha, int num_classes) {
  if (gt.num_classes != num_classes || pred.num_classes != num_classes)
    throw Error(ErrorKind::InvalidInput, "label class count does not match K");
  if (discrepancy(gt, pred) != 1) return gt;
  SoftLabel s{std::vector<double>(num_classes, 0.0)};
  s.probs[gt.value] = alpha;
  s.probs[pred.value] = 1.0 - alpha;
  return s;
}

Target make_soft_label(OrdinalLabel gt, OrdinalLabel pred, double alpha, int num_classes) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidConfig, "alpha must lie in (0, 1)");
  return make_soft_label_unchecked(gt, pred, alpha, num_classes);
}

double reliability_weight(Reliability r, const WeightConfig& cfg) {
  cfg.validate();
  return r == Reliability::Ambiguous ? cfg.w_ambiguous : cfg.w_confident;
}

ReliabilityRecord make_record(std::string sample_id, OrdinalLabel gt, OrdinalLabel pred, const LabelConfig& cfg) {
  ReliabilityRecord r;
  r.sample_id = std::move(sample_id);
  r.gt = gt;
  r.pred = pred;
  r.discrepancy = discrepancy(gt, pred);
  r.reliability = classify_reliability(r.discrepancy, gt.num_classes);
  r.stage = r.reliability == Reliability::Ambiguous ? Stage::Stage2 : Stage::Stage1;
  r.weight = reliability_weight(r.reliability, cfg.weights);
  r.target = make_soft_label(gt, pred, cfg.alpha, gt.num_classes);
  return r;
}

std::vector<ReliabilityRecord> build_reliability_records(const Dataset& dataset,
                                                         std::span<const AnnotationResult> annotations,
                                                         const LabelConfig& cfg) {
  cfg.validate();
  std::unordered_map<std::string, const AnnotationResult*> by_id;
  by_id.reserve(annotations.size());
  for (const auto& a : annotations) {
    if (!by_id.emplace(a.sample_id, &a).second)
      throw Error(ErrorKind::DataIntegrity, "duplicate annotation for sample '" + a.sample_id + "'");
  }
  std::vector<ReliabilityRecord> records;
  records.reserve(dataset.size());
  for (const auto& s : dataset.samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) throw Error(ErrorKind::DataIntegrity, "missing annotation for sample '" + s.id + "'");
    const auto gt = OrdinalLabel::make(s.label, dataset.num_classes);
    const auto pred = OrdinalLabel::make(it->second->predicted.value, dataset.num_classes);
    records.push_back(make_record(s.id, gt, pred, cfg));
  }
  return records;
}

void check_record(const ReliabilityRecord& r) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::DataIntegrity, "record '" + r.sample_id + "': " + what);
  };
  if (r.discrepancy != std::abs(r.gt.value - r.pred.value)) fail("discrepancy does not match labels");
  const bool ambiguous = r.discrepancy == 1;
  if ((r.reliability == Reliability::Ambiguous) != ambiguous) fail("reliability class inconsistent with discrepancy");
  if ((r.stage == Stage::Stage2) != ambiguous) fail("stage inconsistent with reliability class");
  if (is_soft(r.target) != ambiguous) fail("target kind inconsistent with reliability class");
  if (!(r.weight >= 0.0 && r.weight <= 1.0)) fail("weight outside [0, 1]");
}

}  // namespace relcurr
