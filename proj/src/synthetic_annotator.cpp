#include "relcurr/annotator.hpp"

#include <algorithm>
#include <random>

#include "relcurr/errors.hpp"

namespace relcurr {

namespace {

enum class Statistic { Mean, FrameMajority };

struct Rule {
  const char* id;
  const char* channel;
  Statistic stat;
};

// Channel read by each question. Gaze questions read gaze_offset, facial ones
// eye_openness, posture ones posture_lean, distraction ones distraction_rate.
constexpr Rule kRules[] = {
    {"Q1", "gaze_offset", Statistic::Mean},          {"Q2", "gaze_offset", Statistic::Mean},
    {"Q3", "gaze_offset", Statistic::Mean},          {"Q4", "gaze_offset", Statistic::Mean},
    {"Q5", "gaze_offset", Statistic::FrameMajority}, {"Q6", "eye_openness", Statistic::Mean},
    {"Q7", "eye_openness", Statistic::Mean},         {"Q8", "eye_openness", Statistic::Mean},
    {"Q9", "eye_openness", Statistic::Mean},         {"Q10", "posture_lean", Statistic::FrameMajority},
    {"Q11", "posture_lean", Statistic::Mean},        {"Q12", "posture_lean", Statistic::Mean},
    {"Q13", "distraction_rate", Statistic::Mean},    {"Q14", "distraction_rate", Statistic::FrameMajority},
    {"Q15", "distraction_rate", Statistic::Mean},
};

// Threshold tiers cycle through this order, so every supported subset spreads
// its questions evenly over the K-1 boundaries between adjacent levels.
constexpr const char* kTierOrder[] = {"Q1", "Q12", "Q13", "Q10", "Q9", "Q2", "Q6", "Q14",
                                      "Q7", "Q8", "Q15", "Q11", "Q5", "Q3", "Q4"};

const Rule& rule_for(const std::string& id) {
  for (const auto& r : kRules)
    if (id == r.id) return r;
  throw Error(ErrorKind::InvalidConfig, "synthetic annotator has no rule for question '" + id + "'");
}

double threshold_for(const std::string& id, int num_classes) {
  for (int p = 0; p < static_cast<int>(std::size(kTierOrder)); ++p)
    if (id == kTierOrder[p]) return (p % (num_classes - 1)) + 0.5;
  throw Error(ErrorKind::InvalidConfig, "synthetic annotator has no threshold for question '" + id + "'");
}

}  // namespace

void SyntheticOracleConfig::validate() const {
  if (!(answer_noise >= 0.0 && answer_noise <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "answer_noise must lie in [0, 1]");
}

SyntheticAnnotator::SyntheticAnnotator(GeneratorConfig generator, SyntheticOracleConfig cfg)
    : generator_(std::move(generator)), cfg_(cfg) {
  generator_.validate();
  cfg_.validate();
  if (!(generator_.class_separation > 0.0))
    throw Error(ErrorKind::InvalidConfig, "synthetic annotator needs class_separation > 0");
}

AnnotationResult SyntheticAnnotator::annotate(const LabeledSample& sample, const Questionnaire& q, int frames,
                                              Rng& rng) const {
  q.validate();
  if (q.questions.empty()) throw Error(ErrorKind::InvalidConfig, "empty questionnaire");
  const int k = generator_.num_classes;
  const auto idx = sample_frames(static_cast<int>(sample.signal.length()), frames);
  std::bernoulli_distribution flip(cfg_.answer_noise);

  AnnotationResult out;
  out.sample_id = sample.id;
  out.frames_used = frames;
  out.questionnaire_version = q.version;
  int engaged_count = 0;
  for (const auto& question : q.questions) {
    const auto& rule = rule_for(question.id);
    const auto* channel = sample.signal.find(rule.channel);
    if (!channel)
      throw Error(ErrorKind::DataIntegrity,
                  "sample '" + sample.id + "' lacks channel '" + std::string(rule.channel) + "'");
    const ChannelModel* model = nullptr;
    for (const auto& m : generator_.channels)
      if (m.name == rule.channel) model = &m;
    if (!model)
      throw Error(ErrorKind::InvalidConfig, "generator config lacks channel '" + std::string(rule.channel) + "'");

    const double threshold = threshold_for(question.id, k);
    bool engaged = false;
    if (rule.stat == Statistic::Mean) {
      double sum = 0.0;
      for (int t : idx) sum += channel->values[t];
      engaged = generator_.level_coordinate(*model, sum / idx.size()) > threshold;
    } else {
      int above = 0;
      for (int t : idx) above += generator_.level_coordinate(*model, channel->values[t]) > threshold ? 1 : 0;
      engaged = 2 * above >= static_cast<int>(idx.size());
    }
    bool answer = question.polarity == Polarity::EngagementPositive ? engaged : !engaged;
    if (cfg_.answer_noise > 0.0 && flip(rng)) answer = !answer;
    const bool counts_engaged = question.polarity == Polarity::EngagementPositive ? answer : !answer;
    engaged_count += counts_engaged ? 1 : 0;
    out.answers.push_back({question.id, answer});
    out.questions_used.push_back(question.id);
  }
  const int level = std::clamp(engaged_count * k / static_cast<int>(q.questions.size()), 0, k - 1);
  out.predicted = OrdinalLabel::make(level, k);
  return out;
}

std::vector<AnnotationResult> SyntheticAnnotator::annotate_all(const Dataset& dataset, const Questionnaire& q,
                                                               int frames, std::uint64_t seed, Exec exec) const {
  if (dataset.num_classes != generator_.num_classes)
    throw Error(ErrorKind::InvalidConfig, "dataset and generator disagree on the class count");
  std::vector<AnnotationResult> out(dataset.size());
  for_each_index(exec, dataset.size(), [&](std::size_t i) {
    const auto& s = dataset.samples[i];
    auto rng = derive_rng(seed, {fnv1a64(s.id)});
    out[i] = annotate(s, q, frames, rng);
  });
  return out;
}

AnnotationResult synthetic_annotate(const LabeledSample& sample, const GeneratorConfig& generator,
                                    const Questionnaire& q, int frames, Rng& rng, const SyntheticOracleConfig& cfg) {
  return SyntheticAnnotator(generator, cfg).annotate(sample, q, frames, rng);
}

}  // namespace relcurr
