#include "relcurr/experiment.hpp"

#include <unordered_map>

#include "relcurr/errors.hpp"
#include "relcurr/features.hpp"

namespace relcurr {

PreparedData prepare_data(const PipelineConfig& cfg, Exec exec) {
  PreparedData out;
  auto train = inject_label_noise(generate(cfg.generator, exec), cfg.noise);
  out.train = {std::move(train.dataset), std::move(train.pristine)};
  auto test = inject_label_noise(generate(cfg.test_generator(), exec), cfg.test_noise());
  out.test = {std::move(test.dataset), std::move(test.pristine)};
  return out;
}

std::vector<AnnotationResult> annotate_synthetic(const PipelineConfig& cfg, const Dataset& dataset, Exec exec) {
  const auto q = question_subset(default_questionnaire(), cfg.annotator.questions);
  SyntheticAnnotator oracle(cfg.generator, {cfg.annotator.answer_noise});
  return oracle.annotate_all(dataset, q, cfg.annotator.frames, cfg.annotator_seed(), exec);
}

EvalReport evaluate_model(const ClassifierModel& model, const Dataset& dataset, std::span<const int> labels,
                          const PartitionResult& partition, Exec exec) {
  if (labels.size() != dataset.samples.size())
    throw Error(ErrorKind::DataIntegrity, "label count does not match dataset size");
  const auto feats = extract_features_all(dataset.samples, model.channel_order(), exec);
  const auto preds = predict_all(model, feats, exec);
  const auto ids = dataset.ids();
  return evaluate_subsets(ids, preds, labels, partition, dataset.num_classes);
}

ExperimentResult run_experiment(const PipelineConfig& cfg, std::span<const Regime> regimes, Exec exec) {
  ExperimentResult r;
  r.data = prepare_data(cfg, exec);
  const auto& train = r.data.train.dataset;
  const auto& test = r.data.test.dataset;
  r.train_annotations = annotate_synthetic(cfg, train, exec);
  r.test_annotations = annotate_synthetic(cfg, test, exec);
  r.train_partition = partition(train, r.train_annotations);
  r.test_partition = partition(test, r.test_annotations);
  r.records = build_reliability_records(train, r.train_annotations, cfg.train.label_config());

  const Dataset blind_train = blind(train);
  const auto observed = test.labels();
  for (Regime regime : regimes) {
    auto tc = cfg.train;
    tc.regime = regime;
    RegimeOutcome o;
    o.regime = regime;
    o.trained = train_curriculum(blind_train, r.records, tc, {}, exec);
    o.test_pristine = evaluate_model(o.trained.model, test, r.data.test.pristine, r.test_partition, exec);
    o.test_pristine.label_source = "pristine";
    o.test_observed = evaluate_model(o.trained.model, test, observed, r.test_partition, exec);
    r.outcomes.push_back(std::move(o));
  }
  return r;
}

}  // namespace relcurr
