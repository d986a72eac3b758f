#include "relcurr/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "relcurr/errors.hpp"
#include "relcurr/features.hpp"
#include "relcurr/losses.hpp"
#include "relcurr/rng.hpp"

namespace relcurr {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Baseline: return "baseline";
    case Regime::OneStage: return "one-stage";
    case Regime::TwoStage: return "two-stage";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& s) {
  for (auto r : {Regime::Baseline, Regime::OneStage, Regime::TwoStage})
    if (s == to_string(r)) return r;
  throw Error(ErrorKind::InvalidConfig, "unknown regime '" + s + "'");
}

void TrainConfig::validate() const {
  if (epochs_stage1 < 1 || epochs_stage2 < 1) throw Error(ErrorKind::InvalidConfig, "epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error(ErrorKind::InvalidConfig, "learning_rate must be positive");
  if (batch_size < 1) throw Error(ErrorKind::InvalidConfig, "batch_size must be >= 1");
  if (hidden < 0) throw Error(ErrorKind::InvalidConfig, "hidden width must be >= 0");
  label_config().validate();
  augment.validate();
}

double pool_loss(const ClassifierModel& model, std::span<const TrainExample> examples) {
  double total = 0.0;
  for (const auto& ex : examples) {
    const auto z = model.logits(ex.features);
    if (!std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); }))
      return std::numeric_limits<double>::quiet_NaN();
    try {
      total += ex.record.weight * per_sample_loss(ex.record, softmax(z));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NumericDomain) throw;
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  return total / static_cast<double>(examples.size());
}

StageHistory train_stage(ClassifierModel& model, std::span<const TrainExample> examples, const StageOptions& opts) {
  if (examples.empty()) throw Error(ErrorKind::InvalidInput, "training stage has no examples");
  if (opts.epochs < 0 || opts.batch_size < 1 || !(opts.learning_rate >= 0.0))
    throw Error(ErrorKind::InvalidConfig, "invalid stage options");

  StageHistory history;
  history.n_examples = examples.size();
  const int k = model.num_classes();
  std::vector<std::size_t> order(examples.size());
  std::vector<double> grad(model.params().size());
  std::vector<const TrainExample*> batch;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = derive_rng(opts.seed, {0x7368756666ULL, opts.stream, static_cast<std::uint64_t>(epoch)});
    std::shuffle(order.begin(), order.end(), rng);

    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(opts.batch_size));
      batch.clear();
      for (std::size_t b = start; b < end; ++b) batch.push_back(&examples[order[b]]);
      if (opts.on_batch) opts.on_batch(static_cast<int>(opts.stream), epoch, batch);

      std::fill(grad.begin(), grad.end(), 0.0);
      const double inv_n = 1.0 / static_cast<double>(batch.size());
      double loss = 0.0;
      try {
        for (const auto* ex : batch) {
          const auto z = model.logits(ex->features);
          if (!std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); })) {
            loss = std::numeric_limits<double>::quiet_NaN();
            break;
          }
          const auto p = softmax(z);
          loss += ex->record.weight * per_sample_loss(ex->record, p);
          const auto target = target_distribution(ex->record.target, k);
          std::vector<double> dz(k);
          for (int c = 0; c < k; ++c) dz[c] = p[c] - target[c];
          model.accumulate_gradient(ex->features, dz, ex->record.weight * inv_n, grad);
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NumericDomain) throw;
        loss = std::numeric_limits<double>::quiet_NaN();
      }
      loss *= inv_n;
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite loss in epoch " << epoch << " at learning rate " << opts.learning_rate;
        throw Error(ErrorKind::TrainingDiverged, msg.str());
      }
      auto params = model.params();
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= opts.learning_rate * grad[i];
      history.batch_losses.push_back(loss);
    }
    const double epoch_loss = pool_loss(model, examples);
    if (!std::isfinite(epoch_loss)) {
      std::ostringstream msg;
      msg << "non-finite loss after epoch " << epoch << " at learning rate " << opts.learning_rate;
      throw Error(ErrorKind::TrainingDiverged, msg.str());
    }
    history.epoch_losses.push_back(epoch_loss);
  }
  return history;
}

std::vector<ReliabilityRecord> baseline_records(const Dataset& dataset) {
  std::vector<ReliabilityRecord> out;
  out.reserve(dataset.size());
  for (const auto& s : dataset.samples) {
    const auto gt = OrdinalLabel::make(s.label, dataset.num_classes);
    ReliabilityRecord r;
    r.sample_id = s.id;
    r.gt = gt;
    r.pred = gt;
    r.target = gt;
    r.weight = 1.0;
    out.push_back(std::move(r));
  }
  return out;
}

ReliabilityRecord augmented_record(const std::string& id, int cls, int num_classes, double weight) {
  const auto gt = OrdinalLabel::make(cls, num_classes);
  ReliabilityRecord r;
  r.sample_id = id;
  r.gt = gt;
  r.pred = gt;
  r.target = gt;
  r.weight = weight;
  return r;
}

namespace {

std::vector<TrainExample> examples_for(const std::vector<std::vector<double>>& features,
                                       std::span<const ReliabilityRecord> records,
                                       const std::function<bool(const ReliabilityRecord&)>& keep) {
  std::vector<TrainExample> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (keep(records[i])) out.push_back({features[i], records[i]});
  return out;
}

}  // namespace

TrainResult train_curriculum(const Dataset& dataset, std::span<const ReliabilityRecord> records,
                             const TrainConfig& cfg, const BatchObserver& on_batch, Exec exec) {
  cfg.validate();
  if (dataset.samples.empty()) throw Error(ErrorKind::InvalidInput, "cannot train on an empty dataset");

  // Records are matched to samples by position; enforce that they line up.
  std::vector<ReliabilityRecord> aligned;
  if (cfg.regime == Regime::Baseline) {
    aligned = baseline_records(dataset);
  } else {
    if (records.size() != dataset.size())
      throw Error(ErrorKind::DataIntegrity, "reliability records do not cover the dataset");
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].sample_id != dataset.samples[i].id)
        throw Error(ErrorKind::DataIntegrity, "record order does not match sample '" + dataset.samples[i].id + "'");
      if (records[i].gt.value != dataset.samples[i].label)
        throw Error(ErrorKind::DataIntegrity, "record ground truth differs from the label of '" +
                                                  dataset.samples[i].id + "'");
    }
    aligned.assign(records.begin(), records.end());
  }

  const auto channels = channel_names(dataset.samples.front().signal);
  const auto features = extract_features_all(dataset.samples, channels, exec);
  TrainResult result;
  auto& model = result.model;
  model = ClassifierModel(static_cast<int>(features.front().size()), dataset.num_classes, cfg.hidden, cfg.seed);
  model.standardizer() = Standardizer::fit(features);
  model.channel_order() = channels;

  auto& report = result.report;
  report.regime = cfg.regime;
  report.seed = cfg.seed;
  for (const auto& r : aligned) (r.stage == Stage::Stage1 ? report.n_stage1 : report.n_stage2) += 1;

  StageOptions opts;
  opts.learning_rate = cfg.learning_rate;
  opts.batch_size = cfg.batch_size;
  opts.seed = cfg.seed;
  opts.on_batch = on_batch;

  auto run_single_stage = [&](const char* name) {
    const auto all = examples_for(features, aligned, [](const auto&) { return true; });
    opts.epochs = cfg.epochs_stage1 + cfg.epochs_stage2;
    opts.stream = 1;
    auto h = train_stage(model, all, opts);
    h.name = name;
    report.stages.push_back(std::move(h));
  };

  const bool stage1_empty = report.n_stage1 == 0;
  if (cfg.regime == Regime::TwoStage && stage1_empty)
    report.warnings.push_back("degraded curriculum: no Confident samples for stage 1; trained as one-stage");

  if (cfg.regime == Regime::Baseline) {
    run_single_stage("baseline");
  } else if (cfg.regime == Regime::OneStage || stage1_empty) {
    run_single_stage("one-stage");
  } else {
    const auto pool1 = examples_for(features, aligned, [](const auto& r) { return r.stage == Stage::Stage1; });
    opts.epochs = cfg.epochs_stage1;
    opts.stream = 1;
    auto h1 = train_stage(model, pool1, opts);
    h1.name = "stage1";
    report.stages.push_back(std::move(h1));

    auto pool2 = examples_for(features, aligned, [](const auto&) { return true; });
    const auto augmented = augment_dataset(dataset, aligned, cfg.augment, exec);
    report.warnings.insert(report.warnings.end(), augmented.warnings.begin(), augmented.warnings.end());
    std::vector<LabeledSample> extra;
    std::vector<double> extra_weights;
    for (std::size_t i = augmented.original_count; i < augmented.samples.size(); ++i) {
      extra.push_back(augmented.samples[i].sample);
      extra_weights.push_back(augmented.samples[i].weight);
    }
    const auto extra_features = extract_features_all(extra, channels, exec);
    for (std::size_t i = 0; i < extra.size(); ++i)
      pool2.push_back({extra_features[i],
                       augmented_record(extra[i].id, extra[i].label, dataset.num_classes, extra_weights[i])});
    report.n_augmented = extra.size();

    opts.epochs = cfg.epochs_stage2;
    opts.stream = 2;
    auto h2 = train_stage(model, pool2, opts);
    h2.name = "stage2";
    report.stages.push_back(std::move(h2));
  }

  const auto preds = predict_all(model, features, exec);
  const auto labels = dataset.labels();
  report.train_metrics = compute_metrics(preds, labels, dataset.num_classes);
  return result;
}

nlohmann::ordered_json train_report_to_json(const TrainReport& r, const nlohmann::ordered_json& config,
                                            const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["config_hash"] = config_hash;
  j["regime"] = to_string(r.regime);
  j["seed"] = r.seed;
  j["n_stage1"] = r.n_stage1;
  j["n_stage2"] = r.n_stage2;
  j["n_augmented"] = r.n_augmented;
  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"name", s.name}, {"n_examples", s.n_examples}, {"epoch_losses", s.epoch_losses}});
  j["stages"] = std::move(stages);
  j["train_metrics"] = metrics_to_json(r.train_metrics);
  j["warnings"] = r.warnings;
  j["config"] = config;
  return j;
}

}  // namespace relcurr
