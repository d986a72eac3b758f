#include <doctest.h>

#include "oracles.hpp"

using namespace relcurr;

namespace {

Dataset separable(int n = 200) {
  GeneratorConfig g;
  g.n_samples = n;
  g.length = 32;
  g.observation_noise = 0.0;
  g.subject_variability = 0.0;
  g.class_separation = 2.0;
  return blind(generate(g));
}

struct Fixture {
  Dataset ds;
  std::vector<ReliabilityRecord> records;
};

/// Noisy small dataset whose oracle agrees, disagrees by one, and by more.
Fixture mixed(std::uint64_t seed = 3, int n = 240) {
  GeneratorConfig g;
  g.n_samples = n;
  g.length = 32;
  g.seed = seed;
  auto full = generate(g);
  NoiseConfig nc;
  nc.seed = seed;
  auto noisy = inject_label_noise(full, nc);
  SyntheticAnnotator oracle(g);
  auto anns = oracle.annotate_all(noisy.dataset, default_questionnaire(), 8, seed);
  Fixture f;
  f.ds = blind(noisy.dataset);
  f.records = build_reliability_records(f.ds, anns, {});
  return f;
}

TrainConfig quick(Regime r) {
  TrainConfig c;
  c.regime = r;
  c.epochs_stage1 = 5;
  c.epochs_stage2 = 5;
  return c;
}

std::vector<TrainExample> examples_of(const Dataset& ds, std::span<const ReliabilityRecord> recs) {
  const auto order = channel_names(ds.samples[0].signal);
  const auto feats = extract_features_all(ds.samples, order);
  std::vector<TrainExample> out;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) out.push_back({feats[i], recs[i]});
  return out;
}

}  // namespace

TEST_CASE("regime names") {
  CHECK(regime_from_string("one-stage") == Regime::OneStage);
  CHECK(std::string(to_string(Regime::TwoStage)) == "two-stage");
  CHECK_ERROR_KIND(regime_from_string("three-stage"), ErrorKind::InvalidConfig);
}

TEST_CASE("config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.learning_rate = 0;
  CHECK_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
  c = {};
  c.batch_size = 0;
  CHECK_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
  c = {};
  c.alpha = 1.0;
  CHECK_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
  c = {};
  c.augment.n_segments = 0;
  CHECK_ERROR_KIND(c.validate(), ErrorKind::InvalidConfig);
}

TEST_CASE("separable data is learned") {
  const auto ds = separable();
  TrainConfig c = quick(Regime::Baseline);
  c.epochs_stage1 = 25;
  c.epochs_stage2 = 25;
  auto r = train_curriculum(ds, baseline_records(ds), c);
  CHECK(r.report.train_metrics->accuracy >= 0.99);
  REQUIRE(r.report.stages.size() == 1);
  const auto& losses = r.report.stages[0].epoch_losses;
  CHECK(losses.size() == 50);
  for (std::size_t e = 6; e < losses.size(); ++e) CHECK(losses[e] <= losses[e - 1] + 1e-6);
}

TEST_CASE("zero learning rate leaves the model alone") {
  const auto ds = separable(40);
  const auto recs = baseline_records(ds);
  const auto ex = examples_of(ds, recs);
  ClassifierModel m(static_cast<int>(ex[0].features.size()), 4, 3, 5);
  std::vector<std::vector<double>> rows;
  for (const auto& e : ex) rows.push_back(e.features);
  m.standardizer() = Standardizer::fit(rows);
  const std::vector<double> before(m.params().begin(), m.params().end());
  StageOptions o;
  o.epochs = 4;
  o.learning_rate = 0.0;
  auto h = train_stage(m, ex, o);
  CHECK(std::equal(before.begin(), before.end(), m.params().begin()));
  REQUIRE(h.epoch_losses.size() == 4);
  for (double l : h.epoch_losses) CHECK(l == doctest::Approx(h.epoch_losses[0]).epsilon(1e-12));
}

TEST_CASE("half weight gives half the update") {
  const auto ds = separable(4);
  auto recs = baseline_records(ds);
  auto ex = examples_of(ds, recs);
  ex.resize(1);
  StageOptions o;
  o.epochs = 1;
  o.batch_size = 1;
  o.learning_rate = 1.0;
  auto step = [&](double w) {
    auto e = ex;
    e[0].record.weight = w;
    ClassifierModel m(static_cast<int>(e[0].features.size()), 4);
    std::vector<std::vector<double>> rows{e[0].features};
    m.standardizer() = Standardizer::fit(rows);
    train_stage(m, e, o);
    return std::vector<double>(m.params().begin(), m.params().end());
  };
  const auto full = step(1.0), half = step(0.5);
  for (std::size_t i = 0; i < full.size(); ++i) CHECK(half[i] == doctest::Approx(0.5 * full[i]).epsilon(1e-12));
}

TEST_CASE("divergence is reported with epoch and learning rate") {
  const auto ds = separable(40);
  const auto ex = examples_of(ds, baseline_records(ds));
  ClassifierModel m(static_cast<int>(ex[0].features.size()), 4);
  std::vector<std::vector<double>> rows;
  for (const auto& e : ex) rows.push_back(e.features);
  m.standardizer() = Standardizer::fit(rows);
  StageOptions o;
  o.epochs = 20;
  o.learning_rate = 1e305;
  try {
    train_stage(m, ex, o);
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TrainingDiverged);
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    CHECK(std::string(e.what()).find("1e+305") != std::string::npos);
  }
}

TEST_CASE("two-stage bookkeeping") {
  auto f = mixed();
  auto c = quick(Regime::TwoStage);
  c.epochs_stage1 = 3;
  c.epochs_stage2 = 4;
  auto r = train_curriculum(f.ds, f.records, c);
  REQUIRE(r.report.stages.size() == 2);
  CHECK(r.report.stages[0].epoch_losses.size() == 3);
  CHECK(r.report.stages[1].epoch_losses.size() == 4);
  CHECK(r.report.n_stage1 + r.report.n_stage2 == f.ds.samples.size());
  CHECK(r.report.n_stage2 > 0);
  CHECK(r.report.stages[0].n_examples == r.report.n_stage1);
  CHECK(r.report.stages[1].n_examples == f.ds.samples.size() + r.report.n_augmented);
  CHECK(r.report.n_augmented == f.ds.samples.size());

  auto b = train_curriculum(f.ds, f.records, quick(Regime::Baseline));
  CHECK(b.report.stages.size() == 1);
  CHECK(b.report.n_augmented == 0);
}

TEST_CASE("stage one never sees ambiguous samples") {
  auto f = mixed();
  int stage1_batches = 0, stage2_ambiguous = 0;
  BatchObserver obs = [&](int stage, int, std::span<const TrainExample* const> batch) {
    for (const auto* ex : batch) {
      if (stage == 1) {
        CHECK(ex->record.reliability == Reliability::Confident);
      } else {
        stage2_ambiguous += ex->record.reliability == Reliability::Ambiguous;
      }
    }
    stage1_batches += stage == 1;
  };
  train_curriculum(f.ds, f.records, quick(Regime::TwoStage), obs);
  CHECK(stage1_batches > 0);
  CHECK(stage2_ambiguous > 0);
}

TEST_CASE("training is reproducible") {
  auto f = mixed();
  auto c = quick(Regime::TwoStage);
  c.hidden = 4;
  auto a = train_curriculum(f.ds, f.records, c, {}, Exec::Serial);
  auto b = train_curriculum(f.ds, f.records, c, {}, Exec::Parallel);
  CHECK(model_to_json(a.model, "").dump() == model_to_json(b.model, "").dump());
  CHECK(a.report.stages[1].batch_losses == b.report.stages[1].batch_losses);
}

TEST_CASE("unit weights and alpha one make one-stage match baseline") {
  auto f = mixed();
  std::vector<ReliabilityRecord> degenerate;
  for (const auto& r : f.records) {
    auto d = r;
    d.weight = 1.0;
    d.target = make_soft_label_unchecked(r.gt, r.pred, 1.0, f.ds.num_classes);
    degenerate.push_back(d);
  }
  auto one = train_curriculum(f.ds, degenerate, quick(Regime::OneStage));
  auto base = train_curriculum(f.ds, baseline_records(f.ds), quick(Regime::Baseline));
  const auto& a = one.report.stages[0].batch_losses;
  const auto& b = base.report.stages[0].batch_losses;
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-9);
}

TEST_CASE("empty stage one degrades to one-stage") {
  auto ds = fixture::dataset({0, 1, 2, 3, 1, 2}, 4, 16);
  auto anns = fixture::annotations(ds, {1, 0, 1, 2, 2, 3});
  auto recs = build_reliability_records(ds, anns, {});
  auto r = train_curriculum(ds, recs, quick(Regime::TwoStage));
  REQUIRE(r.report.warnings.size() == 1);
  CHECK(r.report.warnings[0].find("degraded") != std::string::npos);
  CHECK(r.report.stages.size() == 1);
  CHECK(r.report.stages[0].name == "one-stage");
}

TEST_CASE("records must match the dataset") {
  auto f = mixed();
  auto shuffled = f.records;
  std::swap(shuffled[0], shuffled[1]);
  CHECK_ERROR_KIND(train_curriculum(f.ds, shuffled, quick(Regime::TwoStage)), ErrorKind::DataIntegrity);
  auto short_recs = f.records;
  short_recs.pop_back();
  CHECK_ERROR_KIND(train_curriculum(f.ds, short_recs, quick(Regime::OneStage)), ErrorKind::DataIntegrity);
  // baseline ignores records
  CHECK_NOTHROW(train_curriculum(f.ds, short_recs, quick(Regime::Baseline)));
  CHECK_ERROR_KIND(train_curriculum(Dataset{}, {}, quick(Regime::Baseline)), ErrorKind::InvalidInput);
}

TEST_CASE("train report document") {
  auto f = mixed();
  auto r = train_curriculum(f.ds, f.records, quick(Regime::TwoStage));
  auto j = train_report_to_json(r.report, nlohmann::ordered_json{{"k", 1}}, "h");
  CHECK(j["config_hash"] == "h");
  CHECK(j["stages"].size() == 2);
  CHECK(j["stages"][0]["name"] == "stage1");
  CHECK(j["config"]["k"] == 1);
  CHECK(j["train_metrics"]["n"] == f.ds.samples.size());
}
