#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>

#include <CLI11.hpp>

#include "relcurr/errors.hpp"
#include "relcurr/experiment.hpp"
#include "relcurr/features.hpp"
#include "relcurr/remote_annotator.hpp"

namespace relcurr::cli {

namespace {

constexpr std::uint64_t kHoldoutStream = 0x686f6c64;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

fs::path or_default(const fs::path& p, const fs::path& fallback) { return p.empty() ? fallback : p; }

fs::path sidecar_for(const fs::path& dataset) {
  return dataset.parent_path() / (dataset.stem().string() + ".latent.jsonl");
}

fs::path split_for(const fs::path& dataset) {
  return dataset.parent_path() / (dataset.stem().string() + ".split.json");
}

void require_file(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw Error(ErrorKind::Io, std::string(what) + " not found: " + p.string());
}

std::optional<std::string> embedded_hash(const fs::path& p) {
  if (p.extension() == ".jsonl") return file_config_hash(p);
  const auto j = read_json(p);
  if (j.is_object() && j.contains("config_hash") && j["config_hash"].is_string())
    return j["config_hash"].get<std::string>();
  return std::nullopt;
}

void check_provenance(const Context& ctx, const fs::path& p) {
  const auto h = embedded_hash(p);
  if (h && !h->empty() && *h != ctx.hash)
    *ctx.err << "warning: provenance: " << p.string() << " was produced by config " << *h << ", current config is "
             << ctx.hash << "\n";
}

Questionnaire active_questionnaire(const Context& ctx, std::optional<int> count = std::nullopt) {
  const auto& a = ctx.config.annotator;
  Questionnaire base = default_questionnaire();
  if (!a.questionnaire_file.empty()) base = questionnaire_from_json(read_json(a.questionnaire_file));
  return question_subset(base, count.value_or(a.questions));
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> idx) {
  Dataset out;
  out.num_classes = ds.num_classes;
  out.samples.reserve(idx.size());
  for (auto i : idx) out.samples.push_back(ds.samples[i]);
  return out;
}

/// Labels to score against: pristine from the sidecar when it exists.
std::pair<std::vector<int>, std::string> scoring_labels(const Dataset& ds, const fs::path& sidecar) {
  if (sidecar.empty() || !fs::exists(sidecar)) return {ds.labels(), "observed"};
  const auto pristine = read_sidecar(sidecar);
  std::vector<int> labels;
  labels.reserve(ds.samples.size());
  for (const auto& s : ds.samples) {
    auto it = pristine.by_id.find(s.id);
    if (it == pristine.by_id.end())
      throw Error(ErrorKind::DataIntegrity, "sidecar " + sidecar.string() + " has no label for sample '" + s.id + "'");
    labels.push_back(it->second);
  }
  return {labels, "pristine"};
}

Dataset load_dataset(const Context& ctx, const fs::path& p) {
  require_file(p, "dataset");
  check_provenance(ctx, p);
  return read_dataset(p);
}

AnnotateSummary annotate_into(const Context& ctx, const Dataset& ds, AnnotationCache& cache, const Questionnaire& q,
                              int frames) {
  AnnotateSummary summary;
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (cache.get(make_key(ds.samples[i].id, frames, q))) ++summary.cached;
    else missing.push_back(i);
  }
  if (missing.empty()) return summary;
  const Dataset todo = subset(ds, missing);
  if (ctx.endpoint_url.empty()) {
    SyntheticAnnotator oracle(ctx.config.generator, {ctx.config.annotator.answer_noise});
    for (auto& a : oracle.annotate_all(todo, q, frames, ctx.config.annotator_seed(), ctx.exec)) cache.put(a);
    summary.new_count = todo.samples.size();
    return summary;
  }
  EndpointConfig ep;
  ep.url = ctx.endpoint_url;
  ep.num_classes = ds.num_classes;
  ep.max_retries = ctx.config.annotator.max_retries;
  ep.timeout_ms = ctx.config.annotator.timeout_ms;
  ep.max_in_flight = ctx.config.annotator.max_in_flight;
  RemoteAnnotator remote(ep, cache);
  std::vector<SampleRef> refs;
  for (const auto& s : todo.samples) refs.push_back({s.id, static_cast<int>(s.signal.length())});
  auto outcome = remote.annotate_many(refs, q, frames);
  for (const auto& f : outcome.failures) *ctx.err << "annotate: failed " << f << "\n";
  summary.failed = outcome.failures.size();
  summary.new_count = outcome.fetched;
  summary.cached += refs.size() - outcome.fetched - summary.failed;
  return summary;
}

std::vector<AnnotationResult> lookup_annotations(const Dataset& ds, const AnnotationCache& cache,
                                                 const Questionnaire& q, int frames) {
  std::vector<AnnotationResult> out;
  out.reserve(ds.samples.size());
  for (const auto& s : ds.samples) {
    auto a = cache.get(make_key(s.id, frames, q));
    if (!a)
      throw Error(ErrorKind::DataIntegrity, "no annotation for sample '" + s.id + "' at frames=" +
                                                std::to_string(frames) + ", questions=" +
                                                std::to_string(q.questions.size()) + "; run annotate first");
    out.push_back(std::move(*a));
  }
  return out;
}

AnnotationCache load_cache(const Context& ctx, const fs::path& p) {
  require_file(p, "annotation file");
  check_provenance(ctx, p);
  return AnnotationCache(p);
}

struct Holdout {
  Dataset fit, val;
  std::vector<int> val_labels;
  std::string label_source;
  std::vector<AnnotationResult> fit_annotations;
};

Holdout make_holdout(const Context& ctx, const Dataset& ds, const fs::path& dataset_path,
                     std::span<const AnnotationResult> annotations) {
  const auto n = ds.samples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = derive_rng(ctx.config.seed, {kHoldoutStream});
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(ctx.config.sweep.validation_fraction * n));
  if (n_val >= n) throw Error(ErrorKind::InvalidConfig, "validation split leaves no training samples");
  std::vector<std::size_t> val(order.begin(), order.begin() + n_val), fit(order.begin() + n_val, order.end());
  std::sort(val.begin(), val.end());
  std::sort(fit.begin(), fit.end());
  Holdout h;
  h.fit = subset(ds, fit);
  h.val = subset(ds, val);
  for (auto i : fit) h.fit_annotations.push_back(annotations[i]);
  auto [labels, source] = scoring_labels(h.val, sidecar_for(dataset_path));
  h.val_labels = std::move(labels);
  h.label_source = source;
  return h;
}

MetricBundle fit_and_score(const Context& ctx, const Holdout& h, const TrainConfig& tc) {
  const auto records = build_reliability_records(h.fit, h.fit_annotations, tc.label_config());
  const auto trained = train_curriculum(h.fit, records, tc, {}, ctx.exec);
  const auto feats = extract_features_all(h.val.samples, trained.model.channel_order(), ctx.exec);
  const auto preds = predict_all(trained.model, feats, ctx.exec);
  return compute_metrics(preds, h.val_labels, h.val.num_classes);
}

Json sweep_point_json(double alpha, double w, const MetricBundle& m) {
  Json j;
  j["alpha"] = alpha;
  j["w_ambiguous"] = w;
  j["metrics"] = metrics_to_json(m);
  return j;
}

void run_grid(const Context& ctx, const Dataset& ds, const fs::path& dataset_path,
              std::span<const AnnotationResult> annotations, TrainConfig tc, const std::vector<double>& alphas,
              const std::vector<double>& weights, const fs::path& output) {
  const auto h = make_holdout(ctx, ds, dataset_path, annotations);
  Json points = Json::array();
  *ctx.out << "validation: " << h.val.samples.size() << " samples, " << h.label_source << " labels, regime "
           << to_string(tc.regime) << "\n";
  *ctx.out << pad("alpha", 8) << pad("w_amb", 8) << pad("acc[%]", 9) << pad("+-1 acc[%]", 11) << "wF1[%]\n";
  for (double a : alphas)
    for (double w : weights) {
      tc.alpha = a;
      tc.weights.w_ambiguous = w;
      const auto m = fit_and_score(ctx, h, tc);
      *ctx.out << pad(fmt("%.2f", a), 8) << pad(fmt("%.2f", w), 8) << pad(fmt("%.2f", 100 * m.accuracy), 9)
               << pad(fmt("%.2f", 100 * m.tolerance_accuracy), 11) << fmt("%.2f", 100 * m.weighted_f1) << "\n";
      points.push_back(sweep_point_json(a, w, m));
    }
  Json doc;
  doc["config_hash"] = ctx.hash;
  doc["regime"] = to_string(tc.regime);
  doc["label_source"] = h.label_source;
  doc["n_validation"] = h.val.samples.size();
  doc["points"] = std::move(points);
  write_json(output, doc);
  *ctx.out << "wrote " << output.string() << "\n";
}

}  // namespace

Context::Context(PipelineConfig cfg, std::ostream& o, std::ostream& e)
    : config(std::move(cfg)), hash(config_hash(config)), out_dir(config.out_dir), out(&o), err(&e) {}

GenerateResult cmd_generate(const Context& ctx) {
  ctx.config.validate();
  GenerateResult r{ctx.path("train.jsonl"), ctx.path("train.latent.jsonl"), ctx.path("test.jsonl"),
                   ctx.path("test.latent.jsonl")};
  const auto data = prepare_data(ctx.config, ctx.exec);
  const std::pair<const SplitData*, std::pair<fs::path, fs::path>> parts[] = {
      {&data.train, {r.train, r.train_sidecar}}, {&data.test, {r.test, r.test_sidecar}}};
  for (const auto& [split, paths] : parts) {
    write_dataset(paths.first, split->dataset, false, ctx.hash);
    write_sidecar(paths.second, split->dataset, split->pristine, ctx.hash);
    std::vector<int> counts(split->dataset.num_classes, 0);
    for (int y : split->dataset.labels()) ++counts[y];
    *ctx.out << paths.first.filename().string() << ": " << split->dataset.samples.size() << " samples, class counts";
    for (std::size_t c = 0; c < counts.size(); ++c) *ctx.out << " " << c << ":" << counts[c];
    *ctx.out << "\n";
  }
  *ctx.out << "config hash " << ctx.hash << "\n";
  return r;
}

AnnotateSummary cmd_annotate(const Context& ctx, const AnnotateOptions& opts) {
  auto datasets = opts.datasets;
  if (datasets.empty()) {
    for (const char* name : {"train.jsonl", "test.jsonl"})
      if (fs::exists(ctx.path(name))) datasets.push_back(ctx.path(name));
    if (datasets.empty()) throw Error(ErrorKind::Io, "no dataset files in " + ctx.out_dir.string());
  }
  const auto cache_path = or_default(opts.cache, ctx.path("annotations.jsonl"));
  if (fs::exists(cache_path)) check_provenance(ctx, cache_path);
  AnnotationCache cache(cache_path);
  const auto q = active_questionnaire(ctx);
  const int frames = ctx.config.annotator.frames;
  AnnotateSummary total;
  for (const auto& p : datasets) {
    const auto ds = load_dataset(ctx, p);
    const auto s = annotate_into(ctx, ds, cache, q, frames);
    *ctx.out << p.filename().string() << ": " << s.new_count << " new, " << s.cached << " cached, " << s.failed
             << " failed\n";
    total.new_count += s.new_count;
    total.cached += s.cached;
    total.failed += s.failed;
  }
  cache.save(ctx.hash);
  *ctx.out << "oracle " << (ctx.endpoint_url.empty() ? "synthetic" : "remote") << ", frames " << frames
           << ", questions " << q.questions.size() << "; cache " << cache_path.string() << " holds " << cache.size()
           << " entries\n";
  if (total.failed > 0)
    throw Error(ErrorKind::AnnotationUnavailable, std::to_string(total.failed) + " samples could not be annotated");
  return total;
}

SplitFile cmd_partition(const Context& ctx, const PartitionOptions& opts) {
  const auto dataset_path = or_default(opts.dataset, ctx.path("train.jsonl"));
  const auto ds = load_dataset(ctx, dataset_path);
  const auto cache = load_cache(ctx, or_default(opts.annotations, ctx.path("annotations.jsonl")));
  const auto q = active_questionnaire(ctx);
  const int frames = ctx.config.annotator.frames;
  const auto anns = lookup_annotations(ds, cache, q, frames);
  SplitFile split;
  split.partition = partition(ds, anns);
  split.histogram = discrepancy_histogram(ds, anns);
  split.frames = frames;
  split.questions = static_cast<int>(q.questions.size());
  split.config_hash = ctx.hash;
  const auto output = or_default(opts.output, split_for(dataset_path));
  write_json(output, split_to_json(split));
  *ctx.out << dataset_path.filename().string() << ": " << split.partition.accepted.size() << " accepted, "
           << split.partition.rejected.size() << " rejected; discrepancy histogram";
  for (std::size_t d = 0; d < split.histogram.size(); ++d) *ctx.out << " " << d << ":" << split.histogram[d];
  *ctx.out << "\nwrote " << output.string() << "\n";
  return split;
}

void cmd_train(const Context& ctx, const TrainOptions& opts) {
  const auto dataset_path = or_default(opts.dataset, ctx.path("train.jsonl"));
  const auto ds = load_dataset(ctx, dataset_path);

  std::vector<Regime> regimes;
  if (opts.regime == "all") regimes = {Regime::Baseline, Regime::OneStage, Regime::TwoStage};
  else regimes = {opts.regime.empty() ? ctx.config.train.regime : regime_from_string(opts.regime)};
  const bool needs_annotations =
      opts.sweep_alpha || std::any_of(regimes.begin(), regimes.end(), [](Regime r) { return r != Regime::Baseline; });

  std::vector<AnnotationResult> anns;
  if (needs_annotations) {
    const auto cache = load_cache(ctx, or_default(opts.annotations, ctx.path("annotations.jsonl")));
    anns = lookup_annotations(ds, cache, active_questionnaire(ctx), ctx.config.annotator.frames);
  }

  if (opts.sweep_alpha) {
    TrainConfig tc = ctx.config.train;
    tc.regime = opts.regime.empty() || opts.regime == "all" ? Regime::TwoStage : regimes.front();
    if (tc.regime == Regime::Baseline)
      *ctx.err << "warning: baseline ignores alpha; every sweep point trains the same model\n";
    run_grid(ctx, ds, dataset_path, anns, tc, ctx.config.sweep.alphas, {tc.weights.w_ambiguous},
             ctx.path("sweep_alpha.json"));
    return;
  }

  const auto eval_path = or_default(opts.eval_dataset, ctx.path("test.jsonl"));
  std::optional<Dataset> eval_ds;
  std::vector<int> eval_labels;
  std::string eval_source;
  if (fs::exists(eval_path)) {
    eval_ds = load_dataset(ctx, eval_path);
    std::tie(eval_labels, eval_source) = scoring_labels(*eval_ds, sidecar_for(eval_path));
  } else if (!opts.eval_dataset.empty()) {
    require_file(eval_path, "evaluation dataset");
  }

  // the snapshot is what was hashed: where artifacts live is not recorded
  auto config_json = to_json(ctx.config);
  config_json.erase("out_dir");
  Json comparison = Json::array();
  std::vector<std::string> rows;
  for (Regime regime : regimes) {
    TrainConfig tc = ctx.config.train;
    tc.regime = regime;
    const auto records = needs_annotations && regime != Regime::Baseline
                             ? build_reliability_records(ds, anns, tc.label_config())
                             : baseline_records(ds);
    const auto result = train_curriculum(ds, records, tc, {}, ctx.exec);
    for (const auto& w : result.report.warnings) *ctx.err << "warning: " << w << "\n";
    const auto model_path = ctx.path(std::string("model_") + to_string(regime) + ".json");
    const auto report_path = ctx.path(std::string("train_report_") + to_string(regime) + ".json");
    write_json(model_path, model_to_json(result.model, ctx.hash));
    write_json(report_path, train_report_to_json(result.report, config_json, ctx.hash));
    *ctx.out << to_string(regime) << ": wrote " << model_path.string() << ", " << report_path.string() << "\n";

    Json entry;
    entry["regime"] = to_string(regime);
    entry["n_stage1"] = result.report.n_stage1;
    entry["n_stage2"] = result.report.n_stage2;
    entry["n_augmented"] = result.report.n_augmented;
    const double final_loss = result.report.stages.back().epoch_losses.back();
    entry["final_loss"] = final_loss;
    entry["train"] = metrics_to_json(result.report.train_metrics);
    std::string row = pad(to_string(regime), 11) + pad(std::to_string(result.report.n_stage1), 8) +
                      pad(std::to_string(result.report.n_stage2), 8) +
                      pad(std::to_string(result.report.n_augmented), 6) + pad(fmt("%.4f", final_loss), 10) +
                      pad(fmt("%.2f", 100 * result.report.train_metrics->accuracy), 11);
    if (eval_ds) {
      const auto feats = extract_features_all(eval_ds->samples, result.model.channel_order(), ctx.exec);
      const auto preds = predict_all(result.model, feats, ctx.exec);
      const auto m = compute_metrics(preds, eval_labels, eval_ds->num_classes);
      entry["eval"] = metrics_to_json(m);
      row += pad(fmt("%.2f", 100 * m.accuracy), 10) + pad(fmt("%.2f", 100 * m.tolerance_accuracy), 11) +
             fmt("%.2f", 100 * m.weighted_f1);
    }
    comparison.push_back(std::move(entry));
    rows.push_back(std::move(row));
  }
  if (regimes.size() > 1) {
    *ctx.out << "\n" << pad("regime", 11) << pad("stage1", 8) << pad("stage2", 8) << pad("aug", 6)
             << pad("loss", 10) << pad("train[%]", 11);
    if (eval_ds) *ctx.out << pad("eval[%]", 10) << pad("+-1 [%]", 11) << "wF1[%]";
    *ctx.out << "\n";
    for (const auto& r : rows) *ctx.out << r << "\n";
    if (eval_ds)
      *ctx.out << "eval on " << eval_path.filename().string() << " against " << eval_source << " labels\n";
    Json doc;
    doc["config_hash"] = ctx.hash;
    doc["eval_dataset"] = eval_ds ? Json(eval_path.filename().string()) : Json(nullptr);
    doc["eval_label_source"] = eval_ds ? Json(eval_source) : Json(nullptr);
    doc["regimes"] = std::move(comparison);
    write_json(ctx.path("train_comparison.json"), doc);
  }
}

EvalReport cmd_evaluate(const Context& ctx, const EvaluateOptions& opts) {
  const auto checkpoint =
      or_default(opts.checkpoint, ctx.path(std::string("model_") + to_string(ctx.config.train.regime) + ".json"));
  require_file(checkpoint, "checkpoint");
  check_provenance(ctx, checkpoint);
  const auto model = model_from_json(read_json(checkpoint));
  const auto dataset_path = or_default(opts.dataset, ctx.path("test.jsonl"));
  const auto ds = load_dataset(ctx, dataset_path);
  const auto split_path = or_default(opts.split, split_for(dataset_path));
  require_file(split_path, "split file");
  check_provenance(ctx, split_path);
  const auto split = split_from_json(read_json(split_path));
  const auto sidecar = or_default(opts.sidecar, sidecar_for(dataset_path));
  if (!opts.sidecar.empty()) require_file(sidecar, "sidecar");
  if (fs::exists(sidecar)) check_provenance(ctx, sidecar);
  const auto [labels, source] = scoring_labels(ds, sidecar);

  auto report = evaluate_model(model, ds, labels, split.partition, ctx.exec);
  report.label_source = source;
  report.config_hash = ctx.hash;
  const auto output = or_default(
      opts.output, ctx.path("eval_" + checkpoint.stem().string() + "_" + dataset_path.stem().string() + ".json"));
  write_json(output, report_to_json(report));
  *ctx.out << render_table(report) << "wrote " << output.string() << "\n";
  return report;
}

void cmd_sweep(const Context& ctx, const SweepOptions& opts) {
  const auto dataset_path = or_default(opts.dataset, ctx.path("train.jsonl"));
  const auto ds = load_dataset(ctx, dataset_path);
  const auto cache_path = or_default(opts.annotations, ctx.path("annotations.jsonl"));

  if (opts.over == "grid") {
    const auto cache = load_cache(ctx, cache_path);
    const auto anns = lookup_annotations(ds, cache, active_questionnaire(ctx), ctx.config.annotator.frames);
    TrainConfig tc = ctx.config.train;
    if (tc.regime == Regime::Baseline) tc.regime = Regime::TwoStage;
    run_grid(ctx, ds, dataset_path, anns, tc, ctx.config.sweep.alphas, ctx.config.sweep.w_ambiguous,
             ctx.path("sweep_grid.json"));
    return;
  }
  if (opts.over != "frames" && opts.over != "questions")
    throw Error(ErrorKind::InvalidConfig, "sweep --over must be grid, frames or questions");

  // Oracle ablation: agreement with the scoring labels as F or Q varies.
  // Missing annotations are produced and cached, so reruns are free.
  if (fs::exists(cache_path)) check_provenance(ctx, cache_path);
  AnnotationCache cache(cache_path);
  const auto [labels, source] = scoring_labels(ds, sidecar_for(dataset_path));
  const int length = ds.samples.empty() ? 0 : static_cast<int>(ds.samples.front().signal.length());
  std::vector<std::pair<int, int>> points;  // (frames, questions)
  if (opts.over == "frames") {
    for (int f : {1, 2, 4, 8, 16, 32})
      if (f <= length) points.emplace_back(f, ctx.config.annotator.questions);
  } else {
    for (int q : {3, 6, 9, 12, 15}) points.emplace_back(ctx.config.annotator.frames, q);
  }
  Json rows = Json::array();
  *ctx.out << pad("frames", 8) << pad("questions", 11) << pad("agree[%]", 10) << "+-1 agree[%]\n";
  std::size_t failed = 0;
  for (auto [f, nq] : points) {
    const auto q = active_questionnaire(ctx, nq);
    failed += annotate_into(ctx, ds, cache, q, f).failed;
    if (failed) continue;
    const auto anns = lookup_annotations(ds, cache, q, f);
    std::vector<int> preds;
    for (const auto& a : anns) preds.push_back(a.predicted.value);
    const double agree = accuracy(preds, labels), tol = tolerance_accuracy(preds, labels, 1);
    *ctx.out << pad(std::to_string(f), 8) << pad(std::to_string(nq), 11) << pad(fmt("%.2f", 100 * agree), 10)
             << fmt("%.2f", 100 * tol) << "\n";
    rows.push_back({{"frames", f}, {"questions", nq}, {"agreement", agree}, {"tolerance_agreement", tol}});
  }
  cache.save(ctx.hash);
  if (failed)
    throw Error(ErrorKind::AnnotationUnavailable, std::to_string(failed) + " samples could not be annotated");
  Json doc;
  doc["config_hash"] = ctx.hash;
  doc["over"] = opts.over;
  doc["label_source"] = source;
  doc["points"] = std::move(rows);
  const auto output = ctx.path("sweep_" + opts.over + ".json");
  write_json(output, doc);
  *ctx.out << "agreement against " << source << " labels; wrote " << output.string() << "\n";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reliability-aware curriculum training on noisy ordinal labels"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool serial = false;
  app.add_option("--config", config_path, "pipeline configuration (JSON)");
  app.add_option("--seed", seed, "master seed; overrides the config");
  app.add_option("--out", out_dir, "artifact directory; overrides the config");
  app.add_flag("--serial", serial, "use the serial reference kernels");

  auto* gen = app.add_subcommand("generate", "write synthetic train/test datasets and pristine sidecars");

  AnnotateOptions ann_opts;
  std::vector<std::string> ann_datasets;
  std::string ann_cache;
  auto* ann = app.add_subcommand("annotate", "run the oracle over datasets into the annotation cache");
  ann->add_option("--dataset", ann_datasets, "dataset files (default: train and test)");
  ann->add_option("--cache", ann_cache, "annotation cache file");

  PartitionOptions part_opts;
  std::string part_dataset, part_ann, part_output;
  auto* part = app.add_subcommand("partition", "split a dataset into Accepted and Rejected");
  part->add_option("--dataset", part_dataset, "dataset file (default: train.jsonl)");
  part->add_option("--annotations", part_ann, "annotation cache (default: annotations.jsonl)");
  part->add_option("--output", part_output, "split file (default: <dataset>.split.json)");

  TrainOptions train_opts;
  std::string train_dataset, train_ann, train_eval;
  auto* train = app.add_subcommand("train", "train one regime or all three");
  train->add_option("--dataset", train_dataset, "training dataset (default: train.jsonl)");
  train->add_option("--annotations", train_ann, "annotation cache (default: annotations.jsonl)");
  train->add_option("--regime", train_opts.regime)
      ->check(CLI::IsMember({"baseline", "one-stage", "two-stage", "all"}));
  train->add_flag("--sweep-alpha", train_opts.sweep_alpha, "sweep alpha on a held-out validation split");
  train->add_option("--eval-dataset", train_eval, "dataset scored in the comparative table");

  EvaluateOptions eval_opts;
  std::string ev_ckpt, ev_dataset, ev_split, ev_sidecar, ev_output;
  auto* eval = app.add_subcommand("evaluate", "score a checkpoint on Full, Accepted and Rejected");
  eval->add_option("--checkpoint", ev_ckpt, "model file (default: model_<train.regime>.json)");
  eval->add_option("--dataset", ev_dataset, "dataset to score (default: test.jsonl)");
  eval->add_option("--split", ev_split, "split file (default: <dataset>.split.json)");
  eval->add_option("--sidecar", ev_sidecar, "pristine labels (default: <dataset>.latent.jsonl when present)");
  eval->add_option("--output", ev_output, "report file (default: eval_<model>_<dataset>.json)");

  SweepOptions sweep_opts;
  std::string sw_dataset, sw_ann;
  auto* sweep = app.add_subcommand("sweep", "hyperparameter grid or oracle ablation");
  sweep->add_option("--dataset", sw_dataset, "training dataset (default: train.jsonl)");
  sweep->add_option("--annotations", sw_ann, "annotation cache (default: annotations.jsonl)");
  sweep->add_option("--over", sweep_opts.over, "alpha x w_ambiguous grid, or oracle frames / question count")->check(CLI::IsMember({"grid", "frames", "questions"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code(ErrorKind::InvalidConfig);
  }

  try {
    PipelineConfig cfg;
    if (!config_path.empty()) {
      if (!fs::exists(config_path)) throw Error(ErrorKind::InvalidConfig, "config file not found: " + config_path);
      cfg = load_pipeline_config(config_path);
    }
    if (seed) cfg.apply_seed(*seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
    Context ctx(cfg, out, err);
    ctx.exec = serial ? Exec::Serial : Exec::Parallel;
    if (const char* url = std::getenv(kEndpointEnv); url && *url) ctx.endpoint_url = url;

    if (*gen) {
      cmd_generate(ctx);
    } else if (*ann) {
      for (const auto& d : ann_datasets) ann_opts.datasets.emplace_back(d);
      ann_opts.cache = ann_cache;
      cmd_annotate(ctx, ann_opts);
    } else if (*part) {
      part_opts = {part_dataset, part_ann, part_output};
      cmd_partition(ctx, part_opts);
    } else if (*train) {
      train_opts.dataset = train_dataset;
      train_opts.annotations = train_ann;
      train_opts.eval_dataset = train_eval;
      cmd_train(ctx, train_opts);
    } else if (*eval) {
      eval_opts = {ev_ckpt, ev_dataset, ev_split, ev_sidecar, ev_output};
      cmd_evaluate(ctx, eval_opts);
    } else if (*sweep) {
      sweep_opts.dataset = sw_dataset;
      sweep_opts.annotations = sw_ann;
      cmd_sweep(ctx, sweep_opts);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::ordered_json::exception& e) {
    err << "error: malformed file: " << e.what() << "\n";
    return exit_code(ErrorKind::DataIntegrity);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace relcurr::cli
