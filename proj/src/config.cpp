#include "relcurr/config.hpp"

#include <set>

#include "relcurr/errors.hpp"
#include "relcurr/io.hpp"
#include "relcurr/rng.hpp"

namespace relcurr {

namespace {

constexpr std::uint64_t kGeneratorSeed = 1;
constexpr std::uint64_t kTestGeneratorSeed = 2;
constexpr std::uint64_t kNoiseSeed = 3;
constexpr std::uint64_t kTestNoiseSeed = 4;
constexpr std::uint64_t kAnnotatorSeed = 5;
constexpr std::uint64_t kTrainSeed = 6;
constexpr std::uint64_t kAugmentSeed = 7;

void check_keys(const Json& j, const char* section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, std::string("section '") + section + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key()))
      throw Error(ErrorKind::InvalidConfig, "unknown key '" + it.key() + "' in section '" + section + "'");
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t purpose) { return derive_rng(seed, {purpose})(); }

void PipelineConfig::apply_seed(std::uint64_t new_seed) {
  seed = new_seed;
  generator.seed = derive_seed(seed, kGeneratorSeed);
  noise.seed = derive_seed(seed, kNoiseSeed);
  train.seed = derive_seed(seed, kTrainSeed);
  train.augment.seed = derive_seed(seed, kAugmentSeed);
}

GeneratorConfig PipelineConfig::test_generator() const {
  auto g = generator;
  g.n_samples = test_samples;
  g.seed = derive_seed(seed, kTestGeneratorSeed);
  g.id_prefix = "t";
  return g;
}

NoiseConfig PipelineConfig::test_noise() const {
  auto n = noise;
  n.seed = derive_seed(seed, kTestNoiseSeed);
  if (!noise_on_test) n.flip_rate = 0.0;
  return n;
}

std::uint64_t PipelineConfig::annotator_seed() const { return derive_seed(seed, kAnnotatorSeed); }

void PipelineConfig::validate() const {
  generator.validate();
  test_generator().validate();
  noise.validate();
  train.validate();
  if (annotator.frames < 1 || annotator.frames > generator.length)
    throw Error(ErrorKind::InvalidConfig, "annotator frames must lie in [1, length]");
  question_subset(default_questionnaire(), annotator.questions);
  SyntheticOracleConfig{annotator.answer_noise}.validate();
  if (annotator.max_retries < 0 || annotator.timeout_ms <= 0 || annotator.max_in_flight < 1)
    throw Error(ErrorKind::InvalidConfig, "annotator retries, timeout and concurrency must be positive");
  if (!(sweep.validation_fraction > 0.0 && sweep.validation_fraction < 1.0))
    throw Error(ErrorKind::InvalidConfig, "sweep validation_fraction must lie in (0, 1)");
  for (double a : sweep.alphas)
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::InvalidConfig, "sweep alphas must lie in (0, 1)");
  for (double w : sweep.w_ambiguous)
    if (!(w > 0.0 && w <= 1.0)) throw Error(ErrorKind::InvalidConfig, "sweep weights must lie in (0, 1]");
}

nlohmann::ordered_json train_config_to_json(const TrainConfig& t) {
  Json j;
  j["regime"] = to_string(t.regime);
  j["epochs_stage1"] = t.epochs_stage1;
  j["epochs_stage2"] = t.epochs_stage2;
  j["learning_rate"] = t.learning_rate;
  j["batch_size"] = t.batch_size;
  j["alpha"] = t.alpha;
  j["weights"] = {{"w_confident", t.weights.w_confident}, {"w_ambiguous", t.weights.w_ambiguous}};
  Json aug;
  aug["n_segments"] = t.augment.n_segments;
  aug["per_class_count"] = t.augment.per_class_count ? Json(*t.augment.per_class_count) : Json(nullptr);
  j["augment"] = std::move(aug);
  j["hidden"] = t.hidden;
  return j;
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
  Json j;
  j["seed"] = c.seed;
  Json g;
  g["n_samples"] = c.generator.n_samples;
  g["test_samples"] = c.test_samples;
  g["num_classes"] = c.generator.num_classes;
  g["length"] = c.generator.length;
  Json channels = Json::array();
  for (const auto& ch : c.generator.channels)
    channels.push_back({{"name", ch.name}, {"center", ch.center}, {"slope", ch.slope}});
  g["channels"] = std::move(channels);
  g["class_separation"] = c.generator.class_separation;
  g["observation_noise"] = c.generator.observation_noise;
  g["subject_variability"] = c.generator.subject_variability;
  g["class_proportions"] = c.generator.class_proportions;
  j["generator"] = std::move(g);
  j["noise"] = {{"flip_rate", c.noise.flip_rate}, {"model", to_string(c.noise.model)}, {"apply_to_test", c.noise_on_test}};
  Json a;
  a["frames"] = c.annotator.frames;
  a["questions"] = c.annotator.questions;
  a["answer_noise"] = c.annotator.answer_noise;
  a["questionnaire_file"] = c.annotator.questionnaire_file;
  a["max_retries"] = c.annotator.max_retries;
  a["timeout_ms"] = c.annotator.timeout_ms;
  a["max_in_flight"] = c.annotator.max_in_flight;
  j["annotator"] = std::move(a);
  j["train"] = train_config_to_json(c.train);
  j["sweep"] = {{"alphas", c.sweep.alphas},
                {"w_ambiguous", c.sweep.w_ambiguous},
                {"validation_fraction", c.sweep.validation_fraction}};
  j["out_dir"] = c.out_dir;
  return j;
}

PipelineConfig pipeline_config_from_json(const nlohmann::ordered_json& j) {
  check_keys(j, "root", {"seed", "generator", "noise", "annotator", "train", "sweep", "out_dir"});
  PipelineConfig c;
  std::uint64_t seed = c.seed;
  read(j, "seed", seed);

  if (j.contains("generator")) {
    const auto& g = j["generator"];
    check_keys(g, "generator", {"n_samples", "test_samples", "num_classes", "length", "channels", "class_separation",
                                "observation_noise", "subject_variability", "class_proportions"});
    read(g, "n_samples", c.generator.n_samples);
    read(g, "test_samples", c.test_samples);
    read(g, "num_classes", c.generator.num_classes);
    read(g, "length", c.generator.length);
    if (g.contains("channels")) {
      c.generator.channels.clear();
      for (const auto& ch : g["channels"]) {
        check_keys(ch, "generator.channels[]", {"name", "center", "slope"});
        ChannelModel m;
        read(ch, "name", m.name);
        read(ch, "center", m.center);
        read(ch, "slope", m.slope);
        c.generator.channels.push_back(m);
      }
    }
    read(g, "class_separation", c.generator.class_separation);
    read(g, "observation_noise", c.generator.observation_noise);
    read(g, "subject_variability", c.generator.subject_variability);
    read(g, "class_proportions", c.generator.class_proportions);
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    check_keys(n, "noise", {"flip_rate", "model", "apply_to_test"});
    read(n, "flip_rate", c.noise.flip_rate);
    if (n.contains("model")) c.noise.model = noise_model_from_string(n["model"].get<std::string>());
    read(n, "apply_to_test", c.noise_on_test);
  }
  if (j.contains("annotator")) {
    const auto& a = j["annotator"];
    check_keys(a, "annotator",
               {"frames", "questions", "answer_noise", "questionnaire_file", "max_retries", "timeout_ms", "max_in_flight"});
    read(a, "frames", c.annotator.frames);
    read(a, "questions", c.annotator.questions);
    read(a, "answer_noise", c.annotator.answer_noise);
    read(a, "questionnaire_file", c.annotator.questionnaire_file);
    read(a, "max_retries", c.annotator.max_retries);
    read(a, "timeout_ms", c.annotator.timeout_ms);
    read(a, "max_in_flight", c.annotator.max_in_flight);
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    check_keys(t, "train", {"regime", "epochs_stage1", "epochs_stage2", "learning_rate", "batch_size", "alpha",
                            "weights", "augment", "hidden"});
    if (t.contains("regime")) c.train.regime = regime_from_string(t["regime"].get<std::string>());
    read(t, "epochs_stage1", c.train.epochs_stage1);
    read(t, "epochs_stage2", c.train.epochs_stage2);
    read(t, "learning_rate", c.train.learning_rate);
    read(t, "batch_size", c.train.batch_size);
    read(t, "alpha", c.train.alpha);
    read(t, "hidden", c.train.hidden);
    if (t.contains("weights")) {
      check_keys(t["weights"], "train.weights", {"w_confident", "w_ambiguous"});
      read(t["weights"], "w_confident", c.train.weights.w_confident);
      read(t["weights"], "w_ambiguous", c.train.weights.w_ambiguous);
    }
    if (t.contains("augment")) {
      const auto& a = t["augment"];
      check_keys(a, "train.augment", {"n_segments", "per_class_count"});
      read(a, "n_segments", c.train.augment.n_segments);
      if (a.contains("per_class_count")) {
        if (a["per_class_count"].is_null()) c.train.augment.per_class_count.reset();
        else {
          int n = 0;
          read(a, "per_class_count", n);
          c.train.augment.per_class_count = n;
        }
      }
    }
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, "sweep", {"alphas", "w_ambiguous", "validation_fraction"});
    read(s, "alphas", c.sweep.alphas);
    read(s, "w_ambiguous", c.sweep.w_ambiguous);
    read(s, "validation_fraction", c.sweep.validation_fraction);
  }
  read(j, "out_dir", c.out_dir);
  c.apply_seed(seed);
  c.validate();
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
  }
  return pipeline_config_from_json(j);
}

std::string config_hash(const PipelineConfig& cfg) {
  auto j = to_json(cfg);
  j.erase("out_dir");
  return hash_hex(j.dump());
}

}  // namespace relcurr
