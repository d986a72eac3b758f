#include <doctest.h>

#include "oracles.hpp"

using namespace relcurr;

TEST_CASE("dataset files round-trip byte for byte") {
  const auto dir = fixture::scratch("io_dataset");
  GeneratorConfig g;
  g.n_samples = 30;
  g.length = 16;
  const auto ds = generate(g);
  write_dataset(dir / "a.jsonl", ds, true, "h1");
  const auto back = read_dataset(dir / "a.jsonl");
  CHECK(back == ds);
  write_dataset(dir / "b.jsonl", back, true, "h1");
  CHECK(read_text(dir / "a.jsonl") == read_text(dir / "b.jsonl"));
  CHECK(file_config_hash(dir / "a.jsonl") == std::optional<std::string>("h1"));

  write_dataset(dir / "blind.jsonl", ds, false);
  for (const auto& s : read_dataset(dir / "blind.jsonl").samples) CHECK_FALSE(s.latent.has_value());
  CHECK(file_config_hash(dir / "blind.jsonl") == std::nullopt);
}

TEST_CASE("dataset reader rejects inconsistent files") {
  const auto dir = fixture::scratch("io_bad");
  write_text(dir / "k.jsonl",
             "{\"id\":\"a\",\"label\":0,\"num_classes\":4,\"channels\":{\"c\":[1,2]}}\n"
             "{\"id\":\"b\",\"label\":0,\"num_classes\":3,\"channels\":{\"c\":[1,2]}}\n");
  CHECK_ERROR_KIND(read_dataset(dir / "k.jsonl"), ErrorKind::DataIntegrity);
  write_text(dir / "l.jsonl", "{\"id\":\"a\",\"label\":7,\"num_classes\":4,\"channels\":{\"c\":[1,2]}}\n");
  CHECK_ERROR_KIND(read_dataset(dir / "l.jsonl"), ErrorKind::DataIntegrity);
  write_text(dir / "m.jsonl", "{\"id\":\"a\",\"label\":1,\"num_classes\":4}\n");
  CHECK_ERROR_KIND(read_dataset(dir / "m.jsonl"), ErrorKind::DataIntegrity);
  write_text(dir / "n.jsonl", "not json\n");
  CHECK_ERROR_KIND(read_dataset(dir / "n.jsonl"), ErrorKind::DataIntegrity);
  CHECK_ERROR_KIND(read_dataset(dir / "missing.jsonl"), ErrorKind::Io);
}

TEST_CASE("sidecar keeps pristine labels") {
  const auto dir = fixture::scratch("io_sidecar");
  GeneratorConfig g;
  g.n_samples = 50;
  const auto ds = generate(g);
  auto noisy = inject_label_noise(ds, {});
  write_sidecar(dir / "s.jsonl", noisy.dataset, noisy.pristine, "h");
  const auto back = read_sidecar(dir / "s.jsonl");
  for (std::size_t i = 0; i < ds.samples.size(); ++i) CHECK(back.by_id.at(ds.samples[i].id) == ds.samples[i].label);
}

TEST_CASE("annotations round-trip") {
  GeneratorConfig g;
  g.n_samples = 5;
  const auto ds = generate(g);
  const auto anns = SyntheticAnnotator(g).annotate_all(ds, question_subset(default_questionnaire(), 9), 4, 1);
  for (const auto& a : anns) {
    CHECK(a.questions_used.size() == 9);
    const auto j = annotation_to_json(a, "h");
    CHECK(annotation_from_json(j) == a);
    CHECK(annotation_to_json(annotation_from_json(j), "h").dump() == j.dump());
  }
  auto j = annotation_to_json(anns[0]);
  j["answers"].erase(0);
  CHECK_ERROR_KIND(annotation_from_json(j), ErrorKind::DataIntegrity);
}

TEST_CASE("questionnaire round-trip") {
  const auto q = default_questionnaire();
  const auto j = questionnaire_to_json(q);
  CHECK(questionnaire_from_json(j) == q);
  CHECK(questionnaire_to_json(questionnaire_from_json(j)).dump() == j.dump());
}

TEST_CASE("split file round-trip") {
  SplitFile s{{{"a", "c"}, {"b"}}, {2, 1, 0, 0}, 8, 15, "h"};
  const auto j = split_to_json(s);
  CHECK(split_from_json(j) == s);
  CHECK(split_to_json(split_from_json(j)).dump() == j.dump());
}

TEST_CASE("pipeline config") {
  PipelineConfig c;
  CHECK_NOTHROW(c.validate());
  const auto j = to_json(c);
  const auto back = pipeline_config_from_json(j);
  CHECK(to_json(back).dump() == j.dump());
  CHECK(config_hash(back) == config_hash(c));

  auto other = c;
  other.apply_seed(2);
  CHECK(config_hash(other) != config_hash(c));
  CHECK(other.generator.seed != c.generator.seed);
  CHECK(other.test_generator().seed != other.generator.seed);
  CHECK(other.test_generator().id_prefix != other.generator.id_prefix);

  auto moved = c;
  moved.out_dir = "elsewhere";
  CHECK(config_hash(moved) == config_hash(c));

  auto partial = pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"train": {"alpha": 0.8}})"));
  CHECK(partial.train.alpha == 0.8);
  CHECK(partial.train.epochs_stage1 == 60);

  CHECK_ERROR_KIND(pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"extra": 1})")),
                   ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"train": {"lr": 1}})")),
                   ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"generator": {"num_classes": 1}})")),
                   ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"annotator": {"questions": 4}})")),
                   ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"train": {"alpha": "high"}})")),
                   ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(pipeline_config_from_json(nlohmann::ordered_json::parse(R"({"noise": {"model": "x"}})")),
                   ErrorKind::InvalidConfig);
}

TEST_CASE("error kinds map to exit codes") {
  CHECK(exit_code(ErrorKind::InvalidConfig) == 2);
  CHECK(exit_code(ErrorKind::DataIntegrity) == 3);
  CHECK(exit_code(ErrorKind::TrainingDiverged) == 4);
  CHECK(exit_code(ErrorKind::AnnotationUnavailable) == 5);
  CHECK(exit_code(ErrorKind::Io) == 1);
}
