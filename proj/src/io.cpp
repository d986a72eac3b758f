#include "relcurr/io.hpp"

#include <fstream>
#include <sstream>

#include "relcurr/errors.hpp"

namespace relcurr {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::vector<Json> read_jsonl(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::vector<Json> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::DataIntegrity, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void write_jsonl(const fs::path& path, const std::vector<Json>& rows) {
  std::string text;
  for (const auto& r : rows) {
    text += r.dump();
    text += '\n';
  }
  write_text(path, text);
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::DataIntegrity, path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::DataIntegrity, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::DataIntegrity, std::string("bad field '") + key + "': " + e.what());
  }
}

/// Malformed documents surface as data-integrity errors, not library exceptions.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::DataIntegrity, std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

Json sample_to_json(const LabeledSample& s, int num_classes, bool include_latent, const std::string& config_hash) {
  Json j;
  j["id"] = s.id;
  j["label"] = s.label;
  j["num_classes"] = num_classes;
  Json channels = Json::object();
  for (const auto& c : s.signal.channels) channels[c.name] = c.values;
  j["channels"] = std::move(channels);
  if (include_latent && s.latent) {
    Json params = Json::object();
    for (const auto& [k, v] : s.latent->params) params[k] = v;
    j["latent"] = {{"level", s.latent->level}, {"params", std::move(params)}};
  }
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j;
}

LabeledSample sample_from_json(const Json& j, int* num_classes) {
  return guarded("sample", [&] {
    LabeledSample s;
    s.id = field<std::string>(j, "id");
    s.label = field<int>(j, "label");
    if (num_classes) *num_classes = field<int>(j, "num_classes");
    if (!j.contains("channels")) throw Error(ErrorKind::DataIntegrity, "sample '" + s.id + "': missing channels");
    const auto& channels = j.at("channels");
    if (!channels.is_object()) throw Error(ErrorKind::DataIntegrity, "sample '" + s.id + "': channels must be an object");
    for (auto it = channels.begin(); it != channels.end(); ++it)
      s.signal.channels.push_back({it.key(), it.value().get<std::vector<double>>()});
    if (j.contains("latent")) {
      LatentInfo latent;
      const auto& lat = j.at("latent");
      latent.level = field<int>(lat, "level");
      const auto& params = lat.at("params");
      for (auto it = params.begin(); it != params.end(); ++it)
        latent.params[it.key()] = it.value().get<double>();
      s.latent = latent;
    }
    return s;
  });
}

void write_dataset(const fs::path& path, const Dataset& ds, bool include_latent, const std::string& config_hash) {
  std::vector<Json> rows;
  rows.reserve(ds.size());
  for (const auto& s : ds.samples) rows.push_back(sample_to_json(s, ds.num_classes, include_latent, config_hash));
  write_jsonl(path, rows);
}

Dataset read_dataset(const fs::path& path) {
  Dataset ds;
  bool first = true;
  for (const auto& row : read_jsonl(path)) {
    int k = 0;
    ds.samples.push_back(sample_from_json(row, &k));
    if (first) ds.num_classes = k;
    else if (k != ds.num_classes)
      throw Error(ErrorKind::DataIntegrity, path.string() + ": inconsistent num_classes across lines");
    first = false;
    const auto& s = ds.samples.back();
    if (s.label < 0 || s.label >= k)
      throw Error(ErrorKind::DataIntegrity, "sample '" + s.id + "' label outside class range");
  }
  return ds;
}

std::optional<std::string> file_config_hash(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line) || line.empty()) return std::nullopt;
  try {
    const auto j = Json::parse(line);
    if (j.is_object() && j.contains("config_hash")) return j["config_hash"].get<std::string>();
  } catch (const Json::exception&) {
  }
  return std::nullopt;
}

void write_sidecar(const fs::path& path, const Dataset& generated, const std::vector<int>& pristine,
                   const std::string& config_hash) {
  if (pristine.size() != generated.size())
    throw Error(ErrorKind::InvalidInput, "pristine label count does not match the dataset");
  std::vector<Json> rows;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const auto& s = generated.samples[i];
    Json j;
    j["id"] = s.id;
    j["label"] = pristine[i];
    if (s.latent) {
      Json params = Json::object();
      for (const auto& [k, v] : s.latent->params) params[k] = v;
      j["latent"] = {{"level", s.latent->level}, {"params", std::move(params)}};
    }
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    rows.push_back(std::move(j));
  }
  write_jsonl(path, rows);
}

PristineLabels read_sidecar(const fs::path& path) {
  PristineLabels out;
  for (const auto& row : read_jsonl(path)) out.by_id[field<std::string>(row, "id")] = field<int>(row, "label");
  return out;
}

Json annotation_to_json(const AnnotationResult& a, const std::string& config_hash) {
  Json j;
  j["sample_id"] = a.sample_id;
  Json answers = Json::array();
  for (const auto& ans : a.answers) answers.push_back({{"id", ans.question_id}, {"value", ans.value}});
  j["answers"] = std::move(answers);
  j["predicted"] = a.predicted.value;
  j["num_classes"] = a.predicted.num_classes;
  j["frames_used"] = a.frames_used;
  j["questions_used"] = a.questions_used;
  j["questionnaire_version"] = a.questionnaire_version;
  if (!config_hash.empty()) j["config_hash"] = config_hash;
  return j;
}

AnnotationResult annotation_from_json(const Json& j) {
  return guarded("annotation", [&] {
    AnnotationResult a;
    a.sample_id = field<std::string>(j, "sample_id");
    for (const auto& ans : j.at("answers")) a.answers.push_back({field<std::string>(ans, "id"), field<bool>(ans, "value")});
    a.predicted = OrdinalLabel::make(field<int>(j, "predicted"), field<int>(j, "num_classes"));
    a.frames_used = field<int>(j, "frames_used");
    a.questions_used = field<std::vector<std::string>>(j, "questions_used");
    a.questionnaire_version = field<int>(j, "questionnaire_version");
    if (a.answers.size() != a.questions_used.size())
      throw Error(ErrorKind::DataIntegrity, "annotation for '" + a.sample_id + "' answers do not cover questions_used");
    for (std::size_t i = 0; i < a.answers.size(); ++i)
      if (a.answers[i].question_id != a.questions_used[i])
        throw Error(ErrorKind::DataIntegrity, "annotation for '" + a.sample_id + "' answers do not cover questions_used");
    return a;
  });
}

Json questionnaire_to_json(const Questionnaire& q) {
  Json j;
  j["version"] = q.version;
  Json qs = Json::array();
  for (const auto& x : q.questions)
    qs.push_back({{"id", x.id}, {"category", to_string(x.category)}, {"text", x.text}, {"polarity", to_string(x.polarity)}});
  j["questions"] = std::move(qs);
  return j;
}

Questionnaire questionnaire_from_json(const Json& j) {
  return guarded("questionnaire", [&] {
    Questionnaire q;
    q.version = field<int>(j, "version");
    for (const auto& x : j.at("questions"))
      q.questions.push_back({field<std::string>(x, "id"), category_from_string(field<std::string>(x, "category")),
                             field<std::string>(x, "text"), polarity_from_string(field<std::string>(x, "polarity"))});
    q.validate();
    return q;
  });
}

Json split_to_json(const SplitFile& s) {
  Json j;
  j["config_hash"] = s.config_hash;
  j["frames"] = s.frames;
  j["questions"] = s.questions;
  j["accepted"] = s.partition.accepted;
  j["rejected"] = s.partition.rejected;
  j["discrepancy_histogram"] = s.histogram;
  return j;
}

SplitFile split_from_json(const Json& j) {
  return guarded("split file", [&] {
    SplitFile s;
    s.config_hash = field<std::string>(j, "config_hash");
    s.frames = field<int>(j, "frames");
    s.questions = field<int>(j, "questions");
    s.partition.accepted = field<std::vector<std::string>>(j, "accepted");
    s.partition.rejected = field<std::vector<std::string>>(j, "rejected");
    s.histogram = field<std::vector<int>>(j, "discrepancy_histogram");
    return s;
  });
}

}  // namespace relcurr
