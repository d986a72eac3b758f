#include "relcurr/remote_annotator.hpp"

#include <algorithm>
#include <thread>

#include <httplib.h>

#include "relcurr/errors.hpp"
#include "relcurr/io.hpp"

namespace relcurr {

void EndpointConfig::validate() const {
  if (url.rfind("http://", 0) != 0)
    throw Error(ErrorKind::InvalidConfig, "annotator endpoint must be an http:// URL, got '" + url + "'");
  if (num_classes < 2) throw Error(ErrorKind::InvalidConfig, "num_classes must be >= 2");
  if (max_retries < 0 || timeout_ms <= 0 || max_in_flight < 1)
    throw Error(ErrorKind::InvalidConfig, "endpoint retries, timeout and concurrency must be positive");
}

std::string classification_instruction(int num_classes) {
  std::string scale;
  if (num_classes == 4) {
    scale = "0 - Not engaged, 1 - Low engagement, 2 - Moderate engagement, 3 - High engagement";
  } else {
    scale = "an integer from 0 (lowest engagement) to " + std::to_string(num_classes - 1) + " (highest engagement)";
  }
  return "Based on your analysis and observations, classify the engagement level in the new image. "
         "Output only the engagement level as a single number: " +
         scale + ". Provide no additional text or explanation in the output.";
}

std::vector<std::string> frame_refs(const SampleRef& ref, int frames) {
  std::vector<std::string> out;
  for (int idx : sample_frames(ref.length, frames)) out.push_back(ref.sample_id + "#" + std::to_string(idx));
  return out;
}

RemoteAnnotator::RemoteAnnotator(EndpointConfig endpoint, AnnotationCache& cache)
    : endpoint_(std::move(endpoint)), cache_(cache) {
  endpoint_.validate();
  const auto scheme_end = endpoint_.url.find("://") + 3;
  const auto path_start = endpoint_.url.find('/', scheme_end);
  base_ = endpoint_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint_.url.substr(path_start);
}

std::string RemoteAnnotator::post(const std::string& body) {
  std::string last_error;
  for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    ++calls_;
    httplib::Client client(base_);
    const auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(path_, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw Error(ErrorKind::Protocol, "annotator replied HTTP " + std::to_string(res->status), res->body);
    return res->body;
  }
  throw Error(ErrorKind::AnnotationUnavailable, "annotator at " + endpoint_.url + " unreachable after " +
                                                    std::to_string(endpoint_.max_retries + 1) +
                                                    " attempts: " + last_error);
}

namespace {

Json parse_reply(const std::string& body) {
  try {
    auto j = Json::parse(body);
    if (!j.is_object()) throw Error(ErrorKind::Protocol, "annotator reply is not a JSON object", body);
    return j;
  } catch (const Json::parse_error&) {
    throw Error(ErrorKind::Protocol, "annotator reply is not valid JSON", body);
  }
}

}  // namespace

AnnotationResult RemoteAnnotator::annotate(const SampleRef& ref, const Questionnaire& q, int frames) {
  q.validate();
  const auto key = make_key(ref.sample_id, frames, q);
  if (auto hit = cache_.get(key)) return *hit;

  const auto refs = frame_refs(ref, frames);
  Json request;
  request["sample_id"] = ref.sample_id;
  request["frame_refs"] = refs;
  request["round"] = 1;
  Json questions = Json::array();
  for (const auto& x : q.questions) questions.push_back({{"id", x.id}, {"text", x.text}});
  request["questions"] = std::move(questions);

  const auto body1 = post(request.dump());
  const auto reply1 = parse_reply(body1);
  if (!reply1.contains("answers") || !reply1["answers"].is_array())
    throw Error(ErrorKind::Protocol, "round-1 reply lacks an answers array", body1);
  std::map<std::string, bool> answered;
  for (const auto& a : reply1["answers"]) {
    if (!a.is_object() || !a.contains("id") || !a["id"].is_string() || !a.contains("value") || !a["value"].is_boolean())
      throw Error(ErrorKind::Protocol, "round-1 answer must be {id: string, value: boolean}", body1);
    const auto id = a["id"].get<std::string>();
    if (!q.find(id)) throw Error(ErrorKind::Protocol, "round-1 answer for unknown question '" + id + "'", body1);
    if (!answered.emplace(id, a["value"].get<bool>()).second)
      throw Error(ErrorKind::Protocol, "round-1 answered question '" + id + "' twice", body1);
  }
  if (answered.size() != q.questions.size())
    throw Error(ErrorKind::Protocol, "round-1 reply does not answer every question", body1);

  request["round"] = 2;
  request["questions"] = Json::array({{{"id", "level"}, {"text", classification_instruction(endpoint_.num_classes)}}});
  const auto body2 = post(request.dump());
  const auto reply2 = parse_reply(body2);
  if (!reply2.contains("level") || !reply2["level"].is_number_integer())
    throw Error(ErrorKind::Protocol, "round-2 reply must carry an integer level", body2);
  const auto level = reply2["level"].get<long long>();
  if (level < 0 || level >= endpoint_.num_classes)
    throw Error(ErrorKind::Protocol, "round-2 level " + std::to_string(level) + " outside [0, " +
                                         std::to_string(endpoint_.num_classes - 1) + "]",
                body2);

  AnnotationResult result;
  result.sample_id = ref.sample_id;
  for (const auto& x : q.questions) {
    result.answers.push_back({x.id, answered.at(x.id)});
    result.questions_used.push_back(x.id);
  }
  result.predicted = OrdinalLabel::make(static_cast<int>(level), endpoint_.num_classes);
  result.frames_used = frames;
  result.questionnaire_version = q.version;
  cache_.put(result);
  return result;
}

RemoteAnnotator::BatchOutcome RemoteAnnotator::annotate_many(std::span<const SampleRef> refs, const Questionnaire& q,
                                                             int frames) {
  BatchOutcome out;
  out.results.resize(refs.size());
  std::vector<std::string> errors(refs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (auto hit = cache_.get(make_key(refs[i].sample_id, frames, q))) out.results[i] = std::move(*hit);
    else pending.push_back(i);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      const auto i = pending[k];
      try {
        out.results[i] = annotate(refs[i], q, frames);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  {
    const auto n_workers = std::min<std::size_t>(endpoint_.max_in_flight, pending.size());
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  }
  for (auto i : pending) {
    if (errors[i].empty()) ++out.fetched;
    else out.failures.push_back(refs[i].sample_id + ": " + errors[i]);
  }
  return out;
}

AnnotationResult remote_annotate(const EndpointConfig& endpoint, AnnotationCache& cache, const SampleRef& ref,
                                 const Questionnaire& q, int frames) {
  return RemoteAnnotator(endpoint, cache).annotate(ref, q, frames);
}

}  // namespace relcurr
