#include <doctest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "oracles.hpp"

using namespace relcurr;
using Json = nlohmann::ordered_json;

namespace {

/// Local stand-in for an annotation endpoint. `mode` selects the reply.
class Stub {
 public:
  std::atomic<int> requests{0};
  std::string mode = "echo";
  int failures_before_success = 0;

  Stub() {
    server_.Post("/annotate", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = ++requests;
      const auto j = Json::parse(req.body);
      last_round = j["round"].get<int>();
      last_request = req.body;
      if (n <= failures_before_success || mode == "down") {
        res.status = 503;
        return;
      }
      if (mode == "bad-request") {
        res.status = 400;
        res.set_content("nope", "text/plain");
        return;
      }
      if (j["round"] == 1) {
        if (mode == "not-json") {
          res.set_content("{answers: oops", "application/json");
          return;
        }
        Json answers = Json::array();
        for (const auto& q : j["questions"]) {
          Json v = mode == "malformed" ? Json("yes") : Json(q["id"].get<std::string>() == "Q2");
          answers.push_back({{"id", q["id"]}, {"value", v}});
        }
        res.set_content(Json{{"answers", answers}}.dump(), "application/json");
      } else {
        const int level = mode == "level5" ? 5 : 2;
        res.set_content(Json{{"level", level}}.dump(), "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Stub() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/annotate"; }

  std::atomic<int> last_round{0};
  std::string last_request;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

EndpointConfig endpoint(const std::string& url) {
  EndpointConfig e;
  e.url = url;
  e.max_retries = 2;
  e.timeout_ms = 2000;
  return e;
}

const Questionnaire kQ = question_subset(default_questionnaire(), 6);

}  // namespace

TEST_CASE("frame references and instruction") {
  auto refs = frame_refs({"s1", 100}, 2);
  CHECK(refs == std::vector<std::string>{"s1#0", "s1#99"});
  CHECK(classification_instruction(4).find('3') != std::string::npos);
  CHECK_FALSE(classification_instruction(2).empty());
}

TEST_CASE("endpoint validation") {
  CHECK_ERROR_KIND(endpoint("https://example.org").validate(), ErrorKind::InvalidConfig);
  CHECK_ERROR_KIND(endpoint("").validate(), ErrorKind::InvalidConfig);
  auto e = endpoint("http://127.0.0.1:1/x");
  e.max_in_flight = 0;
  CHECK_ERROR_KIND(e.validate(), ErrorKind::InvalidConfig);
}

TEST_CASE("healthy endpoint round-trips through the cache") {
  Stub stub;
  const auto dir = fixture::scratch("remote_echo");
  AnnotationCache cache(dir / "cache.jsonl");
  RemoteAnnotator remote(endpoint(stub.url()), cache);
  auto a = remote.annotate({"s7", 64}, kQ, 8);
  CHECK(a.predicted.value == 2);
  CHECK(a.answers.size() == 6);
  CHECK(a.questions_used == kQ.ids());
  for (const auto& ans : a.answers) CHECK(ans.value == (ans.question_id == "Q2"));
  CHECK(remote.network_calls() == 2);
  CHECK(stub.last_round == 2);
  const auto last = Json::parse(stub.last_request);
  CHECK(last["frame_refs"].size() == 8);
  CHECK(last["questions"][0]["id"] == "level");

  // same key: served from the cache, no traffic
  auto again = remote.annotate({"s7", 64}, kQ, 8);
  CHECK(again == a);
  CHECK(remote.network_calls() == 2);
  CHECK(stub.requests == 2);

  cache.save();
  AnnotationCache reloaded(dir / "cache.jsonl");
  CHECK(reloaded.size() == 1);
  CHECK(*reloaded.get(key_of(a)) == a);

  // a different frame count is a different key
  (void)remote.annotate({"s7", 64}, kQ, 4);
  CHECK(remote.network_calls() == 4);
}

TEST_CASE("out-of-range level is a protocol error") {
  Stub stub;
  stub.mode = "level5";
  AnnotationCache cache;
  RemoteAnnotator remote(endpoint(stub.url()), cache);
  try {
    remote.annotate({"s1", 32}, kQ, 8);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Protocol);
    CHECK(e.payload().find("5") != std::string::npos);
  }
  CHECK(cache.size() == 0);
}

TEST_CASE("malformed payloads are protocol errors with the raw body") {
  for (const char* mode : {"malformed", "not-json"}) {
    Stub stub;
    stub.mode = mode;
    AnnotationCache cache;
    RemoteAnnotator remote(endpoint(stub.url()), cache);
    try {
      remote.annotate({"s1", 32}, kQ, 8);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Protocol);
      CHECK_FALSE(e.payload().empty());
    }
    CHECK(stub.requests == 1);  // no retry on a bad reply
  }
}

TEST_CASE("client errors are not retried") {
  Stub stub;
  stub.mode = "bad-request";
  AnnotationCache cache;
  RemoteAnnotator remote(endpoint(stub.url()), cache);
  CHECK_ERROR_KIND(remote.annotate({"s1", 32}, kQ, 8), ErrorKind::Protocol);
  CHECK(stub.requests == 1);
}

TEST_CASE("transient server errors are retried") {
  Stub stub;
  stub.failures_before_success = 2;
  AnnotationCache cache;
  RemoteAnnotator remote(endpoint(stub.url()), cache);
  auto a = remote.annotate({"s1", 32}, kQ, 8);
  CHECK(a.predicted.value == 2);
  CHECK(stub.requests == 4);
}

TEST_CASE("persistent failure is annotation-unavailable") {
  {
    Stub stub;
    stub.mode = "down";
    AnnotationCache cache;
    RemoteAnnotator remote(endpoint(stub.url()), cache);
    CHECK_ERROR_KIND(remote.annotate({"s1", 32}, kQ, 8), ErrorKind::AnnotationUnavailable);
    CHECK(stub.requests == 3);
  }
  // nothing listening
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  AnnotationCache cache;
  auto e = endpoint("http://127.0.0.1:" + std::to_string(port) + "/annotate");
  e.max_retries = 1;
  e.timeout_ms = 300;
  CHECK_ERROR_KIND(remote_annotate(e, cache, {"s1", 32}, kQ, 8), ErrorKind::AnnotationUnavailable);
}

TEST_CASE("batch annotation collects failures and keeps going") {
  Stub stub;
  AnnotationCache cache;
  RemoteAnnotator remote(endpoint(stub.url()), cache);
  std::vector<SampleRef> refs;
  for (int i = 0; i < 12; ++i) refs.push_back({"s" + std::to_string(i), i == 5 ? 3 : 32});  // s5 too short
  auto out = remote.annotate_many(refs, kQ, 8);
  CHECK(out.fetched == 11);
  REQUIRE(out.failures.size() == 1);
  CHECK(out.failures[0].rfind("s5:", 0) == 0);
  CHECK_FALSE(out.results[5].has_value());
  CHECK(out.results[4]->sample_id == "s4");
  CHECK(cache.size() == 11);

  auto again = remote.annotate_many(refs, kQ, 8);
  CHECK(again.fetched == 0);
  CHECK(again.failures.size() == 1);
}

TEST_CASE("cache is last-write-wins and saves in key order") {
  const auto dir = fixture::scratch("cache_order");
  AnnotationCache cache(dir / "c.jsonl");
  auto a = fixture::annotation("b", 1, 4);
  auto b = fixture::annotation("a", 2, 4);
  a.questions_used = b.questions_used = {};
  cache.put(a);
  cache.put(b);
  a.predicted = OrdinalLabel::make(3, 4);
  cache.put(a);
  CHECK(cache.size() == 2);
  CHECK(cache.get(key_of(a))->predicted.value == 3);
  cache.save("h1");
  const auto text = read_text(dir / "c.jsonl");
  CHECK(text.find("\"a\"") < text.find("\"b\""));
  AnnotationCache back(dir / "c.jsonl");
  back.save_as(dir / "d.jsonl", "h1");
  CHECK(read_text(dir / "d.jsonl") == text);
}
