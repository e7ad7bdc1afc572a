// Copyright 2026 The jbdetect Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <functional>
#include <cstdlib>
#include <json.hpp>
#include <thread>

#include "jbdetect/error.hpp"
#include "jbdetect/remote_backends.hpp"

using namespace jbdetect;
using nlohmann::json;

namespace {

// A local model server on an ephemeral port, stopped on destruction.
class FakeServer {
 public:
  FakeServer() {
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth_ = req.get_header_value("Authorization");
      const auto body = json::parse(req.body);
      json out{{"embeddings", json::array()}};
      for (const auto& t : body["texts"]) {
        const double n = static_cast<double>(t.get<std::string>().size());
        out["embeddings"].push_back({n, 1.0, -1.0});
      }
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body);
      const double s = body["candidate"] == body["reference"] ? 1.0 : -0.25;
      res.set_content(json{{"score", s}}.dump(), "application/json");
    });
    server_.Post("/classify", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body);
      // Sorted by score, like typical zero-shot servers.
      json out{{"sequence", body["sequence"]},
               {"labels", {"informative", "refusal", "apology"}},
               {"scores", {0.6, 0.3, 0.1}}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
      last_body_ = req.body;
      res.set_content(json{{"text", "I cannot help with that."}}.dump(), "application/json");
    });
    server_.Post("/chat", [](const httplib::Request&, httplib::Response& res) {
      json out{{"choices", {{{"message", {{"role", "assistant"}, {"content", "chat reply"}}}}}}};
      res.set_content(out.dump(), "application/json");
    });
    server_.Post("/busy", [this](const httplib::Request&, httplib::Response& res) {
      ++busy_hits_;
      res.status = 429;
      res.set_header("Retry-After", "0");
    });
    server_.Post("/flaky", [this](const httplib::Request&, httplib::Response& res) {
      if (flaky_hits_++ == 0) {
        res.status = 429;
        return;
      }
      res.set_content(json{{"score", 0.5}}.dump(), "application/json");
    });
    server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("not json", "text/plain");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

  std::string last_auth_;
  std::string last_body_;
  std::atomic<int> busy_hits_{0};
  std::atomic<int> flaky_hits_{0};

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

RemoteOptions options_for(const FakeServer& s) {
  RemoteOptions o;
  o.embed_url = s.url("/embed");
  o.score_url = s.url("/score");
  o.classify_url = s.url("/classify");
  o.generate_url = s.url("/generate");
  o.model = "test-model";
  o.api_key_env = "JBDETECT_TEST_KEY";
  o.timeout_seconds = 5;
  o.max_backoff_seconds = 0.01;
  return o;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("remote embedder round trip and dimension probe") {
  FakeServer server;
  ::setenv("JBDETECT_TEST_KEY", "secret", 1);
  const auto b = make_remote_backends(options_for(server));
  CHECK(b.embedder->dim() == 3);
  const auto v = b.embedder->embed_one("hello");
  CHECK(v.values == std::vector<double>{5.0, 1.0, -1.0});
  CHECK(server.last_auth_ == "Bearer secret");
  ::unsetenv("JBDETECT_TEST_KEY");
  b.embedder->embed_one("hi");
  CHECK(server.last_auth_.empty());
}

TEST_CASE("remote embedder truncates to the input limit") {
  FakeServer server;
  auto opt = options_for(server);
  opt.max_input_words = 2;
  const RemoteEmbedder e(opt);
  CHECK(e.embed_one("aaa bbb ccc").values.front() == 7.0);  // "aaa bbb"
}

TEST_CASE("remote scorer and classifier") {
  FakeServer server;
  const auto b = make_remote_backends(options_for(server));
  CHECK(b.scorer->score("x y", "x y") == 1.0);
  CHECK(b.scorer->score("x", "y") == -0.25);
  const std::vector<std::string> labels{"refusal", "apology", "informative"};
  const auto d = b.classifier->classify("Some sentence.", labels);
  REQUIRE(d.size() == 3);
  CHECK(d.entries()[0].first == "refusal");  // request order restored
  CHECK(d.at("refusal") == 0.3);
  CHECK(d.argmax().first == "informative");
}

TEST_CASE("remote generator sends the pinned generation settings") {
  FakeServer server;
  const auto b = make_remote_backends(options_for(server));
  CHECK(b.generator->generate("hello", GenerationConfig{}) == "I cannot help with that.");
  const auto sent = json::parse(server.last_body_);
  CHECK(sent["model"] == "test-model");
  CHECK(sent["temperature"] == 1.0);
  CHECK(sent["top_p"] == 0.9);
  CHECK(sent["max_tokens"] == 256);
  CHECK(sent["seed"] == 47);
  CHECK(sent["messages"][0]["content"] == "hello");

  auto opt = options_for(server);
  opt.generate_url = server.url("/chat");
  CHECK(RemoteGenerator(opt).generate("hi", GenerationConfig{}) == "chat reply");
}

TEST_CASE("rate limiting retries, then raises RateLimitedError") {
  FakeServer server;
  auto opt = options_for(server);
  opt.max_retries = 2;
  opt.score_url = server.url("/busy");
  const RemotePairScorer busy(opt);
  try {
    busy.score("a", "b");
    FAIL("expected rate limit");
  } catch (const RateLimitedError& e) {
    CHECK(e.code() == ErrorCode::kRateLimited);
  }
  CHECK(server.busy_hits_ == 3);

  opt.score_url = server.url("/flaky");
  CHECK(RemotePairScorer(opt).score("a", "b") == 0.5);
}

TEST_CASE("server and connection failures are backend-unavailable") {
  FakeServer server;
  auto opt = options_for(server);
  opt.score_url = server.url("/broken");
  CHECK(code_of([&] { RemotePairScorer(opt).score("a", "b"); }) == ErrorCode::kBackendUnavailable);
  opt.score_url = server.url("/garbage");
  CHECK(code_of([&] { RemotePairScorer(opt).score("a", "b"); }) == ErrorCode::kBackendUnavailable);

  RemoteOptions dead;
  dead.generate_url = "http://127.0.0.1:1/generate";
  dead.timeout_seconds = 2;
  CHECK(code_of([&] { RemoteGenerator(dead).generate("hi", GenerationConfig{}); }) ==
        ErrorCode::kBackendUnavailable);
}

TEST_CASE("unset endpoints leave the backend slot empty") {
  RemoteOptions o;
  o.score_url = "http://127.0.0.1:1/score";
  const auto b = make_remote_backends(o);
  CHECK(b.embedder == nullptr);
  CHECK(b.scorer != nullptr);
  CHECK(code_of([&] { b.require_generator(); }) == ErrorCode::kBackendUnavailable);
  o.score_url = "not a url";
  CHECK(code_of([&] { RemotePairScorer(o).score("a", "b"); }) == ErrorCode::kConfig);
}
