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

#include "jbdetect/remote_backends.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <json.hpp>
#include <regex>
#include <thread>

#include "jbdetect/error.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect {
namespace {

using nlohmann::json;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint parse_url(const std::string& url) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) {
    throw Error(ErrorCode::kConfig, "malformed endpoint URL: '" + url + "'");
  }
  return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

double parse_retry_after(const httplib::Result& res) {
  if (!res->has_header("Retry-After")) return 0.0;
  try {
    return std::max(0.0, std::stod(res->get_header_value("Retry-After")));
  } catch (const std::exception&) {
    return 0.0;
  }
}

json post_json(const RemoteOptions& opt, const std::string& url, const json& body) {
  if (url.empty()) throw Error(ErrorCode::kConfig, "endpoint URL not configured");
  const Endpoint ep = parse_url(url);

  httplib::Headers headers;
  if (const char* key = std::getenv(opt.api_key_env.c_str()); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const auto timeout = std::chrono::duration<double>(opt.timeout_seconds);
  const std::string payload = body.dump();

  for (int attempt = 0;; ++attempt) {
    httplib::Client cli(ep.origin);
    cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    cli.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

    auto res = cli.Post(ep.path, headers, payload, "application/json");
    if (!res) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "cannot reach " + url + ": " + httplib::to_string(res.error()));
    }
    if (res->status == 429) {
      const double retry_after = parse_retry_after(res);
      if (attempt >= opt.max_retries) {
        throw RateLimitedError("rate limited by " + url + " after " +
                                   std::to_string(attempt + 1) + " attempts",
                               retry_after);
      }
      const double backoff = retry_after > 0.0 ? retry_after : 0.25 * (1 << attempt);
      std::this_thread::sleep_for(
          std::chrono::duration<double>(std::min(backoff, opt.max_backoff_seconds)));
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::kBackendUnavailable,
                  url + " returned HTTP " + std::to_string(res->status));
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendUnavailable, url + " returned malformed JSON: " + e.what());
    }
  }
}

[[noreturn]] void bad_shape(const std::string& what) {
  throw Error(ErrorCode::kBackendUnavailable, "unexpected response shape: " + what);
}

}  // namespace

RemoteEmbedder::RemoteEmbedder(RemoteOptions options)
    : options_(std::move(options)), dim_(options_.embedding_dim) {}

std::size_t RemoteEmbedder::dim() const {
  {
    std::lock_guard lock(dim_mutex_);
    if (dim_ != 0) return dim_;
  }
  const std::string probe = "dimension probe";
  const auto v = request(std::span<const std::string>(&probe, 1));
  std::lock_guard lock(dim_mutex_);
  if (dim_ == 0) dim_ = v.front().dim();
  return dim_;
}

std::vector<EmbeddingVector> RemoteEmbedder::request(std::span<const std::string> texts) const {
  json body{{"texts", json::array()}};
  for (const auto& t : texts) {
    std::string s = t;
    if (options_.max_input_words > 0) {
      auto words = text::split_words(s);
      if (words.size() > options_.max_input_words) {
        words.resize(options_.max_input_words);
        s = text::join(words);
      }
    }
    body["texts"].push_back(s);
  }
  const json res = post_json(options_, options_.embed_url, body);
  if (!res.contains("embeddings") || !res["embeddings"].is_array()) bad_shape("missing embeddings");
  std::vector<EmbeddingVector> out;
  try {
    for (const auto& row : res["embeddings"]) out.emplace_back(row.get<std::vector<double>>());
  } catch (const json::exception&) {
    bad_shape("embeddings must be arrays of numbers");
  }
  if (out.empty() || out.front().dim() == 0) bad_shape("empty embedding");
  return out;
}

std::vector<EmbeddingVector> RemoteEmbedder::do_embed(std::span<const std::string> texts) const {
  auto out = request(texts);
  std::lock_guard lock(dim_mutex_);
  if (dim_ == 0 && !out.empty()) dim_ = out.front().dim();
  return out;
}

double RemotePairScorer::do_score(std::string_view candidate, std::string_view reference) const {
  const json res = post_json(options_, options_.score_url,
                             {{"candidate", std::string(candidate)},
                              {"reference", std::string(reference)}});
  if (!res.contains("score") || !res["score"].is_number()) bad_shape("missing score");
  return res["score"].get<double>();
}

LabelDistribution RemoteClassifier::do_classify(std::string_view sentence,
                                                std::span<const std::string> labels) const {
  json body{{"sequence", std::string(sentence)}, {"candidate_labels", json::array()}};
  for (const auto& l : labels) body["candidate_labels"].push_back(l);
  const json res = post_json(options_, options_.classify_url, body);
  if (!res.contains("labels") || !res.contains("scores")) bad_shape("missing labels/scores");
  std::vector<std::string> names;
  std::vector<double> scores;
  try {
    names = res["labels"].get<std::vector<std::string>>();
    scores = res["scores"].get<std::vector<double>>();
  } catch (const json::exception&) {
    bad_shape("labels/scores have wrong types");
  }
  if (names.size() != scores.size()) bad_shape("labels/scores length mismatch");
  // Servers usually sort by score; restore request order.
  std::vector<std::pair<std::string, double>> ordered;
  for (const auto& l : labels) {
    const auto it = std::find(names.begin(), names.end(), l);
    if (it == names.end()) bad_shape("label '" + l + "' missing from response");
    ordered.emplace_back(l, scores[static_cast<std::size_t>(it - names.begin())]);
  }
  return LabelDistribution(std::move(ordered));
}

std::string RemoteGenerator::do_generate(std::string_view prompt, const GenerationConfig& config) const {
  const json body{{"model", options_.model},
                  {"messages", json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
                  {"temperature", config.temperature},
                  {"top_p", config.top_p},
                  {"max_tokens", config.max_tokens},
                  {"seed", config.seed}};
  const json res = post_json(options_, options_.generate_url, body);
  if (res.contains("text") && res["text"].is_string()) return res["text"].get<std::string>();
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    bad_shape("no text or choices[0].message.content");
  }
}

Backends make_remote_backends(const RemoteOptions& options) {
  Backends b;
  if (!options.embed_url.empty()) b.embedder = std::make_shared<RemoteEmbedder>(options);
  if (!options.score_url.empty()) b.scorer = std::make_shared<RemotePairScorer>(options);
  if (!options.classify_url.empty()) b.classifier = std::make_shared<RemoteClassifier>(options);
  if (!options.generate_url.empty()) b.generator = std::make_shared<RemoteGenerator>(options);
  return b;
}

}  // namespace jbdetect
