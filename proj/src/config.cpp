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

#include "jbdetect/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "jbdetect/error.hpp"
#include "jbdetect/mock_backends.hpp"
#include "jbdetect/random.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect {
namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::kConfig, "invalid value '" + std::string(value) + "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used != v.size()) bad_value(key, v);
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  const std::string s = text::to_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad_value(key, v);
}

// Shortest %g form that parses back to the same double.
std::string num(double v) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view v = text::trim(raw);
  if (key == "backend") {
    if (v != "mock" && v != "remote") bad_value(key, v);
    backend = std::string(v);
  } else if (key == "embedding_dim") {
    embedding_dim = to_int<std::size_t>(key, v);
    if (embedding_dim == 0) bad_value(key, v);
  } else if (key == "generate_url") {
    remote.generate_url = std::string(v);
  } else if (key == "embed_url") {
    remote.embed_url = std::string(v);
  } else if (key == "score_url") {
    remote.score_url = std::string(v);
  } else if (key == "classify_url") {
    remote.classify_url = std::string(v);
  } else if (key == "model") {
    remote.model = std::string(v);
  } else if (key == "api_key_env") {
    remote.api_key_env = std::string(v);
  } else if (key == "timeout_seconds") {
    remote.timeout_seconds = to_double(key, v);
  } else if (key == "max_retries") {
    remote.max_retries = to_int<int>(key, v);
  } else if (key == "max_input_words") {
    remote.max_input_words = to_int<std::size_t>(key, v);
  } else if (key == "neg_reduction") {
    const auto r = detector::parse_reduction(v);
    if (!r) bad_value(key, v);
    detector.neg_reduction = *r;
  } else if (key == "include_self_score") {
    detector.include_self_score = to_bool(key, v);
  } else if (key == "population_mode") {
    const auto m = detector::parse_population_mode(v);
    if (!m) bad_value(key, v);
    detector.population_mode = *m;
  } else if (key == "num_trees") {
    forest.num_trees = to_int<int>(key, v);
    if (forest.num_trees < 1) bad_value(key, v);
  } else if (key == "subsample_size") {
    forest.subsample_size = to_int<std::size_t>(key, v);
  } else if (key == "max_depth") {
    forest.max_depth = to_int<int>(key, v);
  } else if (key == "temperature") {
    generation.temperature = to_double(key, v);
  } else if (key == "top_p") {
    generation.top_p = to_double(key, v);
  } else if (key == "max_tokens") {
    generation.max_tokens = to_int<int>(key, v);
  } else if (key == "seed") {
    seed = to_int<std::uint64_t>(key, v);
  } else if (key == "levels") {
    std::vector<double> parsed;
    std::stringstream ss{std::string(v)};
    for (std::string item; std::getline(ss, item, ',');) {
      const double r = to_double(key, text::trim(item));
      if (!(r > 0.0 && r <= 1.0)) bad_value(key, v);
      parsed.push_back(r);
    }
    if (parsed.empty()) bad_value(key, v);
    levels = std::move(parsed);
  } else if (key == "variants") {
    variants = to_int<int>(key, v);
    if (variants < 1) bad_value(key, v);
  } else if (key == "responses_per_prompt") {
    responses_per_prompt = to_int<int>(key, v);
    if (responses_per_prompt < 1) bad_value(key, v);
  } else if (key == "workers") {
    workers = to_int<int>(key, v);
    if (workers < 1) bad_value(key, v);
  } else if (key == "strict_length") {
    strict_length = to_bool(key, v);
  } else {
    throw Error(ErrorCode::kConfig, "unknown config key '" + std::string(key) + "'");
  }
}

void RunConfig::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open config " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig,
                  path.string() + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      set(text::trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  RunConfig c;
  c.merge_file(path);
  return c;
}

isoforest::ForestConfig RunConfig::effective_forest() const {
  auto f = forest;
  f.seed = seed;
  f.workers = 1;  // parallelism is applied across responses instead
  return f;
}

GenerationConfig RunConfig::effective_generation() const {
  auto g = generation;
  g.seed = static_cast<std::int64_t>(seed);
  return g;
}

std::string RunConfig::dump() const {
  std::ostringstream os;
  std::string lv;
  for (std::size_t i = 0; i < levels.size(); ++i) lv += (i ? "," : "") + num(levels[i]);
  os << "backend = " << backend << "\n"
     << "embedding_dim = " << embedding_dim << "\n"
     << "generate_url = " << remote.generate_url << "\n"
     << "embed_url = " << remote.embed_url << "\n"
     << "score_url = " << remote.score_url << "\n"
     << "classify_url = " << remote.classify_url << "\n"
     << "model = " << remote.model << "\n"
     << "api_key_env = " << remote.api_key_env << "\n"
     << "timeout_seconds = " << num(remote.timeout_seconds) << "\n"
     << "max_retries = " << remote.max_retries << "\n"
     << "max_input_words = " << remote.max_input_words << "\n"
     << "neg_reduction = " << detector::reduction_name(detector.neg_reduction) << "\n"
     << "include_self_score = " << (detector.include_self_score ? "true" : "false") << "\n"
     << "population_mode = " << detector::population_mode_name(detector.population_mode) << "\n"
     << "num_trees = " << forest.num_trees << "\n"
     << "subsample_size = " << forest.subsample_size << "\n"
     << "max_depth = " << forest.max_depth << "\n"
     << "temperature = " << num(generation.temperature) << "\n"
     << "top_p = " << num(generation.top_p) << "\n"
     << "max_tokens = " << generation.max_tokens << "\n"
     << "seed = " << seed << "\n"
     << "levels = " << lv << "\n"
     << "variants = " << variants << "\n"
     << "responses_per_prompt = " << responses_per_prompt << "\n"
     << "workers = " << workers << "\n"
     << "strict_length = " << (strict_length ? "true" : "false") << "\n";
  return os.str();
}

std::string RunConfig::digest() const {
  // Worker count does not change results, so it stays out of the digest.
  std::string canon;
  std::istringstream in(dump());
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("workers =", 0) != 0) canon += line + "\n";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canon)));
  return buf;
}

Backends RunConfig::make_backends() const {
  if (backend == "mock") {
    MockOptions m;
    m.embedding_dim = embedding_dim;
    m.seed = seed;
    return make_mock_backends(m);
  }
  return make_remote_backends(remote);
}

}  // namespace jbdetect
