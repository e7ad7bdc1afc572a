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

#pragma once

// Seeded test fixtures: random matrices and point clouds, and sentence
// generators whose refusal and compliance outputs are far apart under the
// mock backends (refusals always carry a marker, compliances never do).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <unistd.h>
#include <string>
#include <vector>

#include "jbdetect/random.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect::testing {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform_unit(rng); }

inline std::vector<std::vector<double>> random_points(Rng& rng, std::size_t n, std::size_t dim,
                                                      double lo = -1.0, double hi = 1.0) {
  std::vector<std::vector<double>> out(n, std::vector<double>(dim));
  for (auto& p : out) {
    for (auto& x : p) x = uniform(rng, lo, hi);
  }
  return out;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[uniform_index(rng, v.size())];
}

// Pads or cuts a sentence to a word count in [lo, hi], keeping the final period.
inline std::string fit_words(std::string s, Rng& rng, std::size_t lo, std::size_t hi) {
  static const std::vector<std::string> pad{"for", "your", "own", "safety", "and", "the", "safety",
                                            "of", "everyone", "involved"};
  auto words = text::split_words(s);
  if (!words.empty() && words.back().ends_with('.')) words.back().pop_back();
  const std::size_t target = lo + uniform_index(rng, hi - lo + 1);
  std::size_t k = 0;
  while (words.size() < target) words.push_back(pad[k++ % pad.size()]);
  words.resize(target);
  return text::join(words) + ".";
}

inline std::string refusal_sentence(Rng& rng) {
  static const std::vector<std::string> opener{
      "I cannot",          "I'm sorry, but I cannot", "I apologize, but I am unable to",
      "I must decline to", "I will not",              "Unfortunately I am not able to",
      "Sorry, I can't"};
  static const std::vector<std::string> action{
      "help with this request",        "provide that information",  "assist with that task",
      "share those instructions",      "write that kind of content", "explain how to do that",
      "give you step by step guidance"};
  static const std::vector<std::string> reason{
      "because it could cause serious harm to other people",
      "since it goes against my safety guidelines",
      "as it involves illegal and dangerous activity",
      "because the request could put lives at risk",
      "since that information could be misused to hurt someone"};
  return fit_words(pick(rng, opener) + " " + pick(rng, action) + " " + pick(rng, reason), rng, 15, 20);
}

inline std::string compliance_text(Rng& rng) {
  static const std::vector<std::string> opener{"Sure, here is", "Of course, this is", "Absolutely, below is",
                                               "Here is", "Great question, this is"};
  static const std::vector<std::string> what{"a detailed walkthrough of", "a complete guide to",
                                             "the full recipe for", "an overview of"};
  static const std::vector<std::string> topic{"mixing the volatile chemicals",
                                              "picking the lock on the door",
                                              "writing the phishing email",
                                              "building the tracking device",
                                              "cracking the neighbour's wifi password"};
  static const std::vector<std::string> tail{
      "First gather the materials listed below and then follow each step carefully.",
      "Step one is preparation, step two is assembly, and step three is testing.",
      "Start by collecting the tools, then work through the numbered stages in order."};
  return pick(rng, opener) + " " + pick(rng, what) + " " + pick(rng, topic) + ". " + pick(rng, tail);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("jbdetect_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace jbdetect::testing
