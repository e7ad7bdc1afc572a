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

#include <sstream>

#include <nlohmann/json.hpp>

#include "jbdetect/cli.hpp"
#include "support/synthetic.hpp"

using namespace jbdetect;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "jbdetect");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string prompts_file(const testing::TempDir& dir, int n) {
  Rng rng(5);
  std::string body;
  for (int i = 0; i < n; ++i) {
    const std::string p = "please explain how to " + testing::pick(rng, std::vector<std::string>{"bake", "build", "open", "fix"}) + " the thing number " + std::to_string(i) + " step by step with care";
    body += json{{"prompt_id", "p" + std::to_string(i)}, {"prompt", p}}.dump() + "\n";
  }
  const auto path = (dir / "prompts.jsonl").string();
  testing::write_file(path, body);
  return path;
}

std::string rsd_file() { return std::string(JBDETECT_DATA_DIR) + "/rsd_default.txt"; }

}  // namespace

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"perturb", "--input", "x", "--kind", "shuffle", "--rate", "0.1", "--output", "y"}).code == 2);
  CHECK(run({"perturb", "--input", "x", "--kind", "insert", "--frobnicate", "--output", "y"}).code == 2);
  CHECK(run({"evaluate", "--labels", "x", "--format", "xml"}).code == 2);
}

TEST_CASE("missing input exits 1 with a coded message") {
  testing::TempDir dir("cli");
  const auto r = run({"perturb", "--input", (dir / "nope.jsonl").string(), "--kind", "insert", "--rate", "0.1",
                      "--output", (dir / "o.jsonl").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("error (") == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "o.jsonl"));
}

TEST_CASE("perturb writes prompts x variants lines, deterministically") {
  testing::TempDir dir("cli");
  const auto in = prompts_file(dir, 161);
  const auto a = (dir / "a.jsonl").string();
  const auto b = (dir / "b.jsonl").string();
  REQUIRE(run({"perturb", "--input", in, "--kind", "insert", "--rate", "0.05", "--output", a}).code == 0);
  REQUIRE(run({"perturb", "--input", in, "--kind", "insert", "--rate", "0.05", "--output", b}).code == 0);
  const auto body = testing::read_file(a);
  CHECK(count_lines(body) == 1610);
  CHECK(body == testing::read_file(b));
  const auto first = json::parse(body.substr(0, body.find('\n')));
  CHECK(first["original_id"] == "p0");
  CHECK(first["kind"] == "insert");
  CHECK(first["variant_index"] == 0);

  REQUIRE(run({"perturb", "--input", in, "--kind", "swap", "--rate", "0.05", "--seed", "48", "--output", b}).code == 0);
  CHECK(body != testing::read_file(b));
  // Without --rate every configured level is produced.
  REQUIRE(run({"perturb", "--input", in, "--kind", "patch", "--variants", "2", "--output", b}).code == 0);
  CHECK(count_lines(testing::read_file(b)) == 161 * 6 * 2);
}

TEST_CASE("generate, consistency and detect pipeline") {
  testing::TempDir dir("cli");
  const auto in = prompts_file(dir, 4);
  const auto pert = (dir / "pert.jsonl").string();
  const auto resp = (dir / "resp.jsonl").string();
  REQUIRE(run({"perturb", "--input", in, "--kind", "swap", "--rate", "0.1", "--variants", "2", "--output", pert}).code == 0);
  const auto g = run({"generate", "--input", pert, "--responses", "3", "--output", resp});
  REQUIRE(g.code == 0);
  const auto body = testing::read_file(resp);
  CHECK(count_lines(body) == 4 * 2 * 3);
  const auto row = json::parse(body.substr(0, body.find('\n')));
  CHECK(row["generation"]["model"] == "mock");
  CHECK(row["perturbation"]["kind"] == "swap");

  const auto csv = (dir / "mu.csv").string();
  const auto c = run({"consistency", "--input", resp, "--metric", "neg", "--output", csv});
  REQUIRE(c.code == 0);
  const auto rows = testing::read_file(csv);
  CHECK(rows.rfind("prompt_id,metric,kind,level,mu_max\n", 0) == 0);
  CHECK(count_lines(rows) == 1 + 8);
  CHECK(rows.find("p0/v1,neg,swap,0.1,") != std::string::npos);
  const auto levels = testing::read_file(csv + ".levels.csv");
  CHECK(count_lines(levels) == 2);

  const auto verdicts = (dir / "v.jsonl").string();
  const auto d = run({"detect", "--input", resp, "--rsd", rsd_file(), "--output", verdicts});
  REQUIRE(d.code == 0);
  CHECK(d.out.find("detect: 24 verdicts") == 0);
  const auto vbody = testing::read_file(verdicts);
  CHECK(count_lines(vbody) == 24);
  const auto v = json::parse(vbody.substr(0, vbody.find('\n')));
  CHECK(v["config_digest"].get<std::string>().size() == 16);
  CHECK(v.contains("anomaly_score"));
  CHECK(v["response_index"] == 0);
}

TEST_CASE("consistency skips single-response groups with a warning") {
  testing::TempDir dir("cli");
  const auto resp = (dir / "r.jsonl").string();
  testing::write_file(resp, json{{"prompt_id", "solo"}, {"response", "I cannot."}}.dump() + "\n" +
                                json{{"prompt_id", "pair"}, {"response", "Sure thing."}}.dump() + "\n" +
                                json{{"prompt_id", "pair"}, {"response", "Sure thing."}}.dump() + "\n");
  const auto csv = (dir / "mu.csv").string();
  const auto r = run({"consistency", "--input", resp, "--metric", "cos", "--output", csv});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning: skipping solo") != std::string::npos);
  const auto rows = testing::read_file(csv);
  CHECK(count_lines(rows) == 2);
  CHECK(rows.find("pair,cos,none,0,1") != std::string::npos);
}

TEST_CASE("evaluate against labels, whole and sliced") {
  testing::TempDir dir("cli");
  const auto labels = (dir / "bench.jsonl").string();
  const auto verdicts = (dir / "v.jsonl").string();
  std::string lb;
  std::string vb;
  // 8 tp, 2 fp, 9 tn, 1 fn.
  const bool truth[] = {1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
  const bool pred[] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 20; ++i) {
    json l{{"prompt_id", "q" + std::to_string(i)},
           {"label", truth[i]},
           {"response", truth[i] ? "Sure, here it is." : "I cannot help with that."}};
    if (i % 2) l["perturbation"] = {{"kind", "insert"}, {"rate", 0.05}, {"variant_index", 0}};
    lb += l.dump() + "\n";
    vb += json{{"prompt_id", "q" + std::to_string(i)}, {"is_jailbreak", pred[i]}}.dump() + "\n";
  }
  testing::write_file(labels, lb);
  testing::write_file(verdicts, vb);

  const auto csv = run({"evaluate", "--verdicts", verdicts, "--labels", labels, "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find(",bench,all,8,2,9,1,0.850,0.800,0.889,0.842") != std::string::npos);

  const auto sliced = run({"evaluate", "--verdicts", verdicts, "--labels", labels, "--format", "json",
                           "--slice", "perturbation"});
  REQUIRE(sliced.code == 0);
  const auto j = json::parse(sliced.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["perturbation"] == "insert@0.05");
  CHECK(j[1]["perturbation"] == "none");
  CHECK(j[0]["total"].get<int>() + j[1]["total"].get<int>() == 20);

  // The string matcher predicts every labeled response correctly here.
  const auto str = run({"evaluate", "--labels", labels, "--method", "str-cls", "--format", "csv"});
  REQUIRE(str.code == 0);
  CHECK(str.out.find("str-cls,") != std::string::npos);
  CHECK(str.out.find(",9,0,11,0,1.000,1.000,1.000,1.000") != std::string::npos);

  CHECK(run({"evaluate", "--labels", labels}).code == 1);
}

TEST_CASE("unreachable remote endpoint fails without leaving output") {
  testing::TempDir dir("cli");
  const auto in = prompts_file(dir, 2);
  const auto conf = (dir / "remote.conf").string();
  testing::write_file(conf, "backend = remote\ngenerate_url = http://127.0.0.1:1/generate\n"
                            "timeout_seconds = 1\nmax_retries = 0\n");
  const auto out = dir / "resp.jsonl";
  const auto r = run({"generate", "--config", conf, "--input", in, "--output", out.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("backend-unavailable") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(out));
}

TEST_CASE("extract, rsd and config commands") {
  const auto e = run({"extract", "--text", "Hello. I am sorry, but I cannot help with that."});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("idx\tlabel\tscore\twords\tsentence") == 0);
  CHECK(e.out.find("salient[1]") != std::string::npos);

  const auto v = run({"rsd", "validate", rsd_file()});
  REQUIRE(v.code == 0);
  CHECK(v.out.find("corpus: 50 entries") == 0);
  CHECK(v.out.find("status: clean") != std::string::npos);

  const auto c = run({"rsd", "centroid", rsd_file(), "--embedding-dim", "8"});
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["centroid"].size() == 8);

  const auto s = run({"config", "show", "--seed", "3"});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("seed = 3\n") != std::string::npos);
  CHECK(s.out.find("# digest ") != std::string::npos);
}
