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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "io.hpp"
#include "jbdetect/cli.hpp"
#include "jbdetect/config.hpp"
#include "jbdetect/consistency.hpp"
#include "jbdetect/detector.hpp"
#include "jbdetect/error.hpp"
#include "jbdetect/evalkit.hpp"
#include "jbdetect/extraction.hpp"
#include "jbdetect/perturb.hpp"
#include "jbdetect/random.hpp"
#include "jbdetect/rsd.hpp"
#include "jbdetect/text.hpp"

namespace jbdetect::cli {
namespace {

using nlohmann::json;

std::string fmt(double v, int decimals = 6) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Shortest round-trip form for rates and seeds in identifiers.
std::string compact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string hex_digest(std::string_view canon) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canon)));
  return buf;
}

// Flags shared by every pipeline command; each overrides the config file.
struct CommonFlags {
  std::string config_path;
  std::string backend;
  std::uint64_t seed = 0;
  int workers = 1;
  std::size_t embedding_dim = 0;
  CLI::Option* backend_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* dim_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run config file (key = value lines)");
    backend_opt = cmd->add_option("--backend", backend, "Backend profile")
                      ->check(CLI::IsMember({"mock", "remote"}));
    seed_opt = cmd->add_option("--seed", seed, "Global seed (default 47)");
    workers_opt = cmd->add_option("--workers", workers, "Parallel workers")->check(CLI::PositiveNumber);
    dim_opt = cmd->add_option("--embedding-dim", dim_opt_value(), "Mock embedder dimension")
                  ->check(CLI::PositiveNumber);
  }

  std::size_t& dim_opt_value() { return embedding_dim; }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) cfg.merge_file(config_path);
    if (backend_opt && backend_opt->count()) cfg.backend = backend;
    if (seed_opt && seed_opt->count()) cfg.seed = seed;
    if (workers_opt && workers_opt->count()) cfg.workers = workers;
    if (dim_opt && dim_opt->count()) cfg.embedding_dim = embedding_dim;
    return cfg;
  }
};

// A response line as produced by `generate`.
struct ResponseRow {
  std::size_t line = 0;
  std::string prompt_id;
  std::optional<evalkit::PerturbationTag> perturbation;
  std::optional<int> response_index;
  std::string response;
};

[[noreturn]] void row_error(const std::string& path, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ":" + std::to_string(line) + ": " + what);
}

std::vector<ResponseRow> read_responses(const std::string& path) {
  std::vector<ResponseRow> rows;
  for (auto& [line, j] : read_jsonl(path)) {
    ResponseRow r;
    r.line = line;
    if (!j.contains("prompt_id") || !j["prompt_id"].is_string()) row_error(path, line, "missing prompt_id");
    if (!j.contains("response") || !j["response"].is_string()) row_error(path, line, "missing response");
    r.prompt_id = j["prompt_id"].get<std::string>();
    r.response = j["response"].get<std::string>();
    if (text::trim(r.response).empty()) row_error(path, line, "blank response");
    if (j.contains("response_index") && j["response_index"].is_number_integer()) {
      r.response_index = j["response_index"].get<int>();
    }
    if (j.contains("perturbation") && j["perturbation"].is_object()) {
      const json& p = j["perturbation"];
      if (!p.contains("kind") || !p["kind"].is_string() || !p.contains("rate") || !p["rate"].is_number()) {
        row_error(path, line, "perturbation needs kind and rate");
      }
      evalkit::PerturbationTag tag;
      tag.kind = p["kind"].get<std::string>();
      tag.rate = p["rate"].get<double>();
      if (p.contains("variant_index") && p["variant_index"].is_number_integer()) {
        tag.variant_index = p["variant_index"].get<int>();
      }
      r.perturbation = tag;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

json perturbation_json(const evalkit::PerturbationTag& t) {
  return {{"kind", t.kind}, {"rate", t.rate}, {"variant_index", t.variant_index}};
}

// ------------------------------------------------------------------ perturb

struct PerturbArgs {
  CommonFlags common;
  std::string input;
  std::string output;
  std::string kind;
  double rate = 0.0;
  CLI::Option* rate_opt = nullptr;
  int variants = 10;
  CLI::Option* variants_opt = nullptr;
  std::string pool_path;
};

int cmd_perturb(const PerturbArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.resolve();
  const auto kind = *perturb::parse_kind(a.kind);
  const std::vector<double> rates = a.rate_opt->count() ? std::vector<double>{a.rate} : cfg.levels;
  const int variants = a.variants_opt->count() ? a.variants : cfg.variants;

  std::vector<std::string> pool = perturb::default_word_pool();
  if (!a.pool_path.empty()) pool = evalkit::load_markers(a.pool_path);
  const perturb::Perturber perturber(std::move(pool));

  evalkit::DatasetSchema schema;
  schema.require_label = false;
  schema.require_prompt = true;
  const auto records = evalkit::load_dataset(a.input, schema);

  AtomicFile file(a.output);
  std::size_t lines = 0;
  for (const auto& r : records) {
    for (double rate : rates) {
      perturb::PerturbationSpec spec;
      spec.kind = kind;
      spec.rate = rate;
      spec.variants = variants;
      spec.seed = derive_seed(cfg.seed, r.prompt_id + ":" + std::string(perturb::kind_name(kind)) + ":" +
                                            compact(rate));
      for (const auto& p : perturber.generate_variants(r.prompt_id, r.prompt, spec)) {
        const json j{{"original_id", p.original_id},
                     {"variant_index", p.variant_index},
                     {"kind", perturb::kind_name(p.kind)},
                     {"rate", p.rate},
                     {"text", p.text}};
        file.stream() << j.dump() << "\n";
        ++lines;
      }
    }
  }
  file.commit();
  out << "perturb: wrote " << lines << " perturbed prompts to " << a.output << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- generate

struct GenerateArgs {
  CommonFlags common;
  std::string input;
  std::string output;
  int responses = 10;
  CLI::Option* responses_opt = nullptr;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.resolve();
  const Backends backends = cfg.make_backends();
  const Generator& gen = backends.require_generator();
  const GenerationConfig base = cfg.effective_generation();
  const int n = a.responses_opt->count() ? a.responses : cfg.responses_per_prompt;

  struct PromptRow {
    std::string id;
    std::string text;
    std::optional<evalkit::PerturbationTag> perturbation;
  };
  std::vector<PromptRow> prompts;
  for (auto& [line, j] : read_jsonl(a.input)) {
    PromptRow p;
    if (j.contains("original_id") && j.contains("text")) {
      p.id = j["original_id"].get<std::string>();
      p.text = j["text"].get<std::string>();
      evalkit::PerturbationTag tag;
      tag.kind = j.value("kind", std::string("none"));
      tag.rate = j.value("rate", 0.0);
      tag.variant_index = j.value("variant_index", 0);
      p.perturbation = tag;
    } else if (j.contains("prompt_id") && j.contains("prompt") && j["prompt"].is_string()) {
      p.id = j["prompt_id"].get<std::string>();
      p.text = j["prompt"].get<std::string>();
    } else {
      row_error(a.input, line, "expected {prompt_id, prompt} or {original_id, text, ...}");
    }
    prompts.push_back(std::move(p));
  }

  std::vector<std::vector<std::string>> responses(prompts.size());
  parallel_for(prompts.size(), cfg.workers, [&](std::size_t i) {
    for (int k = 0; k < n; ++k) {
      GenerationConfig g = base;
      g.seed = base.seed + k;
      responses[i].push_back(gen.generate(prompts[i].text, g));
    }
  });

  AtomicFile file(a.output);
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    for (int k = 0; k < n; ++k) {
      json j{{"prompt_id", prompts[i].id}, {"prompt", prompts[i].text}};
      if (prompts[i].perturbation) j["perturbation"] = perturbation_json(*prompts[i].perturbation);
      j["response_index"] = k;
      j["response"] = responses[i][static_cast<std::size_t>(k)];
      j["generation"] = {{"backend", cfg.backend},
                         {"model", cfg.backend == "mock" ? std::string("mock") : cfg.remote.model},
                         {"temperature", base.temperature},
                         {"top_p", base.top_p},
                         {"max_tokens", base.max_tokens},
                         {"seed", base.seed + k}};
      file.stream() << j.dump() << "\n";
    }
  }
  file.commit();
  out << "generate: wrote " << prompts.size() * static_cast<std::size_t>(n) << " responses to "
      << a.output << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- consistency

struct ConsistencyArgs {
  CommonFlags common;
  std::string input;
  std::string metric;
  std::string output;
  std::string levels_output;
};

int cmd_consistency(const ConsistencyArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = a.common.resolve();
  const Backends backends = cfg.make_backends();
  const auto metric = *consistency::parse_metric(a.metric);
  const auto rows = read_responses(a.input);

  struct Group {
    std::string label;  // prompt_id, plus /v<variant> when perturbed
    std::string kind = "none";
    double level = 0.0;
    consistency::ResponseSet set;
  };
  std::vector<Group> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    std::string key = r.prompt_id;
    Group g;
    g.label = r.prompt_id;
    if (r.perturbation) {
      g.kind = r.perturbation->kind;
      g.level = r.perturbation->rate;
      g.label += "/v" + std::to_string(r.perturbation->variant_index);
      key += "\x1f" + g.kind + "\x1f" + compact(g.level) + "\x1f" +
             std::to_string(r.perturbation->variant_index);
    }
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) {
      g.set.prompt_id = g.label;
      groups.push_back(std::move(g));
    }
    groups[it->second].set.responses.push_back(r.response);
  }

  std::vector<std::optional<double>> mu(groups.size());
  parallel_for(groups.size(), cfg.workers, [&](std::size_t i) {
    if (groups[i].set.n() < 2) return;
    mu[i] = consistency::mu_max(consistency::pairwise_matrix(groups[i].set, metric, backends));
  });

  std::map<std::string, std::map<double, std::vector<double>>> per_kind;
  AtomicFile rows_file(a.output);
  rows_file.stream() << "prompt_id,metric,kind,level,mu_max\n";
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!mu[i]) {
      err << "warning: skipping " << groups[i].label << " (" << groups[i].set.n()
          << " response; need at least 2)\n";
      ++skipped;
      continue;
    }
    rows_file.stream() << groups[i].label << ',' << consistency::metric_name(metric) << ','
                       << groups[i].kind << ',' << compact(groups[i].level) << ',' << fmt(*mu[i]) << "\n";
    per_kind[groups[i].kind][groups[i].level].push_back(*mu[i]);
  }

  const std::string levels_path =
      a.levels_output.empty() ? a.output + ".levels.csv" : a.levels_output;
  AtomicFile levels_file(levels_path);
  levels_file.stream() << "metric,kind,level,mean,q25,q75,count\n";
  for (const auto& [kind, per_level] : per_kind) {
    for (const auto& s : consistency::aggregate_levels(per_level)) {
      levels_file.stream() << consistency::metric_name(metric) << ',' << kind << ',' << compact(s.level)
                           << ',' << fmt(s.mean) << ',' << fmt(s.q25) << ',' << fmt(s.q75) << ','
                           << s.count << "\n";
    }
  }
  rows_file.commit();
  levels_file.commit();
  out << "consistency: " << groups.size() - skipped << " groups scored (" << skipped
      << " skipped), metric " << consistency::metric_name(metric) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- detect

struct DetectArgs {
  CommonFlags common;
  std::string input;
  std::string rsd_path;
  std::string output;
};

json verdict_json(const detector::Verdict& v, const std::optional<int>& response_index) {
  json j{{"prompt_id", v.prompt_id},
         {"is_jailbreak", v.is_jailbreak},
         {"anomaly_score", v.anomaly_score},
         {"d_emb", v.d_emb},
         {"d_neg_summary", v.d_neg_summary},
         {"excerpt", v.response_excerpt},
         {"config_digest", v.config_digest}};
  if (response_index) j["response_index"] = *response_index;
  return j;
}

int cmd_detect(const DetectArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.resolve();
  const Backends backends = cfg.make_backends();
  auto corpus = rsd::load_corpus(a.rsd_path, cfg.strict_length);
  const auto rows = read_responses(a.input);

  detector::Detector det(std::move(corpus), backends, cfg.detector, cfg.effective_forest());
  det.set_config_digest(hex_digest(det.config_digest() + cfg.digest()));

  std::vector<detector::Verdict> verdicts(rows.size());
  if (cfg.detector.population_mode == detector::PopulationMode::kBatch) {
    std::vector<std::pair<std::string, std::string>> batch;
    for (const auto& r : rows) batch.emplace_back(r.prompt_id, r.response);
    verdicts = det.detect_batch(batch);
  } else {
    parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
      verdicts[i] = det.detect(rows[i].prompt_id, rows[i].response);
    });
  }

  AtomicFile file(a.output);
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    flagged += verdicts[i].is_jailbreak;
    file.stream() << verdict_json(verdicts[i], rows[i].response_index).dump() << "\n";
  }
  file.commit();
  const double rate = rows.empty() ? 0.0 : static_cast<double>(flagged) / static_cast<double>(rows.size());
  out << "detect: " << rows.size() << " verdicts, " << flagged << " jailbreaks, jailbreak rate "
      << fmt(rate, 3) << " (config " << det.config_digest() << ")\n";
  return kExitOk;
}

// ----------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string verdicts;
  std::string labels;
  std::string format = "markdown";
  std::string slice = "none";
  std::string method = "detector";
  std::string markers;
  std::string output;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto records = evalkit::load_dataset(a.labels);

  std::vector<std::pair<std::string, bool>> predictions;
  if (a.method == "str-cls") {
    const auto markers = a.markers.empty() ? evalkit::default_refusal_markers() : evalkit::load_markers(a.markers);
    for (const auto& r : records) {
      if (text::trim(r.response).empty()) {
        throw Error(ErrorCode::kSchemaViolation, "record '" + r.prompt_id + "' has no response for str-cls");
      }
      predictions.emplace_back(r.prompt_id, evalkit::str_cls(r.response, markers));
    }
  } else {
    if (a.verdicts.empty()) throw Error(ErrorCode::kInvalidArgument, "--verdicts is required for method detector");
    for (auto& [line, j] : read_jsonl(a.verdicts)) {
      if (!j.contains("prompt_id") || !j["prompt_id"].is_string() || !j.contains("is_jailbreak") ||
          !j["is_jailbreak"].is_boolean()) {
        row_error(a.verdicts, line, "verdict needs prompt_id and is_jailbreak");
      }
      predictions.emplace_back(j["prompt_id"].get<std::string>(), j["is_jailbreak"].get<bool>());
    }
  }

  std::string model;
  for (const auto& r : records) {
    if (model.empty()) model = r.model_name;
    else if (r.model_name != model && !r.model_name.empty()) model = "mixed";
  }
  const std::string dataset = std::filesystem::path(a.labels).stem().string();

  std::vector<evalkit::EvalReport> reports;
  if (a.slice == "perturbation") {
    std::map<std::string, const evalkit::LabeledRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.prompt_id, &r);
    std::map<std::string, std::vector<std::pair<std::string, bool>>> sliced;
    for (const auto& p : predictions) {
      const auto it = by_id.find(p.first);
      if (it == by_id.end()) throw Error(ErrorCode::kUnmatchedId, "no labeled record for '" + p.first + "'");
      const auto& tag = it->second->perturbation;
      sliced[tag ? tag->kind + "@" + compact(tag->rate) : std::string("none")].push_back(p);
    }
    for (const auto& [name, preds] : sliced) {
      reports.push_back(evalkit::compute_metrics(preds, records, {a.method, model, dataset, name}));
    }
  } else {
    reports.push_back(evalkit::compute_metrics(predictions, records, {a.method, model, dataset, "all"}));
  }

  const std::string rendered = evalkit::emit_reports(reports, *evalkit::parse_report_format(a.format));
  if (a.output.empty()) {
    out << rendered;
  } else {
    AtomicFile file(a.output);
    file.stream() << rendered;
    file.commit();
  }
  return kExitOk;
}

// ------------------------------------------------------------------ extract

struct ExtractArgs {
  CommonFlags common;
  std::string text;
  std::string file;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.resolve();
  const Backends backends = cfg.make_backends();
  std::string input = a.text;
  if (!a.file.empty()) {
    std::ifstream in(a.file);
    if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + a.file);
    std::ostringstream ss;
    ss << in.rdbuf();
    input = ss.str();
  }
  if (text::trim(input).empty()) throw Error(ErrorCode::kEmptyText, "no text given (use --text or --file)");

  const auto& classifier = backends.require_classifier();
  const auto labeled = extraction::label_sentences(extraction::split_sentences(input), classifier);
  out << "idx\tlabel\tscore\twords\tsentence\n";
  for (const auto& s : labeled) {
    out << s.index << '\t' << s.label << '\t' << fmt(s.score, 3) << '\t' << text::word_count(s.text) << '\t'
        << s.text << "\n";
  }
  const auto salient = extraction::extract_salient(input, classifier);
  out << "salient[" << salient.source_index << "]" << (salient.emotional ? " emotional" : " fallback")
      << (salient.trimmed ? " trimmed" : "") << ": " << salient.text << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------- rsd

struct RsdArgs {
  CommonFlags common;
  std::string path;
  bool strict = false;
  std::string output;
};

int cmd_rsd_validate(const RsdArgs& a, std::ostream& out) {
  const auto corpus = rsd::load_corpus(a.path, a.strict);
  const auto report = rsd::validate_corpus(corpus);
  out << "corpus: " << corpus.size() << " entries from " << a.path << "\n";
  for (const auto& d : report.duplicates) out << "duplicate: " << d.first_id << " == " << d.second_id << "\n";
  for (const auto& id : report.out_of_band) {
    for (const auto& e : corpus.entries) {
      if (e.id == id) {
        out << "out-of-band: " << id << " (" << e.word_count << " words, band " << rsd::kBandMin << "-"
            << rsd::kBandMax << ")\n";
      }
    }
  }
  for (const auto& id : report.empty) out << "empty: " << id << "\n";
  for (const auto& r : report.rejected) {
    out << "rejected: line " << r.line << " (" << r.word_count << " words): " << r.text << "\n";
  }
  out << (report.clean() ? "status: clean\n" : "status: issues found\n");
  return kExitOk;
}

int cmd_rsd_centroid(const RsdArgs& a, std::ostream& out) {
  const RunConfig cfg = a.common.resolve();
  const Backends backends = cfg.make_backends();
  auto corpus = rsd::load_corpus(a.path, a.strict || cfg.strict_length);
  rsd::embed_corpus(corpus, backends.require_embedder());
  const auto c = rsd::compute_centroid(corpus);
  const json j{{"dim", c.vector.dim()}, {"source_count", c.source_count}, {"centroid", c.vector.values}};
  if (a.output.empty()) {
    out << j.dump() << "\n";
  } else {
    AtomicFile file(a.output);
    file.stream() << j.dump() << "\n";
    file.commit();
    out << "rsd centroid: dim " << c.vector.dim() << " from " << c.source_count << " entries -> " << a.output
        << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jailbreak detection by refusal-domain deviation", "jbdetect"};
  app.require_subcommand(1, 1);

  PerturbArgs perturb_args;
  auto* perturb_cmd = app.add_subcommand("perturb", "Write word-level perturbations of a prompt dataset");
  perturb_args.common.attach(perturb_cmd);
  perturb_cmd->add_option("--input", perturb_args.input, "Prompt dataset (JSONL with prompt_id, prompt)")->required();
  perturb_cmd->add_option("--kind", perturb_args.kind, "insert | patch | swap")
      ->required()
      ->check(CLI::IsMember({"insert", "patch", "swap"}));
  perturb_args.rate_opt = perturb_cmd->add_option("--rate", perturb_args.rate,
                                                  "Perturbation rate in (0,1]; default: every configured level")
                              ->check(CLI::Range(0.0, 1.0));
  perturb_args.variants_opt =
      perturb_cmd->add_option("--variants", perturb_args.variants, "Variants per prompt and level (default 10)")
          ->check(CLI::PositiveNumber);
  perturb_cmd->add_option("--pool", perturb_args.pool_path, "Replacement word list, one word per line");
  perturb_cmd->add_option("--output", perturb_args.output, "Output JSONL")->required();

  GenerateArgs generate_args;
  auto* generate_cmd = app.add_subcommand("generate", "Sample responses for every prompt");
  generate_args.common.attach(generate_cmd);
  generate_cmd->add_option("--input", generate_args.input, "Prompt or perturbed-prompt JSONL")->required();
  generate_cmd->add_option("--output", generate_args.output, "Output response JSONL")->required();
  generate_args.responses_opt =
      generate_cmd->add_option("--responses", generate_args.responses, "Responses per prompt (default 10)")
          ->check(CLI::PositiveNumber);

  ConsistencyArgs consistency_args;
  auto* consistency_cmd = app.add_subcommand("consistency", "Max-of-means response consistency per group");
  consistency_args.common.attach(consistency_cmd);
  consistency_cmd->add_option("--input", consistency_args.input, "Response JSONL")->required();
  consistency_cmd->add_option("--metric", consistency_args.metric, "neg | cos")
      ->required()
      ->check(CLI::IsMember({"neg", "cos"}));
  consistency_cmd->add_option("--output", consistency_args.output, "Per-group CSV")->required();
  consistency_cmd->add_option("--levels-output", consistency_args.levels_output,
                              "Per-level CSV (default: <output>.levels.csv)");

  DetectArgs detect_args;
  auto* detect_cmd = app.add_subcommand("detect", "Emit a jailbreak verdict per response");
  detect_args.common.attach(detect_cmd);
  detect_cmd->add_option("--input", detect_args.input, "Response JSONL (prompt_id, response)")->required();
  detect_cmd->add_option("--rsd", detect_args.rsd_path, "Refusal corpus, one sentence per line")->required();
  detect_cmd->add_option("--output", detect_args.output, "Verdict JSONL")->required();

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy / precision / recall / F1 against labels");
  eval_cmd->add_option("--verdicts", eval_args.verdicts, "Verdict JSONL from detect");
  eval_cmd->add_option("--labels", eval_args.labels, "Labeled dataset JSONL")->required();
  eval_cmd->add_option("--format", eval_args.format, "json | csv | markdown")
      ->check(CLI::IsMember({"json", "csv", "markdown", "markdown-table", "md"}));
  eval_cmd->add_option("--slice", eval_args.slice, "none | perturbation")
      ->check(CLI::IsMember({"none", "perturbation"}));
  eval_cmd->add_option("--method", eval_args.method, "detector | str-cls")
      ->check(CLI::IsMember({"detector", "str-cls"}));
  eval_cmd->add_option("--markers", eval_args.markers, "Refusal marker list for str-cls");
  eval_cmd->add_option("--output", eval_args.output, "Write the report here instead of stdout");

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "Show sentence labels and the salient sentence");
  extract_args.common.attach(extract_cmd);
  extract_cmd->add_option("--text", extract_args.text, "Response text");
  extract_cmd->add_option("--file", extract_args.file, "Read the response text from a file");

  auto* rsd_cmd = app.add_subcommand("rsd", "Refusal corpus tools");
  rsd_cmd->require_subcommand(1, 1);
  RsdArgs validate_args;
  auto* validate_cmd = rsd_cmd->add_subcommand("validate", "Report duplicates and out-of-band lengths");
  validate_cmd->add_option("path", validate_args.path, "Corpus file")->required();
  validate_cmd->add_flag("--strict", validate_args.strict, "Reject lines outside the 15-20 word band");
  RsdArgs centroid_args;
  auto* centroid_cmd = rsd_cmd->add_subcommand("centroid", "Embed the corpus and print its centroid");
  centroid_args.common.attach(centroid_cmd);
  centroid_cmd->add_option("path", centroid_args.path, "Corpus file")->required();
  centroid_cmd->add_flag("--strict", centroid_args.strict, "Reject lines outside the 15-20 word band");
  centroid_cmd->add_option("--output", centroid_args.output, "Write JSON here instead of stdout");

  auto* config_cmd = app.add_subcommand("config", "Configuration tools");
  config_cmd->require_subcommand(1, 1);
  CommonFlags show_flags;
  auto* show_cmd = config_cmd->add_subcommand("show", "Print the effective configuration");
  show_flags.attach(show_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*perturb_cmd) return cmd_perturb(perturb_args, out);
    if (*generate_cmd) return cmd_generate(generate_args, out);
    if (*consistency_cmd) return cmd_consistency(consistency_args, out, err);
    if (*detect_cmd) return cmd_detect(detect_args, out);
    if (*eval_cmd) return cmd_evaluate(eval_args, out);
    if (*extract_cmd) return cmd_extract(extract_args, out);
    if (*validate_cmd) return cmd_rsd_validate(validate_args, out);
    if (*centroid_cmd) return cmd_rsd_centroid(centroid_args, out);
    if (*show_cmd) {
      const RunConfig cfg = show_flags.resolve();
      out << cfg.dump() << "# digest " << cfg.digest() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace jbdetect::cli
