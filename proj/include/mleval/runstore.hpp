// Copyright 2026 The mleval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// On-disk run layout:
//
//   <root>/<run-id>/manifest.json     run configuration
//   <root>/<run-id>/predictions.jsonl one line per (sample, run)
//   <root>/<run-id>/metrics.json      pure function of the two above
//   <root>/<run-id>/perturbed.jsonl   perturbed inputs, when attacked
//   <root>/<run-id>/verdicts.jsonl    judge verdicts, when judged
//
// All JSON is canonical: sorted keys, UTF-8, LF endings.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mleval/common.hpp"
#include "mleval/corpus.hpp"
#include "mleval/judge.hpp"
#include "mleval/metrics.hpp"
#include "mleval/multirun.hpp"
#include "mleval/perturb.hpp"
#include "mleval/prompting.hpp"

namespace mleval {

namespace fs = std::filesystem;

/// UTC time as ISO 8601. SOURCE_DATE_EPOCH, when set, pins the clock so
/// repeated runs serialize identically.
inline std::string timestamp_now() {
  std::time_t t = std::time(nullptr);
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e && *e) {
    t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string run_id;
  std::string dataset;
  TaskKind task = TaskKind::SingleLabel;
  std::optional<LabelSpace> label_space;
  std::string endpoint_name;
  std::string model_id;
  std::vector<std::string> languages;
  /// Distinct samples over all languages.
  std::size_t sample_count = 0;
  std::size_t n_runs = 1;
  std::optional<PerturbationSpec> perturbation;
  std::vector<std::string> template_ids;
  std::string extraction_mode = "lenient";
  double temperature = 0.0;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string started_at;
  std::string finished_at;

  bool operator==(const RunManifest&) const = default;
};

inline json manifest_to_json(const RunManifest& m) {
  json j;
  j["run_id"] = m.run_id;
  j["dataset"] = m.dataset;
  j["task"] = to_string(m.task);
  j["label_space"] =
      m.label_space ? label_space_to_json(*m.label_space) : json(nullptr);
  j["endpoint"] = m.endpoint_name;
  j["model_id"] = m.model_id;
  j["languages"] = m.languages;
  j["sample_count"] = m.sample_count;
  j["n_runs"] = m.n_runs;
  j["perturbation"] = m.perturbation
                          ? perturbation_spec_to_json(*m.perturbation)
                          : json(nullptr);
  j["template_ids"] = m.template_ids;
  j["extraction_mode"] = m.extraction_mode;
  j["temperature"] = m.temperature;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  return j;
}

inline RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.run_id = j.at("run_id").get<std::string>();
  m.dataset = j.at("dataset").get<std::string>();
  const auto task = parse_task_kind(j.at("task").get<std::string>());
  if (!task) throw Error(ErrorCode::SchemaViolation, "unknown task", "task");
  m.task = *task;
  if (!j.at("label_space").is_null()) {
    m.label_space = label_space_from_json(j["label_space"]);
  }
  m.endpoint_name = j.at("endpoint").get<std::string>();
  m.model_id = j.at("model_id").get<std::string>();
  m.languages = j.at("languages").get<std::vector<std::string>>();
  m.sample_count = j.at("sample_count").get<std::size_t>();
  m.n_runs = j.at("n_runs").get<std::size_t>();
  if (!j.at("perturbation").is_null()) {
    m.perturbation = perturbation_spec_from_json(j["perturbation"]);
  }
  m.template_ids = j.at("template_ids").get<std::vector<std::string>>();
  m.extraction_mode = j.at("extraction_mode").get<std::string>();
  m.temperature = j.at("temperature").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.started_at = j.at("started_at").get<std::string>();
  m.finished_at = j.at("finished_at").get<std::string>();
  return m;
}

/// One model answer. The sample (with its gold reference) is embedded so a
/// run directory can be re-scored without the dataset file.
struct PredictionRecord {
  Sample sample;
  std::uint32_t run_index = 0;
  std::string raw_response;
  /// null (Invalid) | label index | ordered label list | text | phrase list.
  json prediction;
  bool valid = false;
  std::size_t edit_count = 0;
  /// Set when the model call itself failed.
  std::optional<std::string> error;
  std::optional<JudgeVerdict> verdict;

  bool operator==(const PredictionRecord&) const = default;
};

inline json record_to_json(const PredictionRecord& r) {
  json j = sample_to_json(r.sample);
  j["run"] = r.run_index;
  j["raw"] = r.raw_response;
  j["prediction"] = r.prediction;
  j["valid"] = r.valid;
  j["edits"] = r.edit_count;
  j["error"] = r.error ? json(*r.error) : json(nullptr);
  return j;
}

inline PredictionRecord record_from_json(const json& j) {
  PredictionRecord r;
  r.sample = sample_from_json(j);
  r.run_index = j.at("run").get<std::uint32_t>();
  r.raw_response = j.at("raw").get<std::string>();
  r.prediction = j.at("prediction");
  r.valid = j.at("valid").get<bool>();
  r.edit_count = j.at("edits").get<std::size_t>();
  if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
  return r;
}

inline json verdict_to_json(const PredictionRecord& r) {
  const auto& v = *r.verdict;
  return json{{"id", r.sample.id},
              {"language", r.sample.language},
              {"run", r.run_index},
              {"score", v.score ? json(*v.score) : json(nullptr)},
              {"raw", v.raw},
              {"reason", v.reason},
              {"attempts", v.attempts}};
}

struct PerturbedRecord {
  std::string sample_id;
  std::string language;
  std::string input;
  std::optional<std::string> context;
  std::vector<Edit> edits;
  std::vector<Edit> context_edits;

  bool operator==(const PerturbedRecord&) const = default;
};

inline PerturbedRecord perturbed_record(const PerturbedSample& p) {
  return {p.original.id,    p.original.language, p.perturbed_input,
          p.perturbed_context, p.edits,          p.context_edits};
}

inline json perturbed_to_json(const PerturbedRecord& p) {
  json edits = json::array(), cedits = json::array();
  for (const auto& e : p.edits) edits.push_back(edit_to_json(e));
  for (const auto& e : p.context_edits) cedits.push_back(edit_to_json(e));
  return json{{"id", p.sample_id},
              {"language", p.language},
              {"input", p.input},
              {"context", p.context ? json(*p.context) : json(nullptr)},
              {"edits", edits},
              {"context_edits", cedits}};
}

inline PerturbedRecord perturbed_from_json(const json& j) {
  PerturbedRecord p;
  p.sample_id = j.at("id").get<std::string>();
  p.language = j.at("language").get<std::string>();
  p.input = j.at("input").get<std::string>();
  if (!j.at("context").is_null()) p.context = j["context"].get<std::string>();
  for (const auto& e : j.at("edits")) p.edits.push_back(edit_from_json(e));
  for (const auto& e : j.at("context_edits")) {
    p.context_edits.push_back(edit_from_json(e));
  }
  return p;
}

struct Run {
  RunManifest manifest;
  std::vector<PredictionRecord> records;
  json metrics;
  std::vector<PerturbedRecord> perturbed;

  bool operator==(const Run&) const = default;
};

// ---------------------------------------------------------------------------
// Scoring

namespace detail {

inline Label label_of(const json& p) {
  if (p.is_number_integer()) return p.get<std::int64_t>();
  return std::nullopt;
}

inline std::string text_of(const json& p) {
  if (p.is_string()) return p.get<std::string>();
  if (p.is_array()) {
    std::string out;
    for (const auto& x : p) {
      if (!out.empty()) out += "; ";
      out += x.is_string() ? x.get<std::string>() : x.dump();
    }
    return out;
  }
  return {};
}

inline json stat_json(double mean, std::optional<double> sd) {
  return json{{"mean", mean}, {"sd", sd ? json(*sd) : json(nullptr)}};
}

inline json series_json(const std::vector<double>& xs) {
  const auto s = score_stats(xs);
  return stat_json(s.mean, s.sd);
}

inline double cosine_or_zero(const Embedder& e, std::string_view a,
                             std::string_view b) {
  const auto va = e.embed(a);
  const auto vb = e.embed(b);
  try {
    return cosine_similarity(va, vb);
  } catch (const Error&) {
    return 0.0;
  }
}

}  // namespace detail

/// Metrics for one language's records (sample order, then run order).
inline json score_language(const RunManifest& m,
                           const std::vector<const PredictionRecord*>& recs) {
  json out;
  json metrics = json::object();
  std::size_t invalid = 0, errors = 0;
  for (const auto* r : recs) {
    if (!r->valid) ++invalid;
    if (r->error) ++errors;
  }
  // Distinct samples in first-appearance order.
  std::vector<std::string> ids;
  std::map<std::string, std::vector<const PredictionRecord*>> by_id;
  for (const auto* r : recs) {
    if (!by_id.count(r->sample.id)) ids.push_back(r->sample.id);
    by_id[r->sample.id].push_back(r);
  }
  out["n_samples"] = ids.size();
  out["n_runs"] = m.n_runs;
  out["n_records"] = recs.size();
  out["invalid"] = invalid;
  out["errors"] = errors;

  if (m.task == TaskKind::SingleLabel || m.task == TaskKind::MultipleChoice) {
    std::size_t num_classes = m.label_space ? m.label_space->size() : 0;
    std::vector<std::vector<Label>> cells;
    std::vector<std::int64_t> golds;
    for (const auto& id : ids) {
      auto runs = by_id[id];
      std::sort(runs.begin(), runs.end(), [](auto* a, auto* b) {
        return a->run_index < b->run_index;
      });
      std::vector<Label> row;
      for (const auto* r : runs) row.push_back(detail::label_of(r->prediction));
      cells.push_back(std::move(row));
      golds.push_back(std::get<std::int64_t>(runs.front()->sample.reference));
      if (m.task == TaskKind::MultipleChoice && runs.front()->sample.choices) {
        num_classes = std::max(num_classes, runs.front()->sample.choices->size());
      }
    }
    const RunMatrix matrix(ids, cells);
    const auto rep = stability_report(matrix, golds, num_classes);
    metrics["accuracy"] = detail::stat_json(rep.accuracy, rep.correctness_sd);
    metrics["majority_accuracy"] =
        detail::stat_json(rep.majority_accuracy, std::nullopt);
    metrics["consistency"] =
        detail::stat_json(rep.mean_consistency, std::nullopt);
    metrics["entropy"] = detail::stat_json(rep.mean_entropy, std::nullopt);
    metrics["gini"] = detail::stat_json(rep.mean_gini, std::nullopt);
    metrics["margin"] = detail::stat_json(rep.mean_margin, std::nullopt);
    metrics["inter_run_variance"] =
        detail::stat_json(rep.inter_run_variance, std::nullopt);
    if (m.label_space && m.label_space->penalty) {
      std::vector<double> pen;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        for (const auto& p : cells[i]) pen.push_back(penalty_rating(p, golds[i]));
      }
      metrics["penalty"] = detail::series_json(pen);
    }
    out["excluded_samples"] = rep.excluded_samples;
    out["degenerate"] = rep.degenerate;
    // Confusion over majority votes (single run: the run itself).
    const auto tallies = tally_runs(matrix, num_classes);
    const auto majority = majority_labels(tallies);
    const auto cm = confusion_matrix(majority, golds, num_classes);
    out["confusion"] = cm.counts;
  } else if (m.task == TaskKind::MultiLabel) {
    std::vector<LabelSet> preds, golds;
    std::vector<std::vector<std::int64_t>> rankings;
    for (const auto* r : recs) {
      std::vector<std::int64_t> ranking;
      if (r->prediction.is_array()) {
        for (const auto& x : r->prediction) {
          if (x.is_number_integer()) ranking.push_back(x.get<std::int64_t>());
        }
      }
      preds.emplace_back(ranking.begin(), ranking.end());
      rankings.push_back(std::move(ranking));
      const auto& g = std::get<std::vector<std::int64_t>>(r->sample.reference);
      golds.emplace_back(g.begin(), g.end());
    }
    const auto prf = example_prf1(preds, golds);
    metrics["precision"] = detail::stat_json(prf.precision, prf.precision_sd);
    metrics["recall"] = detail::stat_json(prf.recall, prf.recall_sd);
    metrics["f1"] = detail::stat_json(prf.f1, prf.f1_sd);
    metrics["mrp"] = detail::stat_json(mean_r_precision(rankings, golds),
                                       std::nullopt);
  } else {
    const HashingEmbedder embedder;
    std::vector<double> r1, r2, rl, rlsum, bl, met, cos;
    std::vector<double> kp_p, kp_r, kp_f;
    for (const auto* r : recs) {
      const auto pred = detail::text_of(r->prediction);
      std::string ref;
      if (const auto* s = std::get_if<std::string>(&r->sample.reference)) {
        ref = *s;
      } else {
        ref = reference_text(r->sample.reference);
      }
      r1.push_back(rouge_n(pred, ref, 1).f1);
      r2.push_back(rouge_n(pred, ref, 2).f1);
      rl.push_back(rouge_l(pred, ref, RougeLMode::Flat).f1);
      rlsum.push_back(rouge_l(pred, ref, RougeLMode::SentenceSum).f1);
      bl.push_back(bleu(pred, ref));
      met.push_back(meteor_lite(pred, ref));
      cos.push_back(detail::cosine_or_zero(embedder, pred, ref));
      if (m.task == TaskKind::Keyphrases) {
        std::set<std::string> p, g;
        if (r->prediction.is_array()) {
          for (const auto& x : r->prediction) {
            p.insert(unicode::to_lower(trim(x.get<std::string>())));
          }
        }
        for (const auto& x :
             std::get<std::vector<std::string>>(r->sample.reference)) {
          g.insert(unicode::to_lower(trim(x)));
        }
        std::size_t hit = 0;
        for (const auto& x : p) hit += g.count(x);
        const double prec =
            p.empty() ? (g.empty() ? 1.0 : 0.0)
                      : static_cast<double>(hit) / static_cast<double>(p.size());
        const double rec =
            g.empty() ? 1.0
                      : static_cast<double>(hit) / static_cast<double>(g.size());
        kp_p.push_back(prec);
        kp_r.push_back(rec);
        kp_f.push_back(harmonic_f1(prec, rec));
      }
    }
    metrics["rouge1"] = detail::series_json(r1);
    metrics["rouge2"] = detail::series_json(r2);
    metrics["rougeL"] = detail::series_json(rl);
    metrics["rougeLsum"] = detail::series_json(rlsum);
    metrics["bleu"] = detail::series_json(bl);
    metrics["meteor"] = detail::series_json(met);
    metrics["cosine"] = detail::series_json(cos);
    if (m.task == TaskKind::Keyphrases) {
      metrics["keyphrase_precision"] = detail::series_json(kp_p);
      metrics["keyphrase_recall"] = detail::series_json(kp_r);
      metrics["keyphrase_f1"] = detail::series_json(kp_f);
    }
  }

  std::vector<JudgeVerdict> verdicts;
  for (const auto* r : recs) {
    if (r->verdict) verdicts.push_back(*r->verdict);
  }
  if (!verdicts.empty()) {
    std::size_t missing = 0;
    for (const auto& v : verdicts) missing += v.score ? 0 : 1;
    out["judge_missing"] = missing;
    if (missing < verdicts.size()) {
      const auto js = judge_aggregate(std::span<const JudgeVerdict>(verdicts));
      metrics["judge_score"] = detail::stat_json(js.mean, js.sd);
    }
  }
  out["metrics"] = std::move(metrics);
  return out;
}

/// Pure function of the manifest and stored predictions.
inline json score_run(const RunManifest& m,
                      const std::vector<PredictionRecord>& records) {
  json langs = json::object();
  for (const auto& lang : m.languages) {
    std::vector<const PredictionRecord*> recs;
    for (const auto& r : records) {
      if (r.sample.language == lang) recs.push_back(&r);
    }
    if (recs.empty()) continue;
    langs[lang] = score_language(m, recs);
  }
  return json{{"run_id", m.run_id},
              {"task", to_string(m.task)},
              {"languages", std::move(langs)}};
}

// ---------------------------------------------------------------------------
// Persistence

inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline std::string jsonl(const std::vector<json>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l.dump();
    out += '\n';
  }
  return out;
}

/// Checks record keys are unique and counts match the manifest.
inline void check_consistency(const Run& run, ErrorCode code) {
  std::set<std::tuple<std::string, std::string, std::uint32_t>> keys;
  for (const auto& r : run.records) {
    if (!keys.insert({r.sample.id, r.sample.language, r.run_index}).second) {
      throw Error(code,
                  "duplicate record " + r.sample.id + "/" + r.sample.language +
                      "/" + std::to_string(r.run_index),
                  "predictions.jsonl");
    }
  }
  if (run.records.size() != run.manifest.sample_count * run.manifest.n_runs) {
    throw Error(code,
                "manifest expects " +
                    std::to_string(run.manifest.sample_count *
                                   run.manifest.n_runs) +
                    " records, found " + std::to_string(run.records.size()),
                "predictions.jsonl");
  }
}

inline std::string verdicts_jsonl(const std::vector<PredictionRecord>& recs) {
  std::vector<json> lines;
  for (const auto& r : recs) {
    if (r.verdict) lines.push_back(verdict_to_json(r));
  }
  return jsonl(lines);
}

/// Writes `<root>/<run_id>` through a temporary sibling directory renamed
/// into place, so a run directory is either complete or absent.
inline fs::path write_run(const fs::path& root, const Run& run) {
  check_consistency(run, ErrorCode::InvalidArgument);
  const fs::path dir = root / run.manifest.run_id;
  if (fs::exists(dir)) {
    throw Error(ErrorCode::DirectoryExists, dir.string() + " exists",
                dir.string());
  }
  fs::create_directories(root);
  const fs::path tmp = root / ("." + run.manifest.run_id + ".partial");
  std::error_code ec;
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp);
  try {
    write_file_atomic(tmp / "manifest.json",
                      canonical(manifest_to_json(run.manifest)));
    std::vector<json> lines;
    lines.reserve(run.records.size());
    for (const auto& r : run.records) lines.push_back(record_to_json(r));
    write_file_atomic(tmp / "predictions.jsonl", jsonl(lines));
    write_file_atomic(tmp / "metrics.json", canonical(run.metrics));
    if (run.manifest.perturbation) {
      std::vector<json> pl;
      for (const auto& p : run.perturbed) pl.push_back(perturbed_to_json(p));
      write_file_atomic(tmp / "perturbed.jsonl", jsonl(pl));
    }
    if (std::any_of(run.records.begin(), run.records.end(),
                    [](const auto& r) { return r.verdict.has_value(); })) {
      write_file_atomic(tmp / "verdicts.jsonl", verdicts_jsonl(run.records));
    }
    fs::rename(tmp, dir);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(tmp, ec);
    throw Error(ErrorCode::IoFailure, e.what(), dir.string());
  } catch (...) {
    fs::remove_all(tmp, ec);
    throw;
  }
  return dir;
}

/// Replaces verdicts.jsonl and metrics.json of an existing run.
inline void update_verdicts(const fs::path& dir, const Run& run) {
  write_file_atomic(dir / "verdicts.jsonl", verdicts_jsonl(run.records));
  write_file_atomic(dir / "metrics.json", canonical(run.metrics));
}

namespace detail {

inline std::vector<json> read_jsonl(const fs::path& path) {
  const auto text = read_file(path);
  std::vector<json> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    ++line_no;
    if (nl == std::string::npos) {
      throw Error(ErrorCode::Corrupt,
                  "line " + std::to_string(line_no) + " is not terminated",
                  path.filename().string(), line_no);
    }
    const auto line = std::string_view(text).substr(pos, nl - pos);
    pos = nl + 1;
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::Corrupt,
                  "line " + std::to_string(line_no) + " is not a JSON object",
                  path.filename().string(), line_no);
    }
    out.push_back(std::move(j));
  }
  return out;
}

inline json read_json(const fs::path& path) {
  auto j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::Corrupt, "not valid JSON",
                path.filename().string());
  }
  return j;
}

}  // namespace detail

inline Run load_run(const fs::path& dir) {
  for (const char* f : {"manifest.json", "predictions.jsonl", "metrics.json"}) {
    if (!fs::exists(dir / f)) {
      throw Error(ErrorCode::Corrupt, std::string(f) + " is missing", f);
    }
  }
  Run run;
  try {
    run.manifest = manifest_from_json(detail::read_json(dir / "manifest.json"));
    for (const auto& j : detail::read_jsonl(dir / "predictions.jsonl")) {
      run.records.push_back(record_from_json(j));
    }
    run.metrics = detail::read_json(dir / "metrics.json");
    if (run.manifest.perturbation) {
      if (!fs::exists(dir / "perturbed.jsonl")) {
        throw Error(ErrorCode::Corrupt, "perturbed.jsonl is missing",
                    "perturbed.jsonl");
      }
      for (const auto& j : detail::read_jsonl(dir / "perturbed.jsonl")) {
        run.perturbed.push_back(perturbed_from_json(j));
      }
    }
    if (fs::exists(dir / "verdicts.jsonl")) {
      std::map<std::tuple<std::string, std::string, std::uint32_t>,
               PredictionRecord*>
          index;
      for (auto& r : run.records) {
        index[{r.sample.id, r.sample.language, r.run_index}] = &r;
      }
      for (const auto& j : detail::read_jsonl(dir / "verdicts.jsonl")) {
        const auto key = std::make_tuple(j.at("id").get<std::string>(),
                                         j.at("language").get<std::string>(),
                                         j.at("run").get<std::uint32_t>());
        const auto it = index.find(key);
        if (it == index.end()) {
          throw Error(ErrorCode::Corrupt, "verdict for an unknown record",
                      "verdicts.jsonl");
        }
        JudgeVerdict v;
        v.sample_id = std::get<0>(key);
        if (!j.at("score").is_null()) v.score = j["score"].get<int>();
        v.raw = j.at("raw").get<std::string>();
        v.reason = j.at("reason").get<std::string>();
        v.attempts = j.at("attempts").get<int>();
        it->second->verdict = std::move(v);
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Corrupt) throw;
    throw Error(ErrorCode::Corrupt, e.reason(), e.field(), e.line());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Corrupt, e.what());
  }
  check_consistency(run, ErrorCode::Corrupt);
  return run;
}

// ---------------------------------------------------------------------------
// Inspection

enum class InspectOrder { BestJudge, WorstJudge, InvalidFirst };

/// Stable sort by the chosen key; ties by sample id, language, run.
inline std::vector<PredictionRecord> inspect_top(const Run& run, std::size_t n,
                                                 InspectOrder order) {
  auto recs = run.records;
  auto tie = [](const PredictionRecord& a, const PredictionRecord& b) {
    return std::tie(a.sample.id, a.sample.language, a.run_index) <
           std::tie(b.sample.id, b.sample.language, b.run_index);
  };
  auto score = [](const PredictionRecord& r) -> std::optional<int> {
    return r.verdict ? r.verdict->score : std::nullopt;
  };
  std::stable_sort(recs.begin(), recs.end(), [&](const auto& a,
                                                 const auto& b) {
    if (order == InspectOrder::InvalidFirst) {
      if (a.valid != b.valid) return !a.valid;
      return tie(a, b);
    }
    const auto sa = score(a), sb = score(b);
    if (sa.has_value() != sb.has_value()) return sa.has_value();
    if (sa && *sa != *sb) {
      return order == InspectOrder::BestJudge ? *sa > *sb : *sa < *sb;
    }
    return tie(a, b);
  });
  if (recs.size() > n) recs.resize(n);
  return recs;
}

}  // namespace mleval
