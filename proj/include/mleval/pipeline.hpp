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

// Subcommand implementations behind the command-line tool. Each takes an
// options struct and output streams so tests can drive them in-process.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mleval/aggregate.hpp"
#include "mleval/common.hpp"
#include "mleval/corpus.hpp"
#include "mleval/judge.hpp"
#include "mleval/metrics.hpp"
#include "mleval/modelio.hpp"
#include "mleval/multirun.hpp"
#include "mleval/perturb.hpp"
#include "mleval/prompting.hpp"
#include "mleval/runstore.hpp"

#ifndef MLEVAL_ASSET_DIR
#define MLEVAL_ASSET_DIR "assets"
#endif

namespace mleval {

inline constexpr std::uint64_t kDefaultSeed = 20250917;

/// Asset root: $MLEVAL_ASSETS, else the directory baked in at build time.
inline fs::path asset_dir() {
  if (const char* e = std::getenv("MLEVAL_ASSETS"); e && *e) return e;
  return MLEVAL_ASSET_DIR;
}

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads.
inline void parallel_for(std::size_t n, std::size_t workers,
                         const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Prediction extraction

struct Extracted {
  json prediction;
  bool valid = false;
};

inline Extracted extract_prediction(const Sample& s,
                                    const std::optional<LabelSpace>& ls,
                                    std::string_view raw,
                                    ExtractionMode mode) {
  Extracted e;
  switch (s.task) {
    case TaskKind::SingleLabel: {
      const auto l = extract_label(raw, *ls, mode);
      e.prediction = l ? json(*l) : json(nullptr);
      e.valid = l.has_value();
      break;
    }
    case TaskKind::MultipleChoice: {
      const auto& choices = *s.choices;
      const auto l = extract_choice(raw, choices.size(), mode, &choices);
      e.prediction = l ? json(*l) : json(nullptr);
      e.valid = l.has_value();
      break;
    }
    case TaskKind::MultiLabel: {
      const auto m = extract_multilabels(raw, *ls);
      e.prediction = m.labels;
      e.valid = !m.labels.empty();
      break;
    }
    case TaskKind::Keyphrases: {
      const auto k = extract_keyphrases(raw);
      e.prediction = k;
      e.valid = !k.empty();
      break;
    }
    default: {
      const std::string text(trim(raw));
      e.prediction = text;
      e.valid = !text.empty();
    }
  }
  return e;
}

/// Headline metric per task, used for the console summary.
inline std::string primary_metric(TaskKind t) {
  switch (t) {
    case TaskKind::SingleLabel:
    case TaskKind::MultipleChoice:
      return "accuracy";
    case TaskKind::MultiLabel:
      return "f1";
    case TaskKind::Summarization:
      return "rougeLsum";
    case TaskKind::Keyphrases:
      return "keyphrase_f1";
    default:
      return "rougeL";
  }
}

inline std::string summary_table(const Run& run) {
  const auto metric = primary_metric(run.manifest.task);
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %8s %6s %8s %7s %12s\n", "language",
                "samples", "runs", "invalid", "errors", metric.c_str());
  os << line;
  for (const auto& lang : run.manifest.languages) {
    if (!run.metrics["languages"].contains(lang)) continue;
    const auto& m = run.metrics["languages"][lang];
    const auto& v = m["metrics"];
    std::string value = "-";
    if (v.contains(metric)) value = format_double(v[metric]["mean"].get<double>());
    std::snprintf(line, sizeof line, "%-10s %8zu %6zu %8zu %7zu %12s\n",
                  lang.c_str(), m["n_samples"].get<std::size_t>(),
                  m["n_runs"].get<std::size_t>(),
                  m["invalid"].get<std::size_t>(),
                  m["errors"].get<std::size_t>(), value.c_str());
    os << line;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  fs::path dataset;
  /// Empty means every language in the dataset.
  std::vector<std::string> languages;
  fs::path model_config;
  std::size_t runs = 1;
  /// Samples per language; 0 means all.
  std::size_t samples = 0;
  std::uint64_t seed = kDefaultSeed;
  SamplingStrategy sampling = SamplingStrategy::SeededRandom;
  std::optional<std::string> attack;
  std::optional<fs::path> synonyms;
  std::optional<std::string> substituter_url;
  std::string template_id;
  std::optional<fs::path> template_dir;
  AnswerLanguage answer_language = AnswerLanguage::Target;
  ExtractionMode mode = ExtractionMode::Lenient;
  double temperature = 0.0;
  fs::path out_root = "runs";
  std::string run_id;
  std::optional<fs::path> cache_dir;
  CachePolicy cache_policy = CachePolicy::ReadWrite;
  std::size_t concurrency = 4;
  /// Test hooks.
  std::shared_ptr<ChatTransport> transport;
  std::shared_ptr<Clock> clock;
};

struct CommandResult {
  int exit_code = 0;
  fs::path path;
};

namespace detail {

inline SubstituterRegistry make_registry(const EvaluateOptions& o) {
  SubstituterRegistry reg;
  fs::path table = o.synonyms ? *o.synonyms
                              : asset_dir() / "fixtures" / "synonyms.tsv";
  if (fs::exists(table)) {
    reg.add("table", std::make_shared<TableSubstituter>(
                         TableSubstituter::from_tsv(read_file(table))));
  } else if (o.synonyms) {
    throw Error(ErrorCode::IoFailure, "cannot read " + table.string(),
                table.string());
  }
  if (o.substituter_url) {
    reg.add("http", std::make_shared<HttpSubstituter>(*o.substituter_url));
  }
  return reg;
}

inline std::string pick_template_id(const EvaluateOptions& o,
                                    const Dataset& ds) {
  if (!o.template_id.empty()) return o.template_id;
  if (ds.task == TaskKind::SingleLabel &&
      std::any_of(ds.samples.begin(), ds.samples.end(),
                  [](const Sample& s) { return s.context.has_value(); })) {
    return "single_label_pair";
  }
  return default_template_id(ds.task);
}

}  // namespace detail

/// corpus -> perturb -> prompting -> modelio -> metrics -> runstore.
/// Exit 0 on success, 2 when some calls failed, 1 on fatal errors.
inline CommandResult cmd_evaluate(const EvaluateOptions& o, std::ostream& out,
                                  std::ostream& err) {
  try {
    const std::string started = timestamp_now();
    if (o.runs == 0) {
      throw Error(ErrorCode::InvalidArgument, "--runs must be positive",
                  "runs");
    }
    const Dataset ds = load_dataset(o.dataset);
    std::vector<std::string> languages = o.languages;
    if (languages.empty()) languages = ds.languages;
    for (const auto& l : languages) {
      if (!ds.has_language(l)) {
        throw Error(ErrorCode::UnknownLanguage,
                    "dataset " + ds.name + " has no language '" + l + "'", l);
      }
    }
    const ModelEndpoint endpoint = load_endpoint_config(o.model_config);
    const auto tdir = o.template_dir ? *o.template_dir
                                     : asset_dir() / "templates";
    PromptTemplate tmpl = load_template(tdir, detail::pick_template_id(o, ds));
    tmpl.answer_language = o.answer_language;
    if (tmpl.task != ds.task) {
      throw Error(ErrorCode::TaskMismatch,
                  "template " + tmpl.id + " is for " + to_string(tmpl.task),
                  "template");
    }

    std::optional<PerturbationSpec> spec;
    SubstituterRegistry registry;
    if (o.attack) {
      spec = parse_attack(*o.attack, o.seed);
      if (spec->kind == AttackKind::WordSubstitute) {
        registry = detail::make_registry(o);
        if (o.substituter_url) spec->substituter = "http";
      }
    }

    // Sample selection and perturbation, per language in flag order.
    std::vector<Sample> originals;
    std::vector<PerturbedSample> perturbed;
    for (const auto& l : languages) {
      const auto n = o.samples == 0 ? ds.samples_for(l).size() : o.samples;
      auto picked = select_samples(ds, l, n, o.seed, o.sampling);
      if (spec) {
        auto ps = perturb_samples(picked, *spec, ds.name, &registry);
        perturbed.insert(perturbed.end(), ps.begin(), ps.end());
      }
      originals.insert(originals.end(), picked.begin(), picked.end());
    }
    std::vector<std::string> prompts;
    prompts.reserve(originals.size());
    for (std::size_t i = 0; i < originals.size(); ++i) {
      const Sample sent = spec ? perturbed[i].as_sample() : originals[i];
      prompts.push_back(render_prompt(
          tmpl, sent, ds.label_space ? &*ds.label_space : nullptr));
    }

    // Run id: a digest of everything that determines the outputs.
    std::string run_id = o.run_id;
    if (run_id.empty()) {
      StableHasher h;
      h.add(std::string_view(ds.name)).add(std::string_view(endpoint.model_id));
      for (const auto& l : languages) h.add(std::string_view(l));
      h.add(static_cast<std::uint64_t>(o.samples))
          .add(static_cast<std::uint64_t>(o.runs))
          .add(o.seed)
          .add(std::string_view(o.attack.value_or("")))
          .add(std::string_view(tmpl.id))
          .add(std::string_view(o.mode == ExtractionMode::Strict ? "strict"
                                                                 : "lenient"));
      run_id = ds.name + "-" + endpoint.name + "-" + to_hex(h.digest()).substr(0, 12);
    }
    if (fs::exists(o.out_root / run_id)) {
      throw Error(ErrorCode::DirectoryExists,
                  (o.out_root / run_id).string() + " exists", run_id);
    }

    auto clock = o.clock ? o.clock : std::make_shared<SystemClock>();
    auto transport = o.transport ? o.transport : make_transport(endpoint);
    std::shared_ptr<ResponseCache> cache;
    if (o.cache_dir) cache = std::make_shared<ResponseCache>(*o.cache_dir);
    ModelClient client(endpoint, transport, cache, clock, RetryPolicy{},
                       o.seed);

    const std::size_t n_tasks = originals.size() * o.runs;
    std::vector<PredictionRecord> records(n_tasks);
    std::atomic<std::size_t> failed{0};
    parallel_for(n_tasks, o.concurrency, [&](std::size_t t) {
      const std::size_t i = t / o.runs;
      const auto r = static_cast<std::uint32_t>(t % o.runs);
      auto& rec = records[t];
      rec.sample = originals[i];
      rec.run_index = r;
      if (spec) {
        rec.edit_count =
            perturbed[i].edits.size() + perturbed[i].context_edits.size();
      }
      CompletionRequest req;
      req.prompt = prompts[i];
      req.temperature = o.temperature;
      req.sample_id = originals[i].id;
      req.run_index = r;
      if (o.runs > 1) req.variant = "run:" + std::to_string(r);
      try {
        rec.raw_response = client.complete(req, o.cache_policy);
        auto e = extract_prediction(rec.sample, ds.label_space,
                                    rec.raw_response, o.mode);
        rec.prediction = std::move(e.prediction);
        rec.valid = e.valid;
      } catch (const Error& ex) {
        rec.prediction = nullptr;
        rec.valid = false;
        rec.error = ex.what();
        ++failed;
      }
    });
    if (n_tasks > 0 && failed == n_tasks) {
      throw Error(ErrorCode::Exhausted,
                  "every model call failed; first: " + *records.front().error);
    }

    Run run;
    auto& m = run.manifest;
    m.run_id = run_id;
    m.dataset = ds.name;
    m.task = ds.task;
    m.label_space = ds.label_space;
    m.endpoint_name = endpoint.name;
    m.model_id = endpoint.model_id;
    m.languages = languages;
    m.sample_count = originals.size();
    m.n_runs = o.runs;
    m.perturbation = spec;
    m.template_ids = {tmpl.id};
    m.extraction_mode = o.mode == ExtractionMode::Strict ? "strict" : "lenient";
    m.temperature = o.temperature;
    m.seed = o.seed;
    m.started_at = started;
    m.finished_at = timestamp_now();
    run.records = std::move(records);
    for (const auto& p : perturbed) run.perturbed.push_back(perturbed_record(p));
    run.metrics = score_run(m, run.records);
    const auto dir = write_run(o.out_root, run);
    out << summary_table(run);
    out << "run directory: " << dir.string() << "\n";
    if (failed > 0) {
      err << failed.load() << " of " << n_tasks
          << " model calls failed; see the error field in predictions.jsonl\n";
      return {2, dir};
    }
    return {0, dir};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {1, {}};
  }
}

// ---------------------------------------------------------------------------
// judge

struct JudgeOptions {
  fs::path run_dir;
  fs::path model_config;
  std::optional<fs::path> rubric_dir;
  std::optional<fs::path> cache_dir;
  CachePolicy cache_policy = CachePolicy::ReadWrite;
  std::size_t concurrency = 4;
  std::shared_ptr<ChatTransport> transport;
  std::shared_ptr<Clock> clock;
};

/// Scores every stored prediction with a judge model, then rewrites
/// verdicts.jsonl and metrics.json.
inline CommandResult cmd_judge(const JudgeOptions& o, std::ostream& out,
                               std::ostream& err) {
  try {
    Run run = load_run(o.run_dir);
    const auto config = load_judge_config(
        o.rubric_dir ? *o.rubric_dir : asset_dir() / "rubrics",
        run.manifest.task);
    const ModelEndpoint endpoint = load_endpoint_config(o.model_config);
    auto clock = o.clock ? o.clock : std::make_shared<SystemClock>();
    auto transport = o.transport ? o.transport : make_transport(endpoint);
    std::shared_ptr<ResponseCache> cache;
    if (o.cache_dir) cache = std::make_shared<ResponseCache>(*o.cache_dir);
    ModelClient client(endpoint, transport, cache, clock);
    std::atomic<std::size_t> failed{0};
    parallel_for(run.records.size(), o.concurrency, [&](std::size_t i) {
      auto& r = run.records[i];
      try {
        r.verdict = judge_prediction(client, config, r.sample,
                                     detail::text_of(r.prediction),
                                     o.cache_policy);
      } catch (const Error& e) {
        JudgeVerdict v;
        v.sample_id = r.sample.id;
        v.reason = std::string("error: ") + e.what();
        r.verdict = std::move(v);
        ++failed;
      }
    });
    run.metrics = score_run(run.manifest, run.records);
    update_verdicts(o.run_dir, run);
    out << summary_table(run);
    for (const auto& lang : run.manifest.languages) {
      const auto& l = run.metrics["languages"][lang];
      if (l["metrics"].contains("judge_score")) {
        out << lang << " judge "
            << format_double(l["metrics"]["judge_score"]["mean"].get<double>())
            << " (sd "
            << format_double(l["metrics"]["judge_score"]["sd"].get<double>())
            << ", missing " << l["judge_missing"].get<std::size_t>() << ")\n";
      }
    }
    if (failed > 0) {
      err << failed.load() << " judge calls failed\n";
      return {2, o.run_dir};
    }
    return {0, o.run_dir};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {1, {}};
  }
}

// ---------------------------------------------------------------------------
// report

inline std::vector<std::string> class_names(const RunManifest& m,
                                            std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    if (m.task == TaskKind::MultipleChoice) {
      names.push_back(choice_letter(i));
    } else if (m.label_space && i < m.label_space->size()) {
      names.push_back(m.label_space->classes[i]);
    } else {
      names.push_back(std::to_string(i));
    }
  }
  return names;
}

/// Writes metrics.csv (wide), plot_long.csv (language, metric, value, sd)
/// and confusion_<lang>.csv for classification runs.
inline std::vector<fs::path> write_report(const Run& run,
                                          const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::vector<fs::path> files;
  const auto& langs = run.metrics.at("languages");
  std::set<std::string> names;
  for (const auto& [lang, l] : langs.items()) {
    for (const auto& [name, v] : l.at("metrics").items()) names.insert(name);
  }
  auto cell = [](const json& j) {
    return j.is_null() ? std::string() : format_double(j.get<double>());
  };

  std::string wide = "language,n_samples,n_runs,invalid,errors";
  for (const auto& n : names) wide += "," + n + "," + n + "_sd";
  wide += "\n";
  std::string long_csv = "language,metric,value,sd\n";
  for (const auto& lang : run.manifest.languages) {
    if (!langs.contains(lang)) continue;
    const auto& l = langs[lang];
    wide += csv_escape(lang) + "," +
            std::to_string(l["n_samples"].get<std::size_t>()) + "," +
            std::to_string(l["n_runs"].get<std::size_t>()) + "," +
            std::to_string(l["invalid"].get<std::size_t>()) + "," +
            std::to_string(l["errors"].get<std::size_t>());
    for (const auto& n : names) {
      if (l["metrics"].contains(n)) {
        const auto& v = l["metrics"][n];
        wide += "," + cell(v["mean"]) + "," + cell(v["sd"]);
        long_csv += csv_escape(lang) + "," + n + "," + cell(v["mean"]) + "," +
                    cell(v["sd"]) + "\n";
      } else {
        wide += ",,";
      }
    }
    wide += "\n";
    if (l.contains("confusion")) {
      const auto counts =
          l["confusion"].get<std::vector<std::vector<std::uint64_t>>>();
      const auto cls = class_names(run.manifest, counts.size());
      std::string csv = "gold";
      for (const auto& c : cls) csv += "," + csv_escape(c);
      csv += ",invalid\n";
      for (std::size_t g = 0; g < counts.size(); ++g) {
        csv += csv_escape(cls[g]);
        for (auto c : counts[g]) csv += "," + std::to_string(c);
        csv += "\n";
      }
      const auto path = out_dir / ("confusion_" + lang + ".csv");
      write_file_atomic(path, csv);
      files.push_back(path);
    }
  }
  write_file_atomic(out_dir / "metrics.csv", wide);
  write_file_atomic(out_dir / "plot_long.csv", long_csv);
  files.insert(files.begin(), {out_dir / "metrics.csv", out_dir / "plot_long.csv"});
  return files;
}

inline CommandResult cmd_report(const fs::path& run_dir,
                                std::optional<fs::path> out_dir,
                                std::ostream& out, std::ostream& err) {
  try {
    const Run run = load_run(run_dir);
    const auto dir = out_dir ? *out_dir : run_dir / "report";
    for (const auto& f : write_report(run, dir)) out << f.string() << "\n";
    return {0, dir};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {1, {}};
  }
}

// ---------------------------------------------------------------------------
// inspect

inline CommandResult cmd_inspect(const fs::path& run_dir, std::size_t n,
                                 InspectOrder order, std::ostream& out,
                                 std::ostream& err) {
  try {
    const Run run = load_run(run_dir);
    for (const auto& r : inspect_top(run, n, order)) {
      json j{{"id", r.sample.id},
             {"language", r.sample.language},
             {"run", r.run_index},
             {"valid", r.valid},
             {"prediction", r.prediction},
             {"raw", r.raw_response},
             {"judge", r.verdict && r.verdict->score ? json(*r.verdict->score)
                                                     : json(nullptr)}};
      out << j.dump() << "\n";
    }
    return {0, run_dir};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {1, {}};
  }
}

// ---------------------------------------------------------------------------
// aggregate

struct AggregateOptions {
  std::vector<fs::path> score_files;
  /// Keeps only rows of this model when set.
  std::optional<std::string> model;
  std::optional<fs::path> wals;
  std::optional<fs::path> distances;
  DistanceKind distance_kind = DistanceKind::Syntactic;
  std::string reference = "en";
  double clip = 2.0;
  fs::path out_dir = "aggregate";
};

inline CommandResult cmd_aggregate(const AggregateOptions& o,
                                   std::ostream& out, std::ostream& err) {
  try {
    ScoreTable table;
    for (const auto& f : o.score_files) {
      auto t = parse_score_csv(read_file(f));
      for (auto& e : t.entries) {
        if (!o.model || e.model == *o.model) table.entries.push_back(e);
      }
    }
    const auto result = aggregate_scores(table, o.clip);
    for (const auto& w : result.warnings) err << "warning: " << w << "\n";
    fs::create_directories(o.out_dir);

    std::string agg = "language,score,n_datasets\n";
    for (const auto& [lang, a] : result.language_scores) {
      agg += csv_escape(lang) + "," + format_double(a.mean) + "," +
             std::to_string(a.count) + "\n";
    }
    write_file_atomic(o.out_dir / "aggregate.csv", agg);
    std::string heat = "dataset,language,z_tilde\n";
    for (const auto& c : result.heatmap) {
      heat += csv_escape(c.dataset) + "," + csv_escape(c.language) + "," +
              format_double(c.z_tilde) + "\n";
    }
    write_file_atomic(o.out_dir / "heatmap.csv", heat);
    out << (o.out_dir / "aggregate.csv").string() << "\n"
        << (o.out_dir / "heatmap.csv").string() << "\n";

    if (o.wals || o.distances) {
      LangScores scores, sims;
      for (const auto& [lang, a] : result.language_scores) {
        scores[lang] = a.mean;
      }
      std::string source;
      if (o.wals) {
        source = "wals";
        const auto features = parse_wals_tsv(read_file(*o.wals));
        for (const auto& [lang, s] : scores) {
          if (!features.count(lang)) continue;
          try {
            sims[lang] = wals_similarity(features, lang, o.reference);
          } catch (const Error& e) {
            err << "warning: " << e.what() << "\n";
          }
        }
      } else {
        source = o.distance_kind == DistanceKind::Syntactic ? "syntactic"
                                                             : "averaged";
        const auto m = parse_distance_tsv(read_file(*o.distances));
        for (const auto& [lang, s] : scores) {
          try {
            sims[lang] =
                similarity_from_distances(m, lang, o.distance_kind, o.reference);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::UnknownLanguage) throw;
            err << "warning: " << e.what() << "\n";
          }
        }
      }
      const auto c = correlate(scores, sims);
      std::string csv = "similarity,pearson,spearman,n\n" + source + "," +
                        format_double(c.pearson) + "," +
                        format_double(c.spearman) + "," +
                        std::to_string(c.n) + "\n";
      std::string sim_csv = "language,score,similarity\n";
      for (const auto& [lang, s] : sims) {
        if (!scores.count(lang)) continue;
        sim_csv += csv_escape(lang) + "," + format_double(scores[lang]) + "," +
                   format_double(s) + "\n";
      }
      write_file_atomic(o.out_dir / "correlation.csv", csv);
      write_file_atomic(o.out_dir / "similarity.csv", sim_csv);
      out << (o.out_dir / "correlation.csv").string() << "\n"
          << (o.out_dir / "similarity.csv").string() << "\n"
          << "pearson r = " << format_double(c.pearson)
          << ", spearman rho = " << format_double(c.spearman)
          << ", n = " << c.n << "\n";
    }
    return {0, o.out_dir};
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return {1, {}};
  }
}

}  // namespace mleval
