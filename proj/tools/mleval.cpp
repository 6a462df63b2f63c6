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

// mleval: multilingual LLM evaluation harness.
//
//   mleval evaluate  --dataset xnli.jsonl --languages en,th --model m.toml
//   mleval judge     --run runs/<id> --model judge.toml
//   mleval aggregate --scores table.csv [--wals wals.tsv]
//   mleval report    --run runs/<id>
//   mleval inspect   --run runs/<id> --order worst --top 10

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mleval/pipeline.hpp"

namespace {

const std::map<std::string, mleval::CachePolicy> kCachePolicies = {
    {"read-write", mleval::CachePolicy::ReadWrite},
    {"read-only", mleval::CachePolicy::ReadOnly},
    {"bypass", mleval::CachePolicy::Bypass}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilingual LLM evaluation harness"};
  app.set_version_flag("--version", std::string(mleval::kToolVersion));
  app.require_subcommand(1);

  // evaluate
  mleval::EvaluateOptions ev;
  std::string languages, attack, cache_policy = "read-write", mode = "lenient";
  std::string sampling = "random", answer_language = "target";
  std::string template_dir, cache_dir, synonyms, substituter_url;
  auto* evaluate = app.add_subcommand("evaluate", "Run a model over a dataset");
  evaluate->add_option("--dataset", ev.dataset, "Dataset JSONL")->required();
  evaluate->add_option("--languages", languages,
                       "Comma-separated ISO 639-1 codes (default: all)");
  evaluate->add_option("--model", ev.model_config, "Endpoint config (TOML)")
      ->required();
  evaluate->add_option("--runs", ev.runs, "Repeated runs per sample")
      ->capture_default_str();
  evaluate->add_option("--samples", ev.samples,
                       "Samples per language (0 = all)")
      ->capture_default_str();
  evaluate->add_option("--seed", ev.seed, "Master seed")->capture_default_str();
  evaluate->add_option("--sampling", sampling, "first | random")
      ->check(CLI::IsMember({"first", "random"}))
      ->capture_default_str();
  evaluate->add_option("--attack", attack,
                       "Perturbation: char-insert:<rate> | word-subst:<rate>");
  evaluate->add_option("--synonyms", synonyms,
                       "Synonym TSV for word substitution");
  evaluate->add_option("--substituter-url", substituter_url,
                       "Masked-LM substitution service URL");
  evaluate->add_option("--template", ev.template_id,
                       "Template id (default: per task)");
  evaluate->add_option("--template-dir", template_dir, "Template directory");
  evaluate->add_option("--answer-language", answer_language,
                       "target | english")
      ->check(CLI::IsMember({"target", "english"}))
      ->capture_default_str();
  evaluate->add_option("--extraction", mode, "strict | lenient")
      ->check(CLI::IsMember({"strict", "lenient"}))
      ->capture_default_str();
  evaluate->add_option("--temperature", ev.temperature)->capture_default_str();
  evaluate->add_option("--out", ev.out_root, "Run root directory")
      ->capture_default_str();
  evaluate->add_option("--run-id", ev.run_id,
                       "Run id (default: digest of the configuration)");
  evaluate->add_option("--cache", cache_dir, "Replay cache directory");
  evaluate->add_option("--cache-policy", cache_policy,
                       "read-write | read-only | bypass")
      ->check(CLI::IsMember({"read-write", "read-only", "bypass"}))
      ->capture_default_str();
  evaluate->add_option("--concurrency", ev.concurrency, "Worker threads")
      ->capture_default_str();

  // judge
  mleval::JudgeOptions jo;
  std::string judge_rubrics, judge_cache, judge_policy = "read-write";
  auto* judge = app.add_subcommand("judge", "Score a stored run with a judge");
  judge->add_option("--run", jo.run_dir, "Run directory")->required();
  judge->add_option("--model", jo.model_config, "Judge endpoint config")
      ->required();
  judge->add_option("--rubrics", judge_rubrics, "Rubric directory");
  judge->add_option("--cache", judge_cache, "Replay cache directory");
  judge->add_option("--cache-policy", judge_policy)
      ->check(CLI::IsMember({"read-write", "read-only", "bypass"}))
      ->capture_default_str();
  judge->add_option("--concurrency", jo.concurrency)->capture_default_str();

  // aggregate
  mleval::AggregateOptions ag;
  std::string model_filter, wals, distances, kind = "syntactic";
  auto* aggregate =
      app.add_subcommand("aggregate", "Normalize and aggregate score tables");
  aggregate->add_option("--scores", ag.score_files,
                        "CSV dataset,model,language,score")
      ->required();
  aggregate->add_option("--model", model_filter, "Keep only this model");
  aggregate->add_option("--similarity,--wals", wals, "WALS feature TSV");
  aggregate->add_option("--distances", distances, "Distance matrix TSV");
  aggregate->add_option("--distance-kind", kind, "syntactic | averaged")
      ->check(CLI::IsMember({"syntactic", "averaged"}))
      ->capture_default_str();
  aggregate->add_option("--reference", ag.reference)->capture_default_str();
  aggregate->add_option("--clip", ag.clip)->capture_default_str();
  aggregate->add_option("--out", ag.out_dir)->capture_default_str();

  // report
  std::string report_run, report_out;
  auto* report = app.add_subcommand("report", "Write CSV reports for a run");
  report->add_option("--run", report_run, "Run directory")->required();
  report->add_option("--out", report_out, "Output directory");

  // inspect
  std::string inspect_run, order = "invalid";
  std::size_t top = 10;
  auto* inspect = app.add_subcommand("inspect", "Show selected records");
  inspect->add_option("--run", inspect_run, "Run directory")->required();
  inspect->add_option("--top", top)->capture_default_str();
  inspect->add_option("--order", order, "best | worst | invalid")
      ->check(CLI::IsMember({"best", "worst", "invalid"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (*evaluate) {
    if (!languages.empty()) {
      for (auto& l : mleval::split(languages, ',')) {
        if (!mleval::trim(l).empty()) {
          ev.languages.emplace_back(mleval::trim(l));
        }
      }
    }
    if (!attack.empty()) ev.attack = attack;
    if (!synonyms.empty()) ev.synonyms = synonyms;
    if (!substituter_url.empty()) ev.substituter_url = substituter_url;
    if (!template_dir.empty()) ev.template_dir = template_dir;
    if (!cache_dir.empty()) ev.cache_dir = cache_dir;
    ev.cache_policy = kCachePolicies.at(cache_policy);
    ev.mode = mode == "strict" ? mleval::ExtractionMode::Strict
                               : mleval::ExtractionMode::Lenient;
    ev.sampling = sampling == "first" ? mleval::SamplingStrategy::FirstN
                                      : mleval::SamplingStrategy::SeededRandom;
    ev.answer_language = answer_language == "english"
                             ? mleval::AnswerLanguage::English
                             : mleval::AnswerLanguage::Target;
    return mleval::cmd_evaluate(ev, std::cout, std::cerr).exit_code;
  }
  if (*judge) {
    if (!judge_rubrics.empty()) jo.rubric_dir = judge_rubrics;
    if (!judge_cache.empty()) jo.cache_dir = judge_cache;
    jo.cache_policy = kCachePolicies.at(judge_policy);
    return mleval::cmd_judge(jo, std::cout, std::cerr).exit_code;
  }
  if (*aggregate) {
    if (!model_filter.empty()) ag.model = model_filter;
    if (!wals.empty()) ag.wals = wals;
    if (!distances.empty()) ag.distances = distances;
    ag.distance_kind = kind == "averaged" ? mleval::DistanceKind::Averaged
                                          : mleval::DistanceKind::Syntactic;
    return mleval::cmd_aggregate(ag, std::cout, std::cerr).exit_code;
  }
  if (*report) {
    std::optional<std::filesystem::path> out;
    if (!report_out.empty()) out = report_out;
    return mleval::cmd_report(report_run, out, std::cout, std::cerr).exit_code;
  }
  if (*inspect) {
    const auto o = order == "best"    ? mleval::InspectOrder::BestJudge
                   : order == "worst" ? mleval::InspectOrder::WorstJudge
                                      : mleval::InspectOrder::InvalidFirst;
    return mleval::cmd_inspect(inspect_run, top, o, std::cout, std::cerr)
        .exit_code;
  }
  return 1;
}
