#include "guirepair/pipeline.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "guirepair/error.hpp"

namespace guirepair {
namespace {

using ojson = nlohmann::ordered_json;

template <typename F>
auto in_stage(std::string_view name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("[{}] {}", name, e.detail()));
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::IoError, path.string() + " is missing; run the earlier stage first");
  }
  return nlohmann::json::parse(read_file(path));
}

std::string short_digest(const std::string& digest) { return digest.substr(0, 16); }

}  // namespace

std::string prediction_line(const PredictionRecord& record) {
  ojson j;
  j["instance_id"] = record.instance_id;
  j["model_name_or_path"] = record.model_name_or_path;
  j["model_patch"] = record.model_patch;
  return j.dump();
}

void emit_predictions(const std::vector<PredictionRecord>& records, const fs::path& path) {
  std::string out;
  for (const auto& r : records) out += prediction_line(r) + "\n";
  write_file(path, out);
}

std::vector<PredictionRecord> read_predictions(const fs::path& path) {
  std::vector<PredictionRecord> out;
  const std::string text = read_file(path);
  for (auto line : split_lines(text)) {
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    out.push_back({j.at("instance_id").get<std::string>(), j.at("model_name_or_path").get<std::string>(),
                   j.at("model_patch").get<std::string>()});
  }
  return out;
}

std::unique_ptr<ModelBackend> make_backend(const ProviderConfig& config) {
  if (config.backend == "scripted") {
    if (!config.script) throw Error(ErrorCode::ConfigError, "scripted backend needs provider.script");
    return std::make_unique<ScriptedBackend>(ScriptedBackend::load(*config.script, config.embedding_dimension));
  }
  if (config.backend == "http") {
    HttpBackendOptions opts;
    opts.chat_url = config.chat_url;
    opts.embeddings_url = config.embeddings_url;
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key) throw Error(ErrorCode::ConfigError, config.api_key_env + " is not set");
    opts.api_key = key;
    opts.max_retries = config.max_retries;
    opts.backoff_base = std::chrono::milliseconds(config.backoff_ms);
    return std::make_unique<HttpBackend>(std::move(opts));
  }
  throw Error(ErrorCode::ConfigError, "unknown provider backend '" + config.backend + "'");
}

std::unique_ptr<Provider> make_provider(const AppConfig& config, ProviderMode mode,
                                        std::unique_ptr<ModelBackend> backend) {
  ProviderOptions opts;
  opts.mode = mode;
  opts.chat_model = config.provider.chat_model;
  opts.embedding_model = config.provider.embedding_model;
  opts.max_tokens = config.provider.max_tokens;
  opts.prices = config.provider.prices;
  opts.transcript_path = config.provider.transcript;
  if (mode == ProviderMode::Replay) {
    backend.reset();
  } else if (!backend) {
    backend = make_backend(config.provider);
  }
  return std::make_unique<Provider>(std::move(opts), std::move(backend));
}

nlohmann::json ledger_json(const CostLedger& ledger) {
  auto j = ledger.to_json();
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [stage, t] : ledger.subtotals_by_stage()) {
    stages[stage] = {{"prompt_tokens", t.prompt_tokens},
                     {"completion_tokens", t.completion_tokens},
                     {"picodollars", t.picodollars}};
  }
  j["by_stage"] = stages;
  return j;
}

Pipeline::Pipeline(AppConfig config, Variant variant, Provider& provider, IssueReport issue,
                   RepoSnapshot snapshot, fs::path run_dir)
    : config_(std::move(config)),
      cfg_(config_.pipeline),
      variant_(variant),
      provider_(provider),
      prompts_(config_.prompts_dir),
      issue_(std::move(issue)),
      snapshot_(std::move(snapshot)),
      run_dir_(std::move(run_dir)) {
  apply_variant(cfg_, variant_);
  cfg_.validate();
  fs::create_directories(run_dir_);
  if (fs::exists(run_dir_ / "ledger.json")) {
    prior_ledger_ = CostLedger::from_json(read_json(run_dir_ / "ledger.json"));
  }
  if (fs::exists(run_dir_ / "run.json")) {
    meta_ = read_json(run_dir_ / "run.json").value("notes", nlohmann::json::object());
  }
}

DocumentSet Pipeline::mine() {
  DocumentSet set;
  if (cfg_.enable_image2code) {
    set = in_stage("mine", [&] { return mine_knowledge(provider_, prompts_, issue_, snapshot_, cfg_); });
  }
  write_json(run_dir_ / "knowledge" / "documents.json", to_json(set));
  return set;
}

std::optional<ReproArtifact> Pipeline::repro(const DocumentSet& knowledge) {
  std::optional<ReproArtifact> art;
  if (issue_.repro_code || cfg_.enable_image2code) {
    try {
      art = in_stage("repro", [&] { return generate_repro(provider_, prompts_, issue_, knowledge, cfg_); });
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCodeBlock && e.code() != ErrorCode::GenerationRefused) throw;
      spdlog::warn("{}", e.what());
      meta_["repro_failure"] = e.what();
    }
  }
  std::error_code ec;
  fs::remove_all(run_dir_ / "repro", ec);
  if (art) save_repro(*art, run_dir_ / "repro");
  return art;
}

IssueReportPlus Pipeline::plus(const DocumentSet& knowledge, std::optional<ReproArtifact> repro) const {
  return augment_issue_report(issue_, std::move(repro), knowledge);
}

Localization Pipeline::localize(const IssueReportPlus& plus) {
  Localization loc;
  loc.files = in_stage("localize", [&] { return localize_files(provider_, prompts_, plus, snapshot_, cfg_); });
  loc.hunks = in_stage("localize",
                       [&] { return localize_hunks(provider_, prompts_, plus, loc.files.key_files, snapshot_, cfg_); });
  if (loc.files.filter_fallback) meta_["key_file_fallback"] = true;
  if (loc.hunks.fallback) meta_["hunk_fallback"] = true;
  write_json(run_dir_ / "localization.json", to_json(loc.files, loc.hunks));
  return loc;
}

GenerationResult Pipeline::generate(const IssueReportPlus& plus, const std::vector<BugHunk>& hunks) {
  GenerationBudget budget;
  budget.greedy_temperature = cfg_.default_temperature;
  budget.sampled = cfg_.patch_samples;
  budget.sampled_temperature = cfg_.patch_sample_temperature;
  budget.cap = cfg_.max_candidates();
  std::error_code ec;
  fs::remove_all(run_dir_ / "candidates", ec);
  fs::create_directories(run_dir_ / "candidates");
  try {
    auto result = in_stage("gen", [&] {
      return generate_candidates(provider_, prompts_, plus, hunks, snapshot_, budget, !cfg_.enable_code2image);
    });
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      const auto& c = result.candidates[i];
      list.push_back(to_json(c));
      write_file(run_dir_ / "candidates" / fmt::format("{:02}-{}.diff", i, short_digest(c.digest)), c.unified_diff);
    }
    nlohmann::json dropped = nlohmann::json::array();
    for (const auto& d : result.dropped) dropped.push_back({{"sample_index", d.sample_index}, {"reason", d.reason}});
    write_json(run_dir_ / "candidates" / "candidates.json",
               {{"completions", result.completions}, {"candidates", list}, {"dropped", dropped}});
    return result;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoValidCandidates) {
      write_json(run_dir_ / "candidates" / "candidates.json",
                 {{"completions", 0}, {"candidates", nlohmann::json::array()}, {"error", e.what()}});
    }
    throw;
  }
}

ValidationVerdict Pipeline::validate(const IssueReportPlus& plus, const std::vector<PatchCandidate>& candidates) {
  auto viewport = config_.project.viewport.value_or(cfg_.viewport);
  auto shots = run_dir_ / "shots";
  auto work = run_dir_ / "work";
  std::error_code ec;
  fs::remove_all(shots, ec);
  fs::create_directories(shots);
  std::optional<RenderHarness> harness;
  if (!config_.project.harness_cmd.empty()) {
    harness.emplace(config_.project.harness_cmd, std::chrono::milliseconds(config_.project.render_timeout_ms));
  } else {
    spdlog::warn("{}: no render harness configured", issue_.instance_id);
  }

  ValidationHooks hooks;
  hooks.threshold = cfg_.pixel_threshold;
  hooks.tolerance = cfg_.pixel_tolerance;
  if (plus.repro && harness) {
    hooks.render_bug = [&]() -> std::optional<ScreenshotRef> {
      auto dir = build_variant(snapshot_, nullptr, config_.project, work / "bug");
      return render_scenario(dir, *plus.repro, config_.project, viewport, "bug", shots / "bug.png", *harness);
    };
  }
  hooks.render_candidate = [&](const PatchCandidate& c) {
    auto dir = build_variant(snapshot_, &c, config_.project, work / "candidate");
    return render_scenario(dir, *plus.repro, config_.project, viewport, short_digest(c.digest),
                           shots / (short_digest(c.digest) + ".png"), *harness);
  };
  hooks.judge = [&](const ScreenshotRef& bug, const ScreenshotRef& patch) {
    return judge_patch(provider_, prompts_, plus, bug, patch);
  };
  auto verdict = in_stage("validate", [&] { return select_patch(candidates, hooks); });
  fs::remove_all(work, ec);
  write_json(run_dir_ / "verdict.json", to_json(verdict, candidates));
  return verdict;
}

PredictionRecord Pipeline::finish(const std::vector<PatchCandidate>& candidates,
                                  const std::optional<ValidationVerdict>& verdict, const std::string& status) {
  PredictionRecord rec{issue_.instance_id, config_.model_name_or_path, ""};
  std::optional<std::size_t> selected;
  if (verdict) {
    selected = verdict->selected;
  } else if (!candidates.empty()) {
    selected = 0;
    write_json(run_dir_ / "verdict.json",
               {{"validation", "disabled"}, {"selected", candidates.front().digest}, {"fallback_used", false}});
  }
  if (selected) rec.model_patch = candidates.at(*selected).unified_diff;
  emit_predictions({rec}, run_dir_ / "predictions.jsonl");
  nlohmann::json run{{"instance_id", issue_.instance_id},
                     {"variant", to_string(variant_)},
                     {"mode", to_string(provider_.options().mode)},
                     {"status", status},
                     {"pipeline", to_json(cfg_)},
                     {"candidate_count", candidates.size()},
                     {"notes", meta_}};
  run["selected"] = selected ? nlohmann::json(candidates.at(*selected).digest) : nlohmann::json(nullptr);
  write_json(run_dir_ / "run.json", run);
  write_ledger();
  return rec;
}

void Pipeline::write_ledger() const {
  CostLedger all = prior_ledger_;
  for (auto& e : provider_.ledger().entries()) all.append(e);
  write_json(run_dir_ / "ledger.json", ledger_json(all));
}

PredictionRecord Pipeline::run() {
  auto knowledge = mine();
  auto artifact = repro(knowledge);
  auto p = plus(knowledge, artifact);
  auto loc = localize(p);
  std::vector<BugHunk> hunks;
  for (const auto& h : loc.hunks.hunks) hunks.push_back(h.hunk);
  GenerationResult gen;
  try {
    gen = generate(p, hunks);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoValidCandidates) throw;
    spdlog::warn("{}", e.what());
    return finish({}, std::nullopt, "no_valid_candidates");
  }
  std::optional<ValidationVerdict> verdict;
  if (cfg_.enable_code2image) verdict = validate(p, gen.candidates);
  return finish(gen.candidates, verdict, "ok");
}

DocumentSet Pipeline::load_knowledge() const {
  auto path = run_dir_ / "knowledge" / "documents.json";
  if (!fs::exists(path)) return {};
  return document_set_from_json(read_json(path));
}

std::optional<ReproArtifact> Pipeline::load_repro_artifact() const {
  if (!fs::exists(run_dir_ / "repro" / "meta.json")) return std::nullopt;
  return guirepair::load_repro(run_dir_ / "repro");
}

std::vector<BugHunk> Pipeline::load_hunks() const {
  auto j = read_json(run_dir_ / "localization.json");
  std::vector<BugHunk> out;
  for (const auto& h : j.at("hunks")) {
    auto path = h.at("path").get<std::string>();
    auto text = read_normalized(snapshot_, path);
    int first = h.at("start_line").get<int>();
    int last = h.at("end_line").get<int>();
    out.push_back({path, h.at("element").get<std::string>(), first, last, slice_lines(text, first, last)});
  }
  return out;
}

std::vector<PatchCandidate> Pipeline::load_candidates() const {
  auto j = read_json(run_dir_ / "candidates" / "candidates.json");
  std::vector<PatchCandidate> out;
  for (const auto& c : j.at("candidates")) out.push_back(patch_candidate_from_json(c));
  return out;
}

std::string default_run_id() {
  auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y%m%dT%H%M%S}Z", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

RunResult run_end_to_end(RunOptions options) {
  auto issue = in_stage("workspace", [&] { return load_issue_report(options.issue_path); });
  auto snapshot = in_stage("workspace", [&] { return snapshot_repository(options.repo_path); });
  auto provider = make_provider(options.config, options.mode, std::move(options.backend));
  RunResult result;
  result.run_dir = options.out_dir / issue.instance_id / options.run_id.value_or(default_run_id());
  Pipeline pipeline(options.config, options.variant, *provider, std::move(issue), std::move(snapshot), result.run_dir);
  result.prediction = pipeline.run();
  provider->flush();
  result.ledger = provider->ledger();
  result.backend_calls = provider->backend_calls();
  return result;
}

}  // namespace guirepair
