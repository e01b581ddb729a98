#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/config.hpp"
#include "guirepair/validate.hpp"

namespace guirepair {

struct PredictionRecord {
  std::string instance_id;
  std::string model_name_or_path;
  std::string model_patch;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// One JSON object (keys in instance_id, model_name_or_path, model_patch order), no newline.
std::string prediction_line(const PredictionRecord& record);
void emit_predictions(const std::vector<PredictionRecord>& records, const fs::path& path);
std::vector<PredictionRecord> read_predictions(const fs::path& path);

std::unique_ptr<ModelBackend> make_backend(const ProviderConfig& config);
/// Replay mode never constructs a backend; `backend` overrides the configured one otherwise.
std::unique_ptr<Provider> make_provider(const AppConfig& config, ProviderMode mode,
                                        std::unique_ptr<ModelBackend> backend = nullptr);

nlohmann::json ledger_json(const CostLedger& ledger);

struct Localization {
  FileLocalizationResult files;
  HunkLocalizationResult hunks;
};

/// The repair workflow for one issue, stage by stage. Every stage persists its artifacts
/// under the run directory so later stages can run in a separate invocation.
class Pipeline {
 public:
  Pipeline(AppConfig config, Variant variant, Provider& provider, IssueReport issue,
           RepoSnapshot snapshot, fs::path run_dir);

  DocumentSet mine();
  std::optional<ReproArtifact> repro(const DocumentSet& knowledge);
  Localization localize(const IssueReportPlus& plus);
  GenerationResult generate(const IssueReportPlus& plus, const std::vector<BugHunk>& hunks);
  ValidationVerdict validate(const IssueReportPlus& plus, const std::vector<PatchCandidate>& candidates);
  PredictionRecord finish(const std::vector<PatchCandidate>& candidates,
                          const std::optional<ValidationVerdict>& verdict, const std::string& status);

  /// All stages, ending with predictions.jsonl in the run directory.
  PredictionRecord run();

  // Artifacts of earlier stages.
  DocumentSet load_knowledge() const;
  std::optional<ReproArtifact> load_repro_artifact() const;
  std::vector<BugHunk> load_hunks() const;
  std::vector<PatchCandidate> load_candidates() const;
  IssueReportPlus plus(const DocumentSet& knowledge, std::optional<ReproArtifact> repro) const;

  const PipelineConfig& pipeline_config() const { return cfg_; }
  const fs::path& run_dir() const { return run_dir_; }
  /// Writes ledger.json, merging with entries from earlier invocations on the same run.
  void write_ledger() const;

 private:
  AppConfig config_;
  PipelineConfig cfg_;
  Variant variant_;
  Provider& provider_;
  PromptLibrary prompts_;
  IssueReport issue_;
  RepoSnapshot snapshot_;
  fs::path run_dir_;
  CostLedger prior_ledger_;
  nlohmann::json meta_ = nlohmann::json::object();  // fallbacks and stage notes for run.json
};

struct RunOptions {
  fs::path issue_path;
  fs::path repo_path;
  AppConfig config;
  ProviderMode mode = ProviderMode::Replay;
  Variant variant = Variant::Full;
  fs::path out_dir = "runs";
  std::optional<std::string> run_id;
  std::unique_ptr<ModelBackend> backend;  // overrides config (tests)
};

struct RunResult {
  PredictionRecord prediction;
  fs::path run_dir;
  CostLedger ledger;
  std::size_t backend_calls = 0;
};

/// Loads the issue and repository, runs every stage, and writes the run directory.
RunResult run_end_to_end(RunOptions options);

std::string default_run_id();

}  // namespace guirepair
