#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/codeview.hpp"
#include "guirepair/repro.hpp"

namespace guirepair {

struct SuspiciousFile {
  std::string path;
  DocOrigin origin = DocOrigin::Chat;  // which selector(s) proposed it
};

struct FileLocalizationResult {
  std::vector<SuspiciousFile> suspicious_files;
  std::vector<std::string> key_files;
  std::vector<std::string> chat_dropped;  // model-named paths that do not exist
  bool filter_fallback = false;           // key files fell back to the first N by merge order
};

struct LocalizedHunk {
  BugHunk hunk;
  int sample = 0;         // index of the completion that proposed it
  std::string proposal;   // the proposal as written by the model
};

struct HunkLocalizationResult {
  std::vector<LocalizedHunk> hunks;
  std::vector<std::string> unresolved;
  bool fallback = false;  // whole-file hunks, no proposal resolved
};

/// One hunk-localization proposal parsed from a completion.
struct HunkProposal {
  std::string path;  // empty when the completion named no file
  std::string kind;  // function | class | method | element | variable | line
  std::string value;
  std::string raw;
};

std::vector<HunkProposal> parse_hunk_proposals(std::string_view completion,
                                               const std::vector<std::string>& key_files);

/// Merges chat-picked paths (first-seen order) with embedding picks.
std::vector<SuspiciousFile> merge_suspicious(const std::vector<std::string>& chat,
                                             const std::vector<std::string>& embedding);

FileLocalizationResult localize_files(Provider& provider, const PromptLibrary& prompts,
                                      const IssueReportPlus& plus, const RepoSnapshot& snapshot,
                                      const PipelineConfig& cfg);

/// Returns ≤ max_key_files paths from `suspicious`; sets `fallback` when the model's answer
/// could not be used.
std::vector<std::string> filter_key_files(Provider& provider, const PromptLibrary& prompts,
                                          const IssueReportPlus& plus,
                                          const std::vector<std::string>& suspicious,
                                          const RepoSnapshot& snapshot, const PipelineConfig& cfg,
                                          bool* fallback = nullptr);

/// Resolves one proposal against a file's text; nullopt when it names nothing there.
std::optional<BugHunk> resolve_proposal(const HunkProposal& proposal, std::string_view path,
                                        std::string_view text, int window_lines);

HunkLocalizationResult localize_hunks(Provider& provider, const PromptLibrary& prompts,
                                      const IssueReportPlus& plus,
                                      const std::vector<std::string>& key_files,
                                      const RepoSnapshot& snapshot, const PipelineConfig& cfg);

nlohmann::json to_json(const FileLocalizationResult& files, const HunkLocalizationResult& hunks);

/// File text as the pipeline sees it: line endings normalized to '\n'.
std::string read_normalized(const RepoSnapshot& snapshot, std::string_view path);

}  // namespace guirepair
