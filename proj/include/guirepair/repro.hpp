#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/knowledge.hpp"

namespace guirepair {

/// Token in the host page replaced by the built bundle's path at render time.
inline constexpr std::string_view kBundlePlaceholder = "{{BUNDLE}}";
inline constexpr std::string_view kReproScriptName = "script.js";

struct ReproArtifact {
  std::string script_code;
  std::string host_page;
  std::optional<std::string> notes;
  bool from_issue = false;  // wraps the issue's own repro code

  friend bool operator==(const ReproArtifact&, const ReproArtifact&) = default;
};

/// Static page that loads the bundle, then the repro script, into #root.
std::string host_page_template();

ReproArtifact generate_repro(Provider& provider, const PromptLibrary& prompts,
                             const IssueReport& issue, const DocumentSet& knowledge,
                             const PipelineConfig& cfg);

/// Writes script.js, index.html and meta.json under `dir`.
void save_repro(const ReproArtifact& repro, const fs::path& dir);
ReproArtifact load_repro(const fs::path& dir);

struct IssueReportPlus {
  IssueReport base;
  std::optional<ReproArtifact> repro;
  DocumentSet knowledge;
};

IssueReportPlus augment_issue_report(IssueReport issue, std::optional<ReproArtifact> repro,
                                     DocumentSet knowledge);

/// Prompt text: description, repro code block, then (optionally) the documentation section.
std::string render_plus_text(const IssueReportPlus& plus, bool with_knowledge);
/// render_plus_text followed by the issue images.
std::vector<MessagePart> render_plus(const IssueReportPlus& plus, bool with_knowledge);

/// The script body of the fenced block a reply carries, preferring JavaScript-tagged blocks.
std::optional<std::string> pick_code_block(std::string_view reply);

}  // namespace guirepair
