#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/image.hpp"
#include "guirepair/patchgen.hpp"

namespace guirepair {

struct ScreenshotRef {
  std::string label;
  fs::path png_path;
  int width = 0;
  int height = 0;
  std::vector<std::string> console_errors;
};

struct PixelDiffReport {
  std::int64_t differing_pixels = 0;
  std::int64_t total_pixels = 0;
  bool changed = false;

  friend bool operator==(const PixelDiffReport&, const PixelDiffReport&) = default;
};

/// Counts pixels with any channel differing by more than `tolerance`; changed when the
/// count exceeds `threshold`. Throws DimensionMismatch.
PixelDiffReport pixel_diff(const Image& a, const Image& b, std::int64_t threshold = 0,
                           int tolerance = 0);
PixelDiffReport pixel_diff(const ScreenshotRef& a, const ScreenshotRef& b,
                           std::int64_t threshold = 0, int tolerance = 0);

/// Indices of shots that differ visibly from the bug shot, in their original order.
std::vector<std::size_t> filter_unchanged(const ScreenshotRef& bug,
                                          const std::vector<ScreenshotRef>& shots,
                                          std::int64_t threshold = 0, int tolerance = 0);

// ---------------------------------------------------------------------------------------------
// Builds and renders

/// Copies the snapshot into `work_dir` (replacing it), writes the candidate's patched files,
/// and runs the project's build command there. Throws BuildFailure.
fs::path build_variant(const RepoSnapshot& snapshot, const PatchCandidate* candidate,
                       const ProjectConfig& project, const fs::path& work_dir);

struct RenderRequest {
  fs::path page;
  Viewport viewport;
  int settle_ms = 500;
  fs::path out;
};

struct RenderResponse {
  std::string status;  // ok | error
  std::string png;
  std::vector<std::string> console_errors;
  std::optional<std::string> message;
};

nlohmann::json to_json(const RenderRequest& req);
RenderResponse render_response_from_json(const nlohmann::json& j);

/// Client for the render harness: one subprocess per request, one JSON line each way.
class RenderHarness {
 public:
  RenderHarness(std::vector<std::string> argv, std::chrono::milliseconds timeout);
  /// Throws HarnessCrash (bad exit / unreadable reply) or PageLoadTimeout.
  RenderResponse render(const RenderRequest& req) const;

 private:
  std::vector<std::string> argv_;
  std::chrono::milliseconds timeout_;
};

/// Materializes the host page inside `build_dir`, renders it, and checks the capture.
/// Throws BundleMissing, HarnessCrash, PageLoadTimeout, RenderFailed.
ScreenshotRef render_scenario(const fs::path& build_dir, const ReproArtifact& repro,
                              const ProjectConfig& project, const Viewport& viewport,
                              const std::string& label, const fs::path& out_png,
                              const RenderHarness& harness);

// ---------------------------------------------------------------------------------------------
// Judging and selection

enum class Decision { Effective, Ineffective, SkippedUnchanged, NotEvaluated };
std::string_view to_string(Decision d);

/// Verdict token in a judge reply: a `verdict:` line, else the last non-empty line.
std::optional<bool> parse_judgement(std::string_view reply);

/// Asks the multimodal model whether the patch rendering fixes the issue; replies that
/// carry no verdict after one retry count as ineffective.
bool judge_patch(Provider& provider, const PromptLibrary& prompts, const IssueReportPlus& plus,
                 const ScreenshotRef& bug_shot, const ScreenshotRef& patch_shot);

struct TrailEntry {
  std::string digest;
  std::optional<PixelDiffReport> diff;
  Decision decision = Decision::NotEvaluated;
  std::string reason;
  std::optional<fs::path> shot;
};

struct ValidationVerdict {
  std::optional<std::size_t> selected;  // index into the candidate list
  std::vector<TrailEntry> trail;
  bool fallback_used = false;
  bool validation_skipped = false;  // no scenario to render against
  std::optional<fs::path> bug_shot;
  int judge_calls = 0;
};

struct ValidationHooks {
  /// Renders the unpatched scenario; empty when there is no repro to render.
  std::function<std::optional<ScreenshotRef>()> render_bug;
  /// Builds and renders one candidate; throws Error on build/render failure.
  std::function<ScreenshotRef(const PatchCandidate&)> render_candidate;
  std::function<bool(const ScreenshotRef& bug, const ScreenshotRef& patch)> judge;
  std::int64_t threshold = 0;
  int tolerance = 0;
};

/// Index of the earliest candidate among those with the most votes.
std::size_t majority_vote(const std::vector<PatchCandidate>& candidates,
                          const std::vector<bool>& eligible = {});

/// Sequential render -> pixel filter -> judge over candidates, stopping at the first
/// effective one. Falls back to the majority vote when nothing is judged effective.
ValidationVerdict select_patch(const std::vector<PatchCandidate>& candidates,
                               const ValidationHooks& hooks);

nlohmann::json to_json(const ValidationVerdict& v, const std::vector<PatchCandidate>& candidates);

}  // namespace guirepair
