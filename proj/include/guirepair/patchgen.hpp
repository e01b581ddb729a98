#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/diff.hpp"
#include "guirepair/localize.hpp"

namespace guirepair {

inline constexpr std::string_view kSearchMarker = "<<<<<<< SEARCH";
inline constexpr std::string_view kDividerMarker = "=======";
inline constexpr std::string_view kReplaceMarker = ">>>>>>> REPLACE";

struct SearchReplaceEdit {
  std::string path;
  std::string search;   // whole lines, each ending in '\n'
  std::string replace;

  friend bool operator==(const SearchReplaceEdit&, const SearchReplaceEdit&) = default;
};

/// Edit blocks in a completion: strict marker matching first, whitespace-tolerant second.
/// Throws NoEditBlocks when neither pass finds a usable block.
std::vector<SearchReplaceEdit> parse_edits(std::string_view completion);

/// Applies edits in order against LF-normalized file texts. Returns only files whose
/// content changed. Throws UnknownFile, SearchNotFound, AmbiguousMatch.
FileMap apply_edits(const RepoSnapshot& snapshot, const std::vector<SearchReplaceEdit>& edits);
/// Same, against an explicit map of original texts.
FileMap apply_edits(const FileMap& originals, const std::vector<SearchReplaceEdit>& edits);

/// Unified diff of `patched` against the snapshot's (LF-normalized) originals.
std::string to_unified_diff(const RepoSnapshot& snapshot, const FileMap& patched);

/// Digest of a diff after line-ending normalization.
std::string diff_digest(std::string_view diff);

struct Provenance {
  int sample_index = 0;  // 0 = greedy
  double temperature = 0.0;
};

struct PatchCandidate {
  std::vector<SearchReplaceEdit> edits;
  std::string unified_diff;
  Provenance provenance;
  std::string digest;
  int votes = 1;                     // completions that produced this exact diff
  std::vector<int> sample_indices;   // all of them, ascending
};

struct DroppedCompletion {
  int sample_index = 0;
  std::string reason;
};

struct GenerationBudget {
  int greedy = 1;
  double greedy_temperature = 0.0;
  int sampled = 39;
  double sampled_temperature = 1.0;
  int cap = 40;
};

struct GenerationResult {
  std::vector<PatchCandidate> candidates;
  std::vector<DroppedCompletion> dropped;
  int completions = 0;
};

/// Collapses candidates with equal digests into the earliest one, summing votes.
std::vector<PatchCandidate> dedup_candidates(std::vector<PatchCandidate> candidates);

/// Parses, applies and diffs one completion; nullopt (with `reason`) when unusable.
std::optional<PatchCandidate> candidate_from_completion(const RepoSnapshot& snapshot,
                                                        std::string_view completion,
                                                        Provenance provenance, std::string* reason);

/// Greedy completion plus a sampled batch. With `single_valid`, the sampled batch is only
/// requested when the greedy completion is unusable and the first usable one is returned.
GenerationResult generate_candidates(Provider& provider, const PromptLibrary& prompts,
                                     const IssueReportPlus& plus, const std::vector<BugHunk>& hunks,
                                     const RepoSnapshot& snapshot, const GenerationBudget& budget,
                                     bool single_valid = false);

nlohmann::json to_json(const PatchCandidate& c);
PatchCandidate patch_candidate_from_json(const nlohmann::json& j);

}  // namespace guirepair
