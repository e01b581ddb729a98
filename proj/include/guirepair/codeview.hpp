#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guirepair/workspace.hpp"

namespace guirepair {

/// Marker standing in for elided source regions in skeleton and hunk views.
inline constexpr std::string_view kElisionMarker = "... omitted ...";

struct RepoStructureView {
  std::string rendering;
};

struct SkeletonView {
  std::string path;
  std::string rendering;
  bool heuristic = false;  // produced by the line-classification fallback
};

struct HunkView {
  std::string path;
  std::string rendering;
  std::vector<int> kept_lines;  // 1-based source lines shown verbatim, ascending
};

struct BugHunk {
  std::string path;
  std::string element_name;
  int start_line = 0;
  int end_line = 0;
  std::string text;

  friend bool operator==(const BugHunk&, const BugHunk&) = default;
};

RepoStructureView repo_structure(const RepoSnapshot& snapshot);

SkeletonView skeleton_of_file(std::string_view path, std::string_view text);

HunkView compress_file_for_hunk_loc(std::string_view path, std::string_view text,
                                    int max_hunk_lines);

/// Renders a HunkView with right-aligned line numbers on kept lines.
std::string numbered_rendering(const HunkView& view, std::string_view text);

BugHunk extract_element_hunk(std::string_view path, std::string_view text,
                             std::string_view element_name);

BugHunk extract_context_window(std::string_view path, std::string_view text, int anchor_line,
                               int window_lines);

/// Innermost element (method before class) enclosing `line`, if the grammar path applies.
std::optional<BugHunk> enclosing_element_hunk(std::string_view path, std::string_view text,
                                              int line);

/// Line of the top-level variable declaration named `name`, if any.
std::optional<int> top_level_declaration_line(std::string_view path, std::string_view text,
                                              std::string_view name);

/// Byte slice of `text` covering lines [first, last], line terminators included.
std::string slice_lines(std::string_view text, int first, int last);

std::string context_window_label(std::string_view path, int first, int last);

}  // namespace guirepair
