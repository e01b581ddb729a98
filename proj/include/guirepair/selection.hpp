#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace guirepair {

/// Paths a model named, validated against a known universe of files.
struct PathSelection {
  std::vector<std::string> files;        // valid, deduplicated, in reply order
  std::vector<std::string> directories;  // lines ending in '/', holding at least one known file
  std::vector<std::string> dropped;      // names that matched nothing
  std::string rationale;                 // reply text outside fenced blocks
  bool lenient = false;                  // recovered by scanning free text
};

/// Parses a selection reply. Grammar: one path per line inside fenced block(s); lines that
/// end in '/' name directories. Paths may be given relative to `base_dir` as well.
/// Without any fenced block, known paths mentioned anywhere in the text are taken instead.
/// Throws UnparseableSelection when neither form yields anything.
PathSelection parse_path_selection(std::string_view reply, std::span<const std::string> universe,
                                   const std::optional<std::string>& base_dir = std::nullopt);

}  // namespace guirepair
