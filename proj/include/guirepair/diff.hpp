#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace guirepair {

/// path -> file contents
using FileMap = std::map<std::string, std::string>;

enum class EditOp { Equal, Delete, Insert };

struct LineEdit {
  EditOp op;
  std::size_t old_index;  // position in old sequence (Equal/Delete)
  std::size_t new_index;  // position in new sequence (Equal/Insert)
};

/// Shortest edit script between two line sequences (Myers).
std::vector<LineEdit> diff_lines(const std::vector<std::string_view>& a,
                                 const std::vector<std::string_view>& b);

/// Unified diff of one file with `diff --git` header; empty when the texts are equal.
std::string unified_diff_file(std::string_view path, std::string_view before, std::string_view after,
                              int context = 3);

/// Sections for every path whose contents differ, in lexicographic path order.
std::string unified_diff(const FileMap& before, const FileMap& after, int context = 3);

/// Applies a unified diff produced by unified_diff (or git) to `files`, returning the
/// patched versions of every touched file. Hunk context must match exactly; a hunk may
/// float from its stated position when the surrounding text moved. Throws DiffApplyFailure.
FileMap apply_unified_diff(const FileMap& files, std::string_view diff);

/// Paths named by `diff --git` headers, in order.
std::vector<std::string> diff_paths(std::string_view diff);

}  // namespace guirepair
