#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guirepair/util.hpp"

namespace guirepair {

/// An image attached to an issue, loaded eagerly.
struct ImageRef {
  std::string id;
  std::string source;      // path (relative to the record) or URL, as written in the record
  std::string media_type;  // image/png, image/jpeg, image/gif
  std::string payload;     // raw bytes
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct IssueReport {
  std::string instance_id;
  std::string title;
  std::string body_text;  // byte-exact from the record
  std::vector<ImageRef> images;
  std::optional<std::string> repro_code;

  friend bool operator==(const IssueReport&, const IssueReport&) = default;
};

using ImageFetcher = std::function<std::string(const std::string& url)>;
ImageFetcher default_image_fetcher();

/// Loads an issue record (JSON). Image sources that look like URLs go through `fetch`;
/// anything else is resolved relative to the record's directory.
IssueReport load_issue_report(const fs::path& path, const ImageFetcher& fetch = default_image_fetcher());

/// Body of the first fenced block whose info string carries a `repro` / `reproduction` tag.
std::optional<std::string> extract_tagged_repro(std::string_view body);

inline const std::vector<std::string> kDefaultDocDirs = {"docs", "doc", "documentation", "website/docs"};

struct RepoSnapshot {
  fs::path root;
  std::vector<std::string> file_index;    // text files, sorted, relative, '/'-separated
  std::vector<std::string> binary_files;  // flagged and excluded from text operations
  std::optional<std::string> doc_root;

  bool contains(std::string_view rel) const;
  /// Reads a text file from the index; throws UnknownFile for paths outside it.
  std::string read(std::string_view rel) const;
  std::vector<std::string> doc_files() const;
  /// Text files with a source-code extension outside the documentation tree.
  std::vector<std::string> code_files() const;

  friend bool operator==(const RepoSnapshot&, const RepoSnapshot&) = default;
};

bool is_code_path(std::string_view rel);
/// Null byte in the first 8 KiB.
bool looks_binary(std::string_view head);

RepoSnapshot snapshot_repository(const fs::path& root,
                                 std::span<const std::string> doc_dir_candidates = kDefaultDocDirs);

/// Indented tree of `paths` (directories end with '/', four-space indent per level).
/// Children are listed directories first, each group sorted by name.
std::string render_path_tree(std::span<const std::string> paths);

/// Tree of documentation filenames under doc_root. Throws NoDocumentation when there is
/// no doc_root or it holds no text files.
std::string doc_tree(const RepoSnapshot& snapshot);

}  // namespace guirepair
