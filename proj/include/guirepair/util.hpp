#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace guirepair {

namespace fs = std::filesystem;

// Hashing and encoding.
std::string sha256_hex(std::string_view data);
std::uint64_t fnv1a64(std::string_view data) noexcept;
std::string base64_encode(std::string_view data);
std::string base64_decode(std::string_view data);

// File IO. Both throw Error(IoError) on failure; write_file creates parent directories.
std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view data);

// Lines of `text` without their terminators. A trailing newline does not produce an empty
// final line; "" has zero lines.
std::vector<std::string_view> split_lines(std::string_view text);
std::string join_lines(const std::vector<std::string>& lines);  // each line followed by '\n'

std::string normalize_newlines(std::string_view text);  // CRLF and lone CR -> LF
bool has_crlf(std::string_view text) noexcept;
std::string restore_crlf(std::string_view text);

std::string_view trim(std::string_view s) noexcept;
std::string_view trim_right(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);
std::string replace_all(std::string text, std::string_view from, std::string_view to);

/// Forward-slash relative path with "." segments removed; empty if it escapes the root
/// (absolute path or ".." that climbs above it).
std::string normalize_relative_path(std::string_view path);
/// Path-component prefix test: "docs/a" is under "docs" but "docs2/a" is not.
bool path_under(std::string_view path, std::string_view dir_prefix) noexcept;
std::string parent_dir(std::string_view path);
std::string file_stem(std::string_view path);
std::string file_extension(std::string_view path);  // lower-case, with leading dot

/// A ``` fenced block from model output or markdown.
struct FencedBlock {
  std::string info;  // text after the opening fence, trimmed
  std::string body;  // inner lines, each terminated by '\n'
};
std::vector<FencedBlock> fenced_blocks(std::string_view text);
/// Everything outside fenced blocks, trimmed.
std::string text_outside_fences(std::string_view text);

}  // namespace guirepair
