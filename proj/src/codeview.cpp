#include "guirepair/codeview.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <regex>

#include "guirepair/error.hpp"
#include "guirepair/js_outline.hpp"

namespace guirepair {
namespace {

std::string_view leading_space(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return line.substr(0, i);
}

bool starts_with_comment(std::string_view line) {
  auto t = trim(line);
  return t.starts_with("//") || t.starts_with("/*") || t.starts_with("*");
}

std::optional<js::Outline> try_outline(std::string_view path, std::string_view text) {
  if (!js::supports_path(path)) return std::nullopt;
  try {
    return js::parse_outline(text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseFailure) throw;
    return std::nullopt;
  }
}

class SkeletonBuilder {
 public:
  explicit SkeletonBuilder(std::string_view text) : lines_(split_lines(text)) {}

  void verbatim(int first, int last) {
    for (int l = first; l <= last; ++l) emitted_[l] = std::string(lines_[l - 1]);
  }

  void element(const js::Element& e) {
    if (!e.has_body) {
      verbatim(e.start_line, e.end_line);
      return;
    }
    verbatim(e.start_line, e.header_end_line - 1);
    std::string_view header = lines_[e.header_end_line - 1];
    std::string prefix(header.substr(0, std::min(e.body_open_column, header.size())));
    std::string indent = std::string(leading_space(lines_[e.start_line - 1])) + "  ";
    if (e.single_line_body) {
      auto rest = trim(header.substr(std::min(e.body_open_column, header.size())));
      if (rest.starts_with("}")) {
        emitted_[e.header_end_line] = std::string(header);
      } else {
        emitted_[e.header_end_line] = prefix + " " + std::string(kElisionMarker);
      }
      return;
    }
    emitted_[e.header_end_line] = prefix;
    if (e.kind == js::ElementKind::Class) {
      if (!e.declarations.empty()) markers_.emplace(e.header_end_line, indent);
      for (const auto& c : e.comments) comment(c);
      for (const auto& m : e.members) element(m);
    } else {
      markers_.emplace(e.header_end_line, indent);
    }
  }

  void comment(const js::LineRange& c) {
    if (!starts_with_comment(lines_[c.first - 1])) return;
    verbatim(c.first, c.last);
  }

  void blank(int line) {
    if (trim(lines_[line - 1]).empty()) emitted_.try_emplace(line, "");
  }

  std::string render() const {
    std::vector<std::string> out;
    for (const auto& [line, text] : emitted_) {
      out.push_back(text);
      auto [lo, hi] = markers_.equal_range(line);
      for (auto it = lo; it != hi; ++it) out.push_back(it->second + std::string(kElisionMarker));
    }
    return join_lines(out);
  }

 private:
  std::vector<std::string_view> lines_;
  std::map<int, std::string> emitted_;
  std::multimap<int, std::string> markers_;
};

std::string grammar_skeleton(std::string_view text, const js::Outline& outline) {
  SkeletonBuilder b(text);
  std::vector<bool> covered(static_cast<std::size_t>(outline.line_count) + 2, false);
  for (const auto& s : outline.statements) {
    for (int l = s.lines.first; l <= s.lines.last; ++l) covered[static_cast<std::size_t>(l)] = true;
    switch (s.kind) {
      case js::StatementKind::Import:
      case js::StatementKind::Export:
        b.verbatim(s.lines.first, s.lines.last);
        break;
      case js::StatementKind::Element:
        b.element(outline.elements[static_cast<std::size_t>(s.element_index)]);
        break;
      default:
        break;
    }
  }
  for (const auto& c : outline.top_comments) b.comment(c);
  for (int l = 1; l <= outline.line_count; ++l) {
    if (!covered[static_cast<std::size_t>(l)]) b.blank(l);
  }
  return b.render();
}

const std::regex& import_like() {
  static const std::regex re(
      R"(^\s*(import\b|export\s+(\{|\*|default\s+[\w$]+\s*;?\s*$)|#include\b|@import\b|@use\b|from\s+\S+\s+import\b|using\b|use\s)|\brequire\s*\()");
  return re;
}

const std::regex& header_like() {
  static const std::regex re(
      R"(^\s*(export\s+)?(default\s+)?(async\s+)?(function\b|class\b|def\b|fn\b|func\b|interface\b)|^\s*(static\s+|async\s+|get\s+|set\s+)*[\w$]+\s*\([^;]*\)\s*\{\s*$)");
  return re;
}

std::string heuristic_skeleton(std::string_view text) {
  std::vector<std::string> out;
  bool in_block = false;
  for (auto line : split_lines(text)) {
    auto t = trim(line);
    bool keep = false;
    if (in_block) {
      keep = true;
      if (t.find("*/") != std::string_view::npos) in_block = false;
    } else if (t.empty() || t.starts_with("//") || t.starts_with("#") || t.starts_with("*") ||
               t.starts_with("<!--")) {
      keep = true;
    } else if (t.starts_with("/*")) {
      keep = true;
      in_block = t.find("*/", 2) == std::string_view::npos;
    } else {
      std::string s(line);
      keep = std::regex_search(s, import_like()) || std::regex_search(s, header_like());
    }
    if (keep) out.emplace_back(line);
  }
  return join_lines(out);
}

void flatten(const std::vector<js::Element>& elements, std::vector<const js::Element*>& out) {
  for (const auto& e : elements) {
    out.push_back(&e);
    flatten(e.members, out);
  }
}

void keep_range(std::vector<bool>& keep, int first, int last) {
  for (int l = std::max(first, 1); l <= last && l < static_cast<int>(keep.size()); ++l)
    keep[static_cast<std::size_t>(l)] = true;
}

void compress_element(const js::Element& e, int max_lines, std::vector<bool>& keep) {
  if (!e.has_body || e.end_line - e.start_line + 1 <= max_lines) {
    keep_range(keep, e.start_line, e.end_line);
    return;
  }
  keep_range(keep, e.start_line, e.header_end_line);
  keep_range(keep, e.end_line, e.end_line);
  if (e.kind == js::ElementKind::Class) {
    for (int l = e.header_end_line + 1; l < e.end_line; ++l) {
      bool in_member = std::any_of(e.members.begin(), e.members.end(), [&](const auto& m) {
        return l >= m.start_line && l <= m.end_line;
      });
      if (!in_member) keep_range(keep, l, l);
    }
    for (const auto& m : e.members) compress_element(m, max_lines, keep);
    return;
  }
  for (const auto& d : e.declarations) keep_range(keep, d.first, d.last);
  for (const auto& c : e.comments) keep_range(keep, c.first, c.last);
}

BugHunk make_hunk(std::string_view path, std::string_view text, std::string name, int first,
                  int last) {
  BugHunk h;
  h.path = std::string(path);
  h.element_name = std::move(name);
  h.start_line = first;
  h.end_line = last;
  h.text = slice_lines(text, first, last);
  return h;
}

std::string normalize_query(std::string_view name) {
  std::string q(trim(name));
  for (std::string_view prefix : {"function ", "class ", "method "}) {
    if (q.starts_with(prefix)) q = std::string(trim(std::string_view(q).substr(prefix.size())));
  }
  if (q.ends_with("()")) q.resize(q.size() - 2);
  return q;
}

// Brace-counting extraction for files outside the grammar path.
BugHunk heuristic_element_hunk(std::string_view path, std::string_view text,
                               const std::string& name) {
  auto lines = split_lines(text);
  std::string simple = name.substr(name.rfind('.') == std::string::npos ? 0 : name.rfind('.') + 1);
  std::regex header("(^|[^\\w$])" + std::regex_replace(simple, std::regex(R"([.^$|()\[\]{}*+?\\])"), "\\$&") +
                    R"(\s*(\(|=\s*(function|\(|async)|\{|\s+extends\b))");
  std::vector<int> hits;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string s(lines[i]);
    if (std::regex_search(s, header) && s.find('{') != std::string::npos) hits.push_back(static_cast<int>(i) + 1);
  }
  if (hits.empty()) {
    throw Error(ErrorCode::ElementNotFound, fmt::format("{} in {}", name, path));
  }
  if (hits.size() > 1) {
    throw Error(ErrorCode::AmbiguousElement, fmt::format("{} in {}", name, path));
  }
  int depth = 0;
  bool opened = false;
  for (std::size_t i = static_cast<std::size_t>(hits[0] - 1); i < lines.size(); ++i) {
    for (char c : lines[i]) {
      if (c == '{') {
        ++depth;
        opened = true;
      } else if (c == '}') {
        --depth;
      }
    }
    if (opened && depth <= 0) {
      return make_hunk(path, text, name, hits[0], static_cast<int>(i) + 1);
    }
  }
  return make_hunk(path, text, name, hits[0], static_cast<int>(lines.size()));
}

}  // namespace

RepoStructureView repo_structure(const RepoSnapshot& snapshot) {
  auto files = snapshot.code_files();
  return {render_path_tree(files)};
}

SkeletonView skeleton_of_file(std::string_view path, std::string_view text) {
  if (text.empty()) {
    throw Error(ErrorCode::ParseFailure, fmt::format("{} is empty", path));
  }
  SkeletonView view;
  view.path = std::string(path);
  if (auto outline = try_outline(path, text)) {
    view.rendering = grammar_skeleton(text, *outline);
  } else {
    view.rendering = heuristic_skeleton(text);
    view.heuristic = true;
  }
  return view;
}

HunkView compress_file_for_hunk_loc(std::string_view path, std::string_view text,
                                    int max_hunk_lines) {
  if (max_hunk_lines < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_hunk_lines must be >= 1");
  }
  auto lines = split_lines(text);
  const int n = static_cast<int>(lines.size());
  std::vector<bool> keep(static_cast<std::size_t>(n) + 1, true);
  if (auto outline = try_outline(path, text)) {
    for (const auto& e : outline->elements) {
      for (int l = e.start_line; l <= e.end_line; ++l) keep[static_cast<std::size_t>(l)] = false;
      compress_element(e, max_hunk_lines, keep);
    }
  }
  HunkView view;
  view.path = std::string(path);
  std::vector<std::string> out;
  for (int l = 1; l <= n; ++l) {
    if (keep[static_cast<std::size_t>(l)]) {
      view.kept_lines.push_back(l);
      out.emplace_back(lines[static_cast<std::size_t>(l - 1)]);
    } else if (l == 1 || keep[static_cast<std::size_t>(l - 1)]) {
      std::string_view indent;
      for (int k = l; k <= n && !keep[static_cast<std::size_t>(k)]; ++k) {
        if (!trim(lines[static_cast<std::size_t>(k - 1)]).empty()) {
          indent = leading_space(lines[static_cast<std::size_t>(k - 1)]);
          break;
        }
      }
      out.push_back(std::string(indent) + std::string(kElisionMarker));
    }
  }
  view.rendering = join_lines(out);
  return view;
}

std::string numbered_rendering(const HunkView& view, std::string_view text) {
  auto lines = split_lines(text);
  int width = static_cast<int>(std::to_string(std::max<std::size_t>(lines.size(), 1)).size());
  std::string out;
  int previous = 0;
  for (int l : view.kept_lines) {
    if (l != previous + 1) {
      out += fmt::format("{:>{}} | {}\n", "", width, kElisionMarker);
    }
    out += fmt::format("{:>{}} | {}\n", l, width, lines[static_cast<std::size_t>(l - 1)]);
    previous = l;
  }
  if (previous != static_cast<int>(lines.size())) {
    out += fmt::format("{:>{}} | {}\n", "", width, kElisionMarker);
  }
  return out;
}

BugHunk extract_element_hunk(std::string_view path, std::string_view text,
                             std::string_view element_name) {
  std::string query = normalize_query(element_name);
  if (query.empty()) {
    throw Error(ErrorCode::ElementNotFound, fmt::format("empty element name for {}", path));
  }
  auto outline = try_outline(path, text);
  if (!outline) return heuristic_element_hunk(path, text, query);

  std::vector<const js::Element*> all;
  flatten(outline->elements, all);
  auto pick = [&](const std::string& q) -> const js::Element* {
    std::vector<const js::Element*> exact;
    std::vector<const js::Element*> suffix;
    for (const auto* e : all) {
      if (e->qualified_name == q) exact.push_back(e);
      else if (e->qualified_name.ends_with("." + q)) suffix.push_back(e);
    }
    const auto& hits = exact.empty() ? suffix : exact;
    if (hits.size() > 1) {
      throw Error(ErrorCode::AmbiguousElement,
                  fmt::format("{} matches {} elements in {}", q, hits.size(), path));
    }
    return hits.empty() ? nullptr : hits.front();
  };
  const js::Element* found = pick(query);
  if (!found) {
    std::string stem = file_stem(path) + ".";
    if (query.starts_with(stem)) found = pick(query.substr(stem.size()));
  }
  if (!found) {
    throw Error(ErrorCode::ElementNotFound, fmt::format("{} in {}", query, path));
  }
  return make_hunk(path, text, found->qualified_name, found->start_line, found->end_line);
}

BugHunk extract_context_window(std::string_view path, std::string_view text, int anchor_line,
                               int window_lines) {
  if (window_lines < 1) {
    throw Error(ErrorCode::InvalidArgument, "window_lines must be >= 1");
  }
  const int n = static_cast<int>(split_lines(text).size());
  if (anchor_line < 1 || anchor_line > n) {
    throw Error(ErrorCode::AnchorOutOfRange,
                fmt::format("line {} outside {} (1-{})", anchor_line, path, n));
  }
  int start = std::max(1, anchor_line - window_lines / 2);
  int end = std::min(n, start + window_lines - 1);
  start = std::max(1, end - window_lines + 1);
  return make_hunk(path, text, context_window_label(path, start, end), start, end);
}

std::optional<BugHunk> enclosing_element_hunk(std::string_view path, std::string_view text,
                                              int line) {
  auto outline = try_outline(path, text);
  if (!outline) return std::nullopt;
  std::vector<const js::Element*> all;
  flatten(outline->elements, all);
  const js::Element* best = nullptr;
  for (const auto* e : all) {
    if (line >= e->start_line && line <= e->end_line &&
        (!best || e->end_line - e->start_line < best->end_line - best->start_line))
      best = e;
  }
  if (!best) return std::nullopt;
  return make_hunk(path, text, best->qualified_name, best->start_line, best->end_line);
}

std::optional<int> top_level_declaration_line(std::string_view path, std::string_view text,
                                              std::string_view name) {
  auto outline = try_outline(path, text);
  if (!outline) return std::nullopt;
  for (const auto& s : outline->statements) {
    if (s.kind == js::StatementKind::Variable && s.name == name) return s.lines.first;
  }
  return std::nullopt;
}

std::string slice_lines(std::string_view text, int first, int last) {
  std::size_t pos = 0;
  int line = 1;
  while (line < first && pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) return {};
    pos = nl + 1;
    ++line;
  }
  std::size_t begin = pos;
  while (line <= last && pos < text.size()) {
    auto nl = text.find('\n', pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line;
  }
  return std::string(text.substr(begin, pos - begin));
}

std::string context_window_label(std::string_view path, int first, int last) {
  return fmt::format("@{}:{}-{}", path, first, last);
}

}  // namespace guirepair
