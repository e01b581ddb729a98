#include "guirepair/selection.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "guirepair/error.hpp"
#include "guirepair/util.hpp"

namespace guirepair {
namespace {

// Strips list bullets, numbering and quoting a model tends to wrap paths in.
std::string clean_entry(std::string_view line) {
  auto t = trim(line);
  if (t.starts_with("- ") || t.starts_with("* ") || t.starts_with("+ ")) t = trim(t.substr(2));
  std::size_t digits = 0;
  while (digits < t.size() && std::isdigit(static_cast<unsigned char>(t[digits]))) ++digits;
  if (digits > 0 && digits + 1 < t.size() && (t[digits] == '.' || t[digits] == ')') &&
      t[digits + 1] == ' ')
    t = trim(t.substr(digits + 2));
  while (!t.empty() && (t.front() == '`' || t.front() == '"' || t.front() == '\'')) t.remove_prefix(1);
  while (!t.empty() && (t.back() == '`' || t.back() == '"' || t.back() == '\'' || t.back() == ','))
    t.remove_suffix(1);
  if (t.starts_with("./")) t.remove_prefix(2);
  return std::string(t);
}

class Resolver {
 public:
  Resolver(std::span<const std::string> universe, const std::optional<std::string>& base)
      : universe_(universe.begin(), universe.end()), base_(base) {}

  std::optional<std::string> file(std::string_view entry) const {
    auto p = normalize_relative_path(entry);
    if (p.empty()) return std::nullopt;
    if (universe_.contains(p)) return p;
    if (base_ && !base_->empty()) {
      auto q = *base_ + "/" + p;
      if (universe_.contains(q)) return q;
    }
    return std::nullopt;
  }

  std::optional<std::string> directory(std::string_view entry) const {
    auto p = normalize_relative_path(entry);
    for (const auto& candidate : {p, base_ ? *base_ + "/" + p : std::string()}) {
      if (candidate.empty()) continue;
      for (const auto& f : universe_) {
        if (path_under(f, candidate)) return candidate;
      }
    }
    return std::nullopt;
  }

 private:
  std::unordered_set<std::string> universe_;
  std::optional<std::string> base_;
};

void push_unique(std::vector<std::string>& v, std::string s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(std::move(s));
}

}  // namespace

PathSelection parse_path_selection(std::string_view reply, std::span<const std::string> universe,
                                   const std::optional<std::string>& base_dir) {
  Resolver resolve(universe, base_dir);
  PathSelection sel;
  sel.rationale = text_outside_fences(reply);
  auto blocks = fenced_blocks(reply);
  if (!blocks.empty()) {
    for (const auto& block : blocks) {
      for (auto line : split_lines(block.body)) {
        auto entry = clean_entry(line);
        if (entry.empty()) continue;
        if (entry.back() == '/') {
          if (auto d = resolve.directory(entry)) push_unique(sel.directories, *d);
          else sel.dropped.push_back(entry);
        } else if (auto f = resolve.file(entry)) {
          push_unique(sel.files, *f);
        } else {
          sel.dropped.push_back(entry);
        }
      }
    }
  } else {
    std::string text(reply);
    for (char& c : text) {
      if (c == '`' || c == '"' || c == '\'' || c == ',' || c == '(' || c == ')' || c == '[' ||
          c == ']' || c == '*')
        c = ' ';
    }
    std::string_view rest(text);
    while (!rest.empty()) {
      auto start = rest.find_first_not_of(" \t\r\n");
      if (start == std::string_view::npos) break;
      auto end = rest.find_first_of(" \t\r\n", start);
      auto word = rest.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
      while (!word.empty() && (word.back() == '.' || word.back() == ':' || word.back() == ';'))
        word.remove_suffix(1);
      if (auto f = resolve.file(word)) push_unique(sel.files, *f);
      if (end == std::string_view::npos) break;
      rest = rest.substr(end);
    }
    if (sel.files.empty()) {
      throw Error(ErrorCode::UnparseableSelection, "no fenced block and no known path in reply");
    }
    sel.lenient = true;
  }
  for (const auto& d : sel.dropped) spdlog::warn("dropping unknown path '{}' from model selection", d);
  return sel;
}

}  // namespace guirepair
