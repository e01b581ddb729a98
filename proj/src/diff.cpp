#include "guirepair/diff.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>

#include "guirepair/error.hpp"
#include "guirepair/util.hpp"

namespace guirepair {
namespace {

// Lines keep their '\n'.
std::vector<std::string_view> terminated_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto end = nl == std::string_view::npos ? text.size() : nl + 1;
    out.push_back(text.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

void emit_line(std::string& out, char prefix, std::string_view line) {
  out += prefix;
  if (line.ends_with('\n')) {
    out += line;
  } else {
    out += line;
    out += "\n\\ No newline at end of file\n";
  }
}

std::string range(std::size_t start, std::size_t count) {
  // start is 0-based index of the first line in the hunk
  if (count == 0) return fmt::format("{},0", start);
  if (count == 1) return fmt::format("{}", start + 1);
  return fmt::format("{},{}", start + 1, count);
}

[[noreturn]] void apply_fail(const std::string& what) {
  throw Error(ErrorCode::DiffApplyFailure, what);
}

}  // namespace

std::vector<LineEdit> diff_lines(const std::vector<std::string_view>& a,
                                 const std::vector<std::string_view>& b) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  const long max = n + m;
  const long offset = max + 1;
  std::vector<long> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<long>> trace;
  long found_d = -1;
  for (long d = 0; d <= max; ++d) {
    trace.push_back(v);
    for (long k = -d; k <= d; k += 2) {
      long x;
      if (k == -d || (k != d && v[static_cast<std::size_t>(offset + k - 1)] <
                                    v[static_cast<std::size_t>(offset + k + 1)])) {
        x = v[static_cast<std::size_t>(offset + k + 1)];
      } else {
        x = v[static_cast<std::size_t>(offset + k - 1)] + 1;
      }
      long y = x - k;
      while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
        ++x;
        ++y;
      }
      v[static_cast<std::size_t>(offset + k)] = x;
      if (x >= n && y >= m) {
        found_d = d;
        break;
      }
    }
    if (found_d >= 0) break;
  }
  std::vector<LineEdit> script;
  long x = n;
  long y = m;
  for (long d = found_d; d > 0; --d) {
    const auto& vd = trace[static_cast<std::size_t>(d)];
    long k = x - y;
    long prev_k;
    if (k == -d || (k != d && vd[static_cast<std::size_t>(offset + k - 1)] <
                                  vd[static_cast<std::size_t>(offset + k + 1)])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    long prev_x = vd[static_cast<std::size_t>(offset + prev_k)];
    long prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      --x;
      --y;
      script.push_back({EditOp::Equal, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    }
    if (x == prev_x) {
      --y;
      script.push_back({EditOp::Insert, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    } else {
      --x;
      script.push_back({EditOp::Delete, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    }
  }
  while (x > 0 && y > 0) {
    --x;
    --y;
    script.push_back({EditOp::Equal, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
  }
  std::reverse(script.begin(), script.end());
  // Within a change run, list deletions before insertions.
  for (std::size_t i = 0; i < script.size();) {
    if (script[i].op == EditOp::Equal) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < script.size() && script[j].op != EditOp::Equal) ++j;
    std::stable_partition(script.begin() + static_cast<long>(i), script.begin() + static_cast<long>(j),
                          [](const LineEdit& e) { return e.op == EditOp::Delete; });
    i = j;
  }
  return script;
}

std::string unified_diff_file(std::string_view path, std::string_view before, std::string_view after,
                              int context) {
  if (before == after) return {};
  auto a = terminated_lines(before);
  auto b = terminated_lines(after);
  auto script = diff_lines(a, b);

  // Group change indices into hunks sharing context.
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [first, last] indices into script
  const auto ctx = static_cast<std::size_t>(context);
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (script[i].op == EditOp::Equal) continue;
    if (!groups.empty()) {
      std::size_t equal_run = 0;
      for (std::size_t j = groups.back().second + 1; j < i; ++j) equal_run++;
      if (equal_run <= 2 * ctx) {
        groups.back().second = i;
        continue;
      }
    }
    groups.push_back({i, i});
  }

  std::string out = fmt::format("diff --git a/{0} b/{0}\n--- a/{0}\n+++ b/{0}\n", path);
  for (auto [first, last] : groups) {
    std::size_t lo = first >= ctx ? first - ctx : 0;
    std::size_t hi = std::min(script.size() - 1, last + ctx);
    std::size_t old_start = 0, new_start = 0, old_count = 0, new_count = 0;
    bool have_old = false, have_new = false;
    std::string body;
    for (std::size_t i = lo; i <= hi; ++i) {
      const auto& e = script[i];
      switch (e.op) {
        case EditOp::Equal:
          emit_line(body, ' ', a[e.old_index]);
          break;
        case EditOp::Delete:
          emit_line(body, '-', a[e.old_index]);
          break;
        case EditOp::Insert:
          emit_line(body, '+', b[e.new_index]);
          break;
      }
      if (e.op != EditOp::Insert) {
        if (!have_old) old_start = e.old_index;
        have_old = true;
        ++old_count;
      }
      if (e.op != EditOp::Delete) {
        if (!have_new) new_start = e.new_index;
        have_new = true;
        ++new_count;
      }
    }
    // Empty side: position is the line before the hunk.
    if (!have_old) old_start = script[lo].old_index;
    if (!have_new) new_start = script[lo].new_index;
    out += fmt::format("@@ -{} +{} @@\n", range(old_start, old_count), range(new_start, new_count));
    out += body;
  }
  return out;
}

std::string unified_diff(const FileMap& before, const FileMap& after, int context) {
  std::string out;
  for (const auto& [path, text] : after) {  // std::map iterates lexicographically
    auto it = before.find(path);
    std::string_view old = it == before.end() ? std::string_view() : std::string_view(it->second);
    out += unified_diff_file(path, old, text, context);
  }
  return out;
}

std::vector<std::string> diff_paths(std::string_view diff) {
  std::vector<std::string> out;
  for (auto line : split_lines(diff)) {
    if (!line.starts_with("diff --git a/")) continue;
    auto rest = line.substr(13);
    auto sep = rest.find(" b/");
    if (sep != std::string_view::npos) out.emplace_back(rest.substr(0, sep));
  }
  return out;
}

FileMap apply_unified_diff(const FileMap& files, std::string_view diff) {
  FileMap out;
  auto lines = terminated_lines(diff);
  std::size_t i = 0;
  auto strip = [](std::string_view l) {
    if (l.ends_with('\n')) l.remove_suffix(1);
    return l;
  };
  while (i < lines.size()) {
    auto line = strip(lines[i]);
    if (!line.starts_with("--- ")) {
      ++i;
      continue;
    }
    if (i + 1 >= lines.size() || !strip(lines[i + 1]).starts_with("+++ ")) apply_fail("missing +++ line");
    std::string path(strip(lines[i + 1]).substr(4));
    if (path.starts_with("b/")) path = path.substr(2);
    i += 2;
    auto src = out.contains(path) ? out.at(path) : files.contains(path) ? files.at(path) : std::string();
    if (!files.contains(path) && !out.contains(path)) apply_fail("patch touches unknown file " + path);
    auto old_lines = terminated_lines(src);
    std::vector<std::string> result;
    std::size_t cursor = 0;
    long drift = 0;
    while (i < lines.size() && strip(lines[i]).starts_with("@@ ")) {
      auto header = strip(lines[i]);
      std::size_t old_start = 0;
      {
        auto minus = header.find('-');
        auto p = header.data() + minus + 1;
        std::from_chars(p, header.data() + header.size(), old_start);
      }
      ++i;
      std::vector<std::string> expect;
      std::vector<std::string> replacement;
      while (i < lines.size()) {
        auto l = lines[i];
        if (l.empty() || (l[0] != ' ' && l[0] != '-' && l[0] != '+' && l[0] != '\\')) break;
        if (l.starts_with("--- ") && i + 1 < lines.size() && lines[i + 1].starts_with("+++ ")) break;
        if (l[0] == '\\') {
          if (!expect.empty() && lines[i - 1][0] != '+') {
            if (expect.back().ends_with('\n')) expect.back().pop_back();
          }
          if (!replacement.empty() && lines[i - 1][0] != '-') {
            if (replacement.back().ends_with('\n')) replacement.back().pop_back();
          }
          ++i;
          continue;
        }
        std::string content(l.substr(1));
        if (l[0] != '+') expect.push_back(content);
        if (l[0] != '-') replacement.push_back(content);
        ++i;
      }
      // Locate the hunk: stated position first, then nearest match.
      long stated = static_cast<long>(old_start == 0 ? 0 : old_start - 1) + drift;
      if (expect.empty()) stated = static_cast<long>(old_start) + drift;
      auto matches_at = [&](long pos) {
        if (pos < static_cast<long>(cursor) || pos + static_cast<long>(expect.size()) > static_cast<long>(old_lines.size()))
          return false;
        for (std::size_t k = 0; k < expect.size(); ++k) {
          if (old_lines[static_cast<std::size_t>(pos) + k] != expect[k]) return false;
        }
        return true;
      };
      long found = -1;
      for (long delta = 0; delta <= static_cast<long>(old_lines.size()); ++delta) {
        if (matches_at(stated + delta)) {
          found = stated + delta;
          break;
        }
        if (delta > 0 && matches_at(stated - delta)) {
          found = stated - delta;
          break;
        }
      }
      if (found < 0) apply_fail(fmt::format("hunk at line {} does not apply to {}", old_start, path));
      for (std::size_t k = cursor; k < static_cast<std::size_t>(found); ++k) result.emplace_back(old_lines[k]);
      for (auto& r : replacement) result.push_back(std::move(r));
      cursor = static_cast<std::size_t>(found) + expect.size();
      drift = found - stated + drift;
    }
    for (std::size_t k = cursor; k < old_lines.size(); ++k) result.emplace_back(old_lines[k]);
    std::string joined;
    for (const auto& r : result) joined += r;
    out[path] = std::move(joined);
  }
  return out;
}

}  // namespace guirepair
