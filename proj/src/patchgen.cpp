#include "guirepair/patchgen.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <unordered_map>

#include "guirepair/error.hpp"

namespace guirepair {
namespace {

bool is_fence(std::string_view line) { return trim(line).starts_with("```"); }

bool marker_is(std::string_view line, std::string_view marker, bool strict) {
  if (strict) return line == marker;
  auto t = trim(line);
  if (t == marker) return true;
  // Tolerate drift in spacing/count between the chevrons and the keyword.
  auto keyword_pos = marker.find(' ');
  if (keyword_pos == std::string_view::npos) {
    return t.size() >= 5 && std::all_of(t.begin(), t.end(), [](char c) { return c == '='; });
  }
  char chevron = marker.front();
  auto keyword = marker.substr(keyword_pos + 1);
  std::size_t i = 0;
  while (i < t.size() && t[i] == chevron) ++i;
  if (i < 5) return false;
  return trim(t.substr(i)) == keyword;
}

std::string clean_path(std::string_view line) {
  auto t = trim(line);
  while (t.starts_with("#")) t.remove_prefix(1);
  t = trim(t);
  if (t.starts_with("`") && t.ends_with("`") && t.size() >= 2) t = t.substr(1, t.size() - 2);
  if (t.starts_with("a/") || t.starts_with("b/")) t.remove_prefix(2);
  return normalize_relative_path(t);
}

std::vector<SearchReplaceEdit> parse_pass(std::string_view completion, bool strict) {
  std::vector<SearchReplaceEdit> edits;
  auto lines = split_lines(completion);
  std::string outside_path;  // last path-like line before a fence (lenient pass)
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view l = lines[i];
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!is_fence(l)) {
      if (!trim(l).empty()) outside_path = clean_path(l);
      continue;
    }
    // Inside a block: collect until the closing fence.
    std::size_t j = i + 1;
    std::vector<std::string_view> body;
    for (; j < lines.size(); ++j) {
      std::string_view b = lines[j];
      if (!b.empty() && b.back() == '\r') b.remove_suffix(1);
      if (is_fence(b) && !b.starts_with("````") && trim(b) == "```") break;
      body.push_back(b);
    }
    i = j;
    std::size_t k = 0;
    std::string path;
    if (!body.empty() && !marker_is(body[0], kSearchMarker, strict)) {
      path = strict ? normalize_relative_path(trim(body[0])) : clean_path(body[0]);
      k = 1;
    } else if (!strict) {
      path = outside_path;
    }
    if (path.empty()) continue;
    while (k < body.size()) {
      if (!marker_is(body[k], kSearchMarker, strict)) {
        ++k;
        continue;
      }
      std::string search, replace;
      std::size_t m = k + 1;
      while (m < body.size() && !marker_is(body[m], kDividerMarker, strict)) {
        search.append(body[m]).push_back('\n');
        ++m;
      }
      if (m >= body.size()) break;
      std::size_t r = m + 1;
      while (r < body.size() && !marker_is(body[r], kReplaceMarker, strict)) {
        replace.append(body[r]).push_back('\n');
        ++r;
      }
      if (r >= body.size()) break;
      if (!search.empty() && search != replace) edits.push_back({path, search, replace});
      k = r + 1;
    }
  }
  return edits;
}

std::vector<std::string_view> lines_with_ends(std::string_view text) {
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

// Line-block match ignoring leading/trailing whitespace on each line.
std::vector<std::size_t> trimmed_matches(const std::vector<std::string_view>& file,
                                         const std::vector<std::string_view>& search) {
  std::vector<std::size_t> hits;
  if (search.empty() || search.size() > file.size()) return hits;
  bool all_blank = std::all_of(search.begin(), search.end(), [](auto s) { return trim(s).empty(); });
  if (all_blank) return hits;
  for (std::size_t i = 0; i + search.size() <= file.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < search.size() && ok; ++j) ok = trim(file[i + j]) == trim(search[j]);
    if (ok) hits.push_back(i);
  }
  return hits;
}

std::string apply_one(const std::string& text, const SearchReplaceEdit& e) {
  auto exact = count_occurrences(text, e.search);
  if (exact == 1) {
    std::string out = text;
    out.replace(out.find(e.search), e.search.size(), e.replace);
    return out;
  }
  if (exact > 1) {
    throw Error(ErrorCode::AmbiguousMatch, fmt::format("search text matches {} places in {}", exact, e.path));
  }
  auto file = lines_with_ends(text);
  auto search = lines_with_ends(e.search);
  auto hits = trimmed_matches(file, search);
  if (hits.size() == 1) {
    std::string out;
    for (std::size_t i = 0; i < hits[0]; ++i) out += file[i];
    std::string replacement = e.replace;
    std::size_t last = hits[0] + search.size() - 1;
    if (!file[last].ends_with('\n') && replacement.ends_with('\n')) replacement.pop_back();
    out += replacement;
    for (std::size_t i = last + 1; i < file.size(); ++i) out += file[i];
    return out;
  }
  if (hits.empty()) {
    throw Error(ErrorCode::SearchNotFound, fmt::format("search text not found in {}", e.path));
  }
  throw Error(ErrorCode::AmbiguousMatch, fmt::format("search text matches {} places in {}", hits.size(), e.path));
}

}  // namespace

std::vector<SearchReplaceEdit> parse_edits(std::string_view completion) {
  auto edits = parse_pass(completion, true);
  if (edits.empty()) edits = parse_pass(completion, false);
  if (edits.empty()) throw Error(ErrorCode::NoEditBlocks, "completion has no usable edit block");
  return edits;
}

FileMap apply_edits(const FileMap& originals, const std::vector<SearchReplaceEdit>& edits) {
  FileMap working;
  for (const auto& e : edits) {
    if (!working.contains(e.path)) {
      auto it = originals.find(e.path);
      if (it == originals.end()) throw Error(ErrorCode::UnknownFile, e.path);
      working[e.path] = normalize_newlines(it->second);
    }
    working[e.path] = apply_one(working[e.path], e);
  }
  FileMap changed;
  for (auto& [path, text] : working) {
    if (text != normalize_newlines(originals.at(path))) changed[path] = std::move(text);
  }
  return changed;
}

FileMap apply_edits(const RepoSnapshot& snapshot, const std::vector<SearchReplaceEdit>& edits) {
  FileMap originals;
  for (const auto& e : edits) {
    if (!originals.contains(e.path)) {
      if (!snapshot.contains(e.path)) throw Error(ErrorCode::UnknownFile, e.path);
      originals[e.path] = snapshot.read(e.path);
    }
  }
  return apply_edits(originals, edits);
}

std::string to_unified_diff(const RepoSnapshot& snapshot, const FileMap& patched) {
  FileMap before;
  for (const auto& [path, text] : patched) before[path] = normalize_newlines(snapshot.read(path));
  return unified_diff(before, patched);
}

std::string diff_digest(std::string_view diff) { return sha256_hex(normalize_newlines(diff)); }

std::vector<PatchCandidate> dedup_candidates(std::vector<PatchCandidate> candidates) {
  std::vector<PatchCandidate> out;
  std::unordered_map<std::string, std::size_t> index;
  for (auto& c : candidates) {
    auto it = index.find(c.digest);
    if (it == index.end()) {
      index.emplace(c.digest, out.size());
      out.push_back(std::move(c));
      continue;
    }
    auto& kept = out[it->second];
    kept.votes += c.votes;
    kept.sample_indices.insert(kept.sample_indices.end(), c.sample_indices.begin(), c.sample_indices.end());
    std::sort(kept.sample_indices.begin(), kept.sample_indices.end());
    kept.sample_indices.erase(std::unique(kept.sample_indices.begin(), kept.sample_indices.end()),
                              kept.sample_indices.end());
  }
  return out;
}

std::optional<PatchCandidate> candidate_from_completion(const RepoSnapshot& snapshot,
                                                        std::string_view completion,
                                                        Provenance provenance, std::string* reason) {
  try {
    PatchCandidate c;
    c.edits = parse_edits(completion);
    auto patched = apply_edits(snapshot, c.edits);
    c.unified_diff = to_unified_diff(snapshot, patched);
    if (c.unified_diff.empty()) {
      if (reason) *reason = "no-op edit";
      return std::nullopt;
    }
    c.digest = diff_digest(c.unified_diff);
    c.provenance = provenance;
    c.sample_indices = {provenance.sample_index};
    return c;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::NoEditBlocks:
      case ErrorCode::SearchNotFound:
      case ErrorCode::AmbiguousMatch:
      case ErrorCode::UnknownFile:
        if (reason) *reason = e.what();
        return std::nullopt;
      default:
        throw;
    }
  }
}

GenerationResult generate_candidates(Provider& provider, const PromptLibrary& prompts,
                                     const IssueReportPlus& plus, const std::vector<BugHunk>& hunks,
                                     const RepoSnapshot& snapshot, const GenerationBudget& budget,
                                     bool single_valid) {
  if (hunks.empty()) throw Error(ErrorCode::InvalidArgument, "no hunks to patch");
  if (budget.greedy + budget.sampled > budget.cap) {
    throw Error(ErrorCode::InvalidArgument, "generation budget exceeds its cap");
  }
  std::string rendered;
  for (const auto& h : hunks) {
    rendered += fmt::format("### {} (lines {}-{}, {})\n```js\n{}", h.path, h.start_line, h.end_line,
                            h.element_name, h.text);
    if (!rendered.ends_with('\n')) rendered += '\n';
    rendered += "```\n\n";
  }
  auto text = prompts.render("patch_generate", {{"issue", render_plus_text(plus, false)}, {"hunks", rendered}});
  auto request = [&](double temperature, int n) {
    ChatRequest req;
    req.temperature = temperature;
    req.n_samples = n;
    req.messages.push_back({"system", {TextPart{prompts.raw("system")}}});
    ChatMessage user{"user", {TextPart{text}}};
    for (auto& p : image_parts(plus.base)) user.parts.push_back(std::move(p));
    req.messages.push_back(std::move(user));
    return req;
  };

  GenerationResult result;
  std::vector<PatchCandidate> raw;
  auto consume = [&](const std::vector<std::string>& samples, int first_index, double temperature) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      int idx = first_index + static_cast<int>(i);
      ++result.completions;
      std::string reason;
      auto c = candidate_from_completion(snapshot, samples[i], {idx, temperature}, &reason);
      if (c) {
        raw.push_back(std::move(*c));
        if (single_valid) return;
      } else {
        result.dropped.push_back({idx, reason});
      }
    }
  };

  if (budget.greedy > 0) {
    auto greedy = provider.chat_complete(request(budget.greedy_temperature, budget.greedy), "patch_greedy");
    consume(greedy.samples, 0, budget.greedy_temperature);
  }
  if (budget.sampled > 0 && !(single_valid && !raw.empty())) {
    auto sampled = provider.chat_complete(request(budget.sampled_temperature, budget.sampled), "patch_sample");
    consume(sampled.samples, budget.greedy, budget.sampled_temperature);
  }
  result.candidates = dedup_candidates(std::move(raw));
  for (const auto& d : result.dropped) {
    spdlog::debug("{}: completion {} dropped: {}", plus.base.instance_id, d.sample_index, d.reason);
  }
  if (result.candidates.empty()) {
    throw Error(ErrorCode::NoValidCandidates,
                fmt::format("{}: none of {} completions produced a usable patch", plus.base.instance_id,
                            result.completions));
  }
  return result;
}

nlohmann::json to_json(const PatchCandidate& c) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : c.edits) edits.push_back({{"path", e.path}, {"search", e.search}, {"replace", e.replace}});
  return {{"digest", c.digest},
          {"sample_index", c.provenance.sample_index},
          {"temperature", c.provenance.temperature},
          {"votes", c.votes},
          {"sample_indices", c.sample_indices},
          {"edits", edits},
          {"unified_diff", c.unified_diff}};
}

PatchCandidate patch_candidate_from_json(const nlohmann::json& j) {
  PatchCandidate c;
  for (const auto& e : j.at("edits")) {
    c.edits.push_back({e.at("path").get<std::string>(), e.at("search").get<std::string>(),
                       e.at("replace").get<std::string>()});
  }
  c.unified_diff = j.at("unified_diff").get<std::string>();
  c.digest = j.at("digest").get<std::string>();
  c.provenance = {j.at("sample_index").get<int>(), j.at("temperature").get<double>()};
  c.votes = j.value("votes", 1);
  c.sample_indices = j.value("sample_indices", std::vector<int>{c.provenance.sample_index});
  return c;
}

}  // namespace guirepair
