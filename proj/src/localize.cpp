#include "guirepair/localize.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <regex>
#include <set>

#include "guirepair/error.hpp"
#include "guirepair/retrieval.hpp"
#include "guirepair/selection.hpp"

namespace guirepair {
namespace {

ChatRequest plus_request(const PromptLibrary& prompts, const IssueReportPlus& plus,
                         std::string prompt_text, double temperature, int samples) {
  ChatRequest req;
  req.temperature = temperature;
  req.n_samples = samples;
  req.messages.push_back({"system", {TextPart{prompts.raw("system")}}});
  ChatMessage user{"user", {TextPart{std::move(prompt_text)}}};
  for (auto& p : image_parts(plus.base)) user.parts.push_back(std::move(p));
  req.messages.push_back(std::move(user));
  return req;
}

bool known_kind(std::string_view k) {
  return k == "function" || k == "class" || k == "method" || k == "element" ||
         k == "variable" || k == "line";
}

std::string whole_file_label(std::string_view path) { return std::string(path); }

}  // namespace

std::string read_normalized(const RepoSnapshot& snapshot, std::string_view path) {
  return normalize_newlines(snapshot.read(path));
}

std::vector<SuspiciousFile> merge_suspicious(const std::vector<std::string>& chat,
                                             const std::vector<std::string>& embedding) {
  std::vector<SuspiciousFile> out;
  auto find = [&](const std::string& p) {
    return std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.path == p; });
  };
  for (const auto& p : chat) {
    if (find(p) == out.end()) out.push_back({p, DocOrigin::Chat});
  }
  for (const auto& p : embedding) {
    auto it = find(p);
    if (it == out.end()) out.push_back({p, DocOrigin::Embedding});
    else if (it->origin == DocOrigin::Chat) it->origin = DocOrigin::Both;
  }
  return out;
}

FileLocalizationResult localize_files(Provider& provider, const PromptLibrary& prompts,
                                      const IssueReportPlus& plus, const RepoSnapshot& snapshot,
                                      const PipelineConfig& cfg) {
  auto code = snapshot.code_files();
  auto structure = repo_structure(snapshot);
  auto text = prompts.render("file_localize", {{"issue", render_plus_text(plus, true)},
                                               {"structure", structure.rendering}});
  auto resp = provider.chat_complete(
      plus_request(prompts, plus, text, cfg.file_loc_temperature, cfg.file_loc_samples),
      "file_loc");

  FileLocalizationResult result;
  std::vector<std::string> chat;
  std::vector<std::string> flagged;
  for (std::size_t i = 0; i < resp.samples.size(); ++i) {
    try {
      auto sel = parse_path_selection(resp.samples[i], code);
      for (auto& f : sel.files) {
        if (std::find(chat.begin(), chat.end(), f) == chat.end()) chat.push_back(f);
      }
      for (auto& d : sel.directories) {
        if (std::find(flagged.begin(), flagged.end(), d) == flagged.end()) flagged.push_back(d);
      }
      for (auto& d : sel.dropped) result.chat_dropped.push_back(d);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnparseableSelection) throw;
      spdlog::warn("{}: file localization sample {} unparseable", plus.base.instance_id, i);
    }
  }

  std::optional<std::vector<std::string>> scope;
  if (!flagged.empty()) {
    scope = flagged;
  } else if (!chat.empty()) {
    std::vector<std::string> parents;
    for (const auto& f : chat) {
      auto p = parent_dir(f);
      if (!p.empty() && std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
    }
    if (!parents.empty()) scope = parents;
  }
  std::vector<std::string> embedded;
  if (!code.empty()) {
    RetrievalOptions opts;
    opts.chunk_size = cfg.chunk_size;
    opts.chunk_overlap = cfg.chunk_overlap;
    opts.stage = "file_embed";
    try {
      auto hits = scoped_retrieve(provider, render_plus_text(plus, false), snapshot, code,
                                  static_cast<std::size_t>(cfg.embed_file_top_k), scope, opts);
      for (const auto& h : hits) embedded.push_back(h.chunk.source_path);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptyScope) throw;
      spdlog::warn("{}: {}", plus.base.instance_id, e.what());
    }
  }
  result.suspicious_files = merge_suspicious(chat, embedded);
  if (result.suspicious_files.empty()) {
    throw Error(ErrorCode::NoCandidateFiles, plus.base.instance_id + ": no suspicious files");
  }
  std::vector<std::string> paths;
  for (const auto& s : result.suspicious_files) paths.push_back(s.path);
  result.key_files = filter_key_files(provider, prompts, plus, paths, snapshot, cfg,
                                      &result.filter_fallback);
  return result;
}

std::vector<std::string> filter_key_files(Provider& provider, const PromptLibrary& prompts,
                                          const IssueReportPlus& plus,
                                          const std::vector<std::string>& suspicious,
                                          const RepoSnapshot& snapshot, const PipelineConfig& cfg,
                                          bool* fallback) {
  if (fallback) *fallback = false;
  const auto limit = static_cast<std::size_t>(cfg.max_key_files);
  if (suspicious.size() <= limit) return suspicious;
  std::string skeletons;
  for (const auto& p : suspicious) {
    auto text = read_normalized(snapshot, p);
    std::string rendering;
    try {
      rendering = skeleton_of_file(p, text).rendering;
    } catch (const Error&) {
      rendering = "";
    }
    skeletons += "### " + p + "\n```\n" + rendering + "```\n\n";
  }
  auto text = prompts.render("file_filter", {{"issue", render_plus_text(plus, false)},
                                             {"skeletons", skeletons},
                                             {"max_files", std::to_string(limit)}});
  auto resp = provider.chat_complete(plus_request(prompts, plus, text, cfg.default_temperature, 1),
                                     "file_filter");
  std::vector<std::string> picked;
  try {
    picked = parse_path_selection(resp.samples.at(0), suspicious).files;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnparseableSelection) throw;
  }
  if (picked.empty()) {
    spdlog::warn("{}: key-file filter unusable, keeping first {} suspicious files",
                 plus.base.instance_id, limit);
    if (fallback) *fallback = true;
    return {suspicious.begin(), suspicious.begin() + static_cast<long>(limit)};
  }
  if (picked.size() > limit) picked.resize(limit);
  return picked;
}

std::vector<HunkProposal> parse_hunk_proposals(std::string_view completion,
                                               const std::vector<std::string>& key_files) {
  std::vector<HunkProposal> out;
  auto is_key = [&](std::string_view p) {
    return std::find(key_files.begin(), key_files.end(), p) != key_files.end();
  };
  for (const auto& block : fenced_blocks(completion)) {
    std::string current;
    for (auto raw_line : split_lines(block.body)) {
      auto line = trim(raw_line);
      if (line.starts_with("- ")) line = trim(line.substr(2));
      if (line.empty()) continue;
      auto colon = line.find(':');
      if (colon != std::string_view::npos) {
        auto kind = to_lower(trim(line.substr(0, colon)));
        if (known_kind(kind)) {
          auto value = std::string(trim(line.substr(colon + 1)));
          if (!value.empty()) out.push_back({current, kind, value, std::string(line)});
          continue;
        }
      }
      auto path = normalize_relative_path(line);
      if (path.ends_with(':')) path.pop_back();
      if (!path.empty() && is_key(path)) {
        current = path;
      } else {
        current.clear();
        out.push_back({"", "unknown", std::string(line), std::string(line)});
      }
    }
  }
  static const std::regex line_of(R"(\bline\s+(\d+)\s+(?:of|in)\s+`?([\w./-]+\.[\w]+)`?)",
                                  std::regex::icase);
  std::string text(completion);
  for (std::sregex_iterator it(text.begin(), text.end(), line_of), end; it != end; ++it) {
    HunkProposal p{normalize_relative_path((*it)[2].str()), "line", (*it)[1].str(), it->str()};
    bool seen = std::any_of(out.begin(), out.end(), [&](const HunkProposal& q) {
      return q.kind == "line" && q.value == p.value && (q.path == p.path || q.path.empty());
    });
    if (!seen) out.push_back(std::move(p));
  }
  return out;
}

std::optional<BugHunk> resolve_proposal(const HunkProposal& proposal, std::string_view path,
                                        std::string_view text, int window_lines) {
  try {
    if (proposal.kind == "line") {
      int line = std::stoi(proposal.value);
      if (auto h = enclosing_element_hunk(path, text, line)) return h;
      return extract_context_window(path, text, line, window_lines);
    }
    if (proposal.kind == "variable") {
      if (auto line = top_level_declaration_line(path, text, proposal.value)) {
        return extract_context_window(path, text, *line, window_lines);
      }
    }
    try {
      return extract_element_hunk(path, text, proposal.value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ElementNotFound) throw;
      if (auto line = top_level_declaration_line(path, text, proposal.value)) {
        return extract_context_window(path, text, *line, window_lines);
      }
      return std::nullopt;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AmbiguousElement || e.code() == ErrorCode::AnchorOutOfRange) {
      spdlog::warn("cannot resolve '{}' in {}: {}", proposal.raw, path, e.what());
      return std::nullopt;
    }
    throw;
  } catch (const std::logic_error&) {
    return std::nullopt;  // non-numeric line
  }
}

HunkLocalizationResult localize_hunks(Provider& provider, const PromptLibrary& prompts,
                                      const IssueReportPlus& plus,
                                      const std::vector<std::string>& key_files,
                                      const RepoSnapshot& snapshot, const PipelineConfig& cfg) {
  if (key_files.empty()) throw Error(ErrorCode::InvalidArgument, "no key files to localize in");
  std::map<std::string, std::string> texts;
  std::string views;
  for (const auto& p : key_files) {
    texts[p] = read_normalized(snapshot, p);
    auto view = compress_file_for_hunk_loc(p, texts[p], cfg.max_hunk_lines);
    views += "### " + p + "\n```\n" + numbered_rendering(view, texts[p]) + "```\n\n";
  }
  auto text = prompts.render("hunk_localize",
                             {{"issue", render_plus_text(plus, true)}, {"files", views}});
  auto resp = provider.chat_complete(
      plus_request(prompts, plus, text, cfg.hunk_loc_temperature, cfg.hunk_loc_samples),
      "hunk_loc");

  HunkLocalizationResult result;
  std::set<std::tuple<std::string, int, int>> seen;
  auto add = [&](BugHunk h, int sample, const std::string& raw) {
    if (seen.emplace(h.path, h.start_line, h.end_line).second) {
      result.hunks.push_back({std::move(h), sample, raw});
    }
  };
  for (std::size_t i = 0; i < resp.samples.size(); ++i) {
    for (const auto& prop : parse_hunk_proposals(resp.samples[i], key_files)) {
      if (prop.kind == "unknown") continue;
      std::vector<std::string> targets;
      if (!prop.path.empty()) {
        if (texts.contains(prop.path)) targets.push_back(prop.path);
      } else {
        targets = key_files;
      }
      std::vector<BugHunk> found;
      for (const auto& t : targets) {
        if (auto h = resolve_proposal(prop, t, texts[t], cfg.context_window_lines)) found.push_back(*h);
      }
      if (found.size() == 1) {
        add(std::move(found.front()), static_cast<int>(i), prop.raw);
      } else {
        result.unresolved.push_back(prop.raw);
      }
    }
  }
  if (result.hunks.empty()) {
    spdlog::warn("{}: no hunk resolved, falling back to whole-file hunks", plus.base.instance_id);
    result.fallback = true;
    for (const auto& p : key_files) {
      int n = static_cast<int>(split_lines(texts[p]).size());
      if (n == 0) continue;
      int last = std::min(n, cfg.context_window_lines);
      BugHunk h{p, context_window_label(p, 1, last), 1, last, slice_lines(texts[p], 1, last)};
      add(std::move(h), -1, whole_file_label(p));
    }
  }
  return result;
}

nlohmann::json to_json(const FileLocalizationResult& files, const HunkLocalizationResult& hunks) {
  nlohmann::json suspicious = nlohmann::json::array();
  for (const auto& s : files.suspicious_files) {
    suspicious.push_back({{"path", s.path}, {"origin", to_string(s.origin)}});
  }
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : hunks.hunks) {
    hs.push_back({{"path", h.hunk.path},
                  {"element", h.hunk.element_name},
                  {"start_line", h.hunk.start_line},
                  {"end_line", h.hunk.end_line},
                  {"sample", h.sample},
                  {"proposal", h.proposal}});
  }
  return {{"suspicious_files", suspicious},
          {"key_files", files.key_files},
          {"chat_dropped", files.chat_dropped},
          {"key_file_fallback", files.filter_fallback},
          {"hunks", hs},
          {"unresolved", hunks.unresolved},
          {"hunk_fallback", hunks.fallback}};
}

}  // namespace guirepair
