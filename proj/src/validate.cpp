#include "guirepair/validate.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "guirepair/error.hpp"
#include "guirepair/process.hpp"

namespace guirepair {

PixelDiffReport pixel_diff(const Image& a, const Image& b, std::int64_t threshold, int tolerance) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("{}x{} vs {}x{}", a.width, a.height, b.width, b.height));
  }
  PixelDiffReport r;
  r.total_pixels = static_cast<std::int64_t>(a.width) * a.height;
  const std::size_t n = static_cast<std::size_t>(r.total_pixels);
  const std::uint8_t* pa = a.rgba.data();
  const std::uint8_t* pb = b.rgba.data();
  for (std::size_t i = 0; i < n; ++i, pa += 4, pb += 4) {
    for (int c = 0; c < 4; ++c) {
      if (std::abs(static_cast<int>(pa[c]) - static_cast<int>(pb[c])) > tolerance) {
        ++r.differing_pixels;
        break;
      }
    }
  }
  r.changed = r.differing_pixels > threshold;
  return r;
}

PixelDiffReport pixel_diff(const ScreenshotRef& a, const ScreenshotRef& b, std::int64_t threshold,
                           int tolerance) {
  return pixel_diff(load_png(a.png_path), load_png(b.png_path), threshold, tolerance);
}

std::vector<std::size_t> filter_unchanged(const ScreenshotRef& bug,
                                          const std::vector<ScreenshotRef>& shots,
                                          std::int64_t threshold, int tolerance) {
  auto bug_image = load_png(bug.png_path);
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < shots.size(); ++i) {
    if (pixel_diff(bug_image, load_png(shots[i].png_path), threshold, tolerance).changed) {
      survivors.push_back(i);
    }
  }
  return survivors;
}

fs::path build_variant(const RepoSnapshot& snapshot, const PatchCandidate* candidate,
                       const ProjectConfig& project, const fs::path& work_dir) {
  std::error_code ec;
  fs::remove_all(work_dir, ec);
  fs::create_directories(work_dir);
  auto copy = [&](const std::string& rel) {
    auto dest = work_dir / rel;
    fs::create_directories(dest.parent_path());
    fs::copy_file(snapshot.root / rel, dest, fs::copy_options::overwrite_existing);
  };
  for (const auto& rel : snapshot.file_index) copy(rel);
  for (const auto& rel : snapshot.binary_files) copy(rel);
  if (candidate) {
    auto patched = apply_edits(snapshot, candidate->edits);
    for (const auto& [rel, text] : patched) {
      bool crlf = has_crlf(snapshot.read(rel));
      write_file(work_dir / rel, crlf ? restore_crlf(text) : text);
    }
  }
  if (!project.build_cmd.empty()) {
    auto r = run_shell(project.build_cmd, work_dir, std::chrono::milliseconds(project.build_timeout_ms));
    if (r.timed_out || r.exit_code != 0) {
      std::string log = r.err.empty() ? r.out : r.err;
      if (log.size() > 2000) log = log.substr(log.size() - 2000);
      throw Error(ErrorCode::BuildFailure,
                  r.timed_out ? "build timed out" : fmt::format("build exited with {}: {}", r.exit_code, trim(log)));
    }
  }
  return work_dir;
}

nlohmann::json to_json(const RenderRequest& req) {
  return {{"page", req.page.string()},
          {"viewport", {{"w", req.viewport.width}, {"h", req.viewport.height}}},
          {"settle_ms", req.settle_ms},
          {"out", req.out.string()}};
}

RenderResponse render_response_from_json(const nlohmann::json& j) {
  RenderResponse r;
  r.status = j.at("status").get<std::string>();
  r.png = j.value("png", std::string());
  r.console_errors = j.value("console_errors", std::vector<std::string>{});
  if (j.contains("message") && j["message"].is_string()) r.message = j["message"].get<std::string>();
  return r;
}

RenderHarness::RenderHarness(std::vector<std::string> argv, std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), timeout_(timeout) {
  if (argv_.empty()) throw Error(ErrorCode::ConfigError, "render harness command is empty");
}

RenderResponse RenderHarness::render(const RenderRequest& req) const {
  ProcessResult r;
  try {
    r = run_process(argv_, fs::current_path(), to_json(req).dump() + "\n", timeout_);
  } catch (const Error& e) {
    throw Error(ErrorCode::HarnessCrash, e.detail());
  }
  if (r.timed_out) throw Error(ErrorCode::PageLoadTimeout, req.page.string());
  if (r.exit_code != 0) {
    throw Error(ErrorCode::HarnessCrash, fmt::format("harness exited with {}: {}", r.exit_code, trim(r.err)));
  }
  auto nl = r.out.find('\n');
  try {
    return render_response_from_json(nlohmann::json::parse(r.out.substr(0, nl)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::HarnessCrash, std::string("unreadable harness reply: ") + e.what());
  }
}

ScreenshotRef render_scenario(const fs::path& build_dir, const ReproArtifact& repro,
                              const ProjectConfig& project, const Viewport& viewport,
                              const std::string& label, const fs::path& out_png,
                              const RenderHarness& harness) {
  auto bundle = build_dir / project.bundle_path;
  if (project.bundle_path.empty() || !fs::is_regular_file(bundle)) {
    throw Error(ErrorCode::BundleMissing, bundle.string());
  }
  auto page = fs::absolute(build_dir / project.entry_html);
  auto page_dir = page.parent_path();
  write_file(page_dir / kReproScriptName, repro.script_code);
  auto rel_bundle = fs::relative(fs::absolute(bundle), page_dir).generic_string();
  write_file(page, replace_all(repro.host_page, kBundlePlaceholder, rel_bundle));
  fs::create_directories(fs::absolute(out_png).parent_path());
  std::error_code ec;
  fs::remove(out_png, ec);

  RenderRequest req{page, viewport, project.settle_ms, fs::absolute(out_png)};
  auto resp = harness.render(req);
  if (resp.status != "ok") {
    auto msg = resp.message.value_or("render failed");
    if (to_lower(msg).find("timeout") != std::string::npos) throw Error(ErrorCode::PageLoadTimeout, msg);
    throw Error(ErrorCode::RenderFailed, msg);
  }
  fs::path png = resp.png.empty() ? req.out : fs::path(resp.png);
  Image img;
  try {
    img = load_png(png);
  } catch (const Error& e) {
    throw Error(ErrorCode::RenderFailed, std::string("screenshot unreadable: ") + e.what());
  }
  if (img.width != viewport.width || img.height != viewport.height) {
    throw Error(ErrorCode::RenderFailed, fmt::format("screenshot is {}x{}, expected {}x{}", img.width,
                                                     img.height, viewport.width, viewport.height));
  }
  for (const auto& e : resp.console_errors) spdlog::debug("{}: console error: {}", label, e);
  return {label, png, img.width, img.height, resp.console_errors};
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::Effective: return "effective";
    case Decision::Ineffective: return "ineffective";
    case Decision::SkippedUnchanged: return "skipped-unchanged";
    case Decision::NotEvaluated: return "not-evaluated";
  }
  return "not-evaluated";
}

std::optional<bool> parse_judgement(std::string_view reply) {
  auto token = [](std::string_view s) -> std::optional<bool> {
    std::string t;
    for (char c : s) {
      if (std::isalpha(static_cast<unsigned char>(c))) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (t == "effective") return true;
    if (t == "ineffective") return false;
    return std::nullopt;
  };
  auto lines = split_lines(reply);
  for (auto line : lines) {
    auto lower = to_lower(trim(line));
    auto pos = lower.find("verdict:");
    if (pos != std::string::npos) return token(std::string_view(lower).substr(pos + 8));
  }
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (!trim(*it).empty()) return token(*it);
  }
  return std::nullopt;
}

bool judge_patch(Provider& provider, const PromptLibrary& prompts, const IssueReportPlus& plus,
                 const ScreenshotRef& bug_shot, const ScreenshotRef& patch_shot) {
  ChatRequest req;
  req.temperature = 0.0;
  req.n_samples = 1;
  req.messages.push_back({"system", {TextPart{prompts.raw("system")}}});
  ChatMessage user{"user", {TextPart{prompts.render("judge", {{"issue", render_plus_text(plus, false)}})}}};
  for (auto& p : image_parts(plus.base)) user.parts.push_back(std::move(p));
  user.parts.emplace_back(TextPart{"Screenshot of the scenario before the patch:"});
  user.parts.emplace_back(ImagePart{"image/png", read_file(bug_shot.png_path)});
  user.parts.emplace_back(TextPart{"Screenshot of the scenario after the patch:"});
  user.parts.emplace_back(ImagePart{"image/png", read_file(patch_shot.png_path)});
  req.messages.push_back(std::move(user));
  auto reply = provider.chat_complete(req, "judge").samples.at(0);
  if (auto v = parse_judgement(reply)) return *v;
  req.messages.push_back({"assistant", {TextPart{reply}}});
  req.messages.push_back({"user", {TextPart{prompts.raw("judge_retry")}}});
  reply = provider.chat_complete(req, "judge_retry").samples.at(0);
  if (auto v = parse_judgement(reply)) return *v;
  spdlog::warn("{}: judge gave no verdict for {}, counting it ineffective", plus.base.instance_id,
               patch_shot.label);
  return false;
}

std::size_t majority_vote(const std::vector<PatchCandidate>& candidates, const std::vector<bool>& eligible) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!eligible.empty() && !eligible[i]) continue;
    if (!best || candidates[i].votes > candidates[*best].votes) best = i;
  }
  return best.value_or(0);
}

ValidationVerdict select_patch(const std::vector<PatchCandidate>& candidates, const ValidationHooks& hooks) {
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, "nothing to validate");
  ValidationVerdict v;
  for (const auto& c : candidates) v.trail.push_back({c.digest, std::nullopt, Decision::NotEvaluated, "", std::nullopt});

  std::optional<ScreenshotRef> bug;
  if (hooks.render_bug) {
    try {
      bug = hooks.render_bug();
    } catch (const Error& e) {
      spdlog::warn("bug scenario could not be rendered: {}", e.what());
    }
  }
  if (!bug) {
    v.validation_skipped = true;
    v.fallback_used = true;
    v.selected = majority_vote(candidates);
    return v;
  }
  v.bug_shot = bug->png_path;
  auto bug_image = load_png(bug->png_path);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& entry = v.trail[i];
    ScreenshotRef shot;
    try {
      shot = hooks.render_candidate(candidates[i]);
    } catch (const Error& e) {
      entry.decision = Decision::Ineffective;
      entry.reason = e.code() == ErrorCode::BuildFailure ? std::string("build-failed: ") + e.detail()
                                                         : std::string("render-failed: ") + e.what();
      continue;
    }
    entry.shot = shot.png_path;
    entry.diff = pixel_diff(bug_image, load_png(shot.png_path), hooks.threshold, hooks.tolerance);
    if (!entry.diff->changed) {
      entry.decision = Decision::SkippedUnchanged;
      continue;
    }
    ++v.judge_calls;
    if (hooks.judge(*bug, shot)) {
      entry.decision = Decision::Effective;
      v.selected = i;
      return v;
    }
    entry.decision = Decision::Ineffective;
  }
  std::vector<bool> rendered(candidates.size());
  bool any = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    rendered[i] = v.trail[i].shot.has_value();
    any = any || rendered[i];
  }
  v.fallback_used = true;
  v.selected = majority_vote(candidates, any ? rendered : std::vector<bool>{});
  return v;
}

nlohmann::json to_json(const ValidationVerdict& v, const std::vector<PatchCandidate>& candidates) {
  nlohmann::json trail = nlohmann::json::array();
  for (const auto& t : v.trail) {
    nlohmann::json e{{"digest", t.digest}, {"decision", to_string(t.decision)}};
    if (!t.reason.empty()) e["reason"] = t.reason;
    if (t.diff) {
      e["differing_pixels"] = t.diff->differing_pixels;
      e["total_pixels"] = t.diff->total_pixels;
      e["changed"] = t.diff->changed;
    }
    if (t.shot) e["shot"] = t.shot->filename().string();
    trail.push_back(std::move(e));
  }
  nlohmann::json j{{"trail", trail},
                   {"fallback_used", v.fallback_used},
                   {"validation_skipped", v.validation_skipped},
                   {"judge_calls", v.judge_calls}};
  j["selected"] = v.selected ? nlohmann::json(candidates.at(*v.selected).digest) : nlohmann::json(nullptr);
  return j;
}

}  // namespace guirepair
