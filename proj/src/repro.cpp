#include "guirepair/repro.hpp"

#include <spdlog/spdlog.h>

#include "guirepair/error.hpp"

namespace guirepair {
namespace {

bool looks_like_refusal(std::string_view reply) {
  auto lower = to_lower(reply);
  for (std::string_view p : {"i can't", "i cannot", "i'm sorry", "i am unable", "i'm unable"}) {
    if (lower.find(p) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

std::string host_page_template() {
  return "<!DOCTYPE html>\n"
         "<html>\n"
         "<head>\n"
         "<meta charset=\"utf-8\">\n"
         "<style>html, body { margin: 0; padding: 0; background: #ffffff; }</style>\n"
         "</head>\n"
         "<body>\n"
         "<div id=\"root\"></div>\n"
         "<script src=\"" + std::string(kBundlePlaceholder) + "\"></script>\n"
         "<script src=\"" + std::string(kReproScriptName) + "\"></script>\n"
         "</body>\n"
         "</html>\n";
}

std::optional<std::string> pick_code_block(std::string_view reply) {
  auto blocks = fenced_blocks(reply);
  if (blocks.empty()) return std::nullopt;
  for (const auto& b : blocks) {
    auto info = to_lower(b.info);
    if (info == "js" || info == "javascript" || info == "jsx" || info == "mjs") return b.body;
  }
  return blocks.front().body;
}

ReproArtifact generate_repro(Provider& provider, const PromptLibrary& prompts,
                             const IssueReport& issue, const DocumentSet& knowledge,
                             const PipelineConfig& cfg) {
  ReproArtifact art;
  art.host_page = host_page_template();
  if (issue.repro_code) {
    art.script_code = *issue.repro_code;
    art.from_issue = true;
    return art;
  }
  std::string docs;
  for (const auto& d : knowledge.docs) docs += "### " + d.path + "\n" + d.text + "\n";
  ChatRequest req;
  req.temperature = cfg.default_temperature;
  req.n_samples = 1;
  req.messages.push_back({"system", {TextPart{prompts.raw("system")}}});
  ChatMessage user{"user", {}};
  user.parts.emplace_back(TextPart{prompts.render(
      "repro_generate", {{"issue", issue_text(issue)},
                         {"example", prompts.raw("repro_oneshot")},
                         {"knowledge", docs.empty() ? "(none)" : docs}})});
  for (auto& p : image_parts(issue)) user.parts.push_back(std::move(p));
  req.messages.push_back(user);

  auto reply = provider.chat_complete(req, "repro").samples.at(0);
  auto code = pick_code_block(reply);
  if (!code) {
    spdlog::warn("{}: repro reply has no code block, retrying", issue.instance_id);
    req.messages.push_back({"assistant", {TextPart{reply}}});
    req.messages.push_back({"user", {TextPart{prompts.raw("repro_retry")}}});
    reply = provider.chat_complete(req, "repro_retry").samples.at(0);
    code = pick_code_block(reply);
  }
  if (!code || trim(*code).empty()) {
    if (looks_like_refusal(reply)) {
      throw Error(ErrorCode::GenerationRefused, issue.instance_id + ": model declined to write repro code");
    }
    throw Error(ErrorCode::NoCodeBlock, issue.instance_id + ": no fenced code block after retry");
  }
  art.script_code = *code;
  auto notes = text_outside_fences(reply);
  if (!notes.empty()) art.notes = notes;
  return art;
}

void save_repro(const ReproArtifact& repro, const fs::path& dir) {
  write_file(dir / kReproScriptName, repro.script_code);
  write_file(dir / "index.html", repro.host_page);
  nlohmann::json meta{{"script", kReproScriptName}, {"host_page", "index.html"},
                      {"from_issue", repro.from_issue}};
  meta["notes"] = repro.notes ? nlohmann::json(*repro.notes) : nlohmann::json(nullptr);
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

ReproArtifact load_repro(const fs::path& dir) {
  auto meta = nlohmann::json::parse(read_file(dir / "meta.json"));
  ReproArtifact art;
  art.script_code = read_file(dir / meta.at("script").get<std::string>());
  art.host_page = read_file(dir / meta.at("host_page").get<std::string>());
  art.from_issue = meta.value("from_issue", false);
  if (meta.contains("notes") && meta["notes"].is_string()) art.notes = meta["notes"].get<std::string>();
  return art;
}

IssueReportPlus augment_issue_report(IssueReport issue, std::optional<ReproArtifact> repro,
                                     DocumentSet knowledge) {
  return {std::move(issue), std::move(repro), std::move(knowledge)};
}

std::string render_plus_text(const IssueReportPlus& plus, bool with_knowledge) {
  std::string out = "## Issue\n" + issue_text(plus.base);
  if (!out.ends_with('\n')) out += '\n';
  if (plus.repro && plus.base.body_text.find(plus.repro->script_code) == std::string::npos) {
    out += "\n## Reproduction code\n```js\n" + plus.repro->script_code;
    if (!out.ends_with('\n')) out += '\n';
    out += "```\n";
  }
  if (with_knowledge && !plus.knowledge.empty()) {
    out += "\n## Project documentation\n";
    for (const auto& d : plus.knowledge.docs) {
      out += "### " + d.path + "\n" + d.text;
      if (!out.ends_with('\n')) out += '\n';
    }
  }
  return out;
}

std::vector<MessagePart> render_plus(const IssueReportPlus& plus, bool with_knowledge) {
  std::vector<MessagePart> parts;
  parts.emplace_back(TextPart{render_plus_text(plus, with_knowledge)});
  for (auto& p : image_parts(plus.base)) parts.push_back(std::move(p));
  return parts;
}

}  // namespace guirepair
