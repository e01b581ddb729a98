#include "guirepair/knowledge.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

#include "guirepair/error.hpp"
#include "guirepair/retrieval.hpp"
#include "guirepair/selection.hpp"

namespace guirepair {

std::string_view to_string(DocOrigin origin) {
  switch (origin) {
    case DocOrigin::Chat: return "chat";
    case DocOrigin::Embedding: return "embedding";
    case DocOrigin::Both: return "both";
  }
  return "chat";
}

DocOrigin doc_origin_from_string(std::string_view s) {
  if (s == "chat") return DocOrigin::Chat;
  if (s == "embedding") return DocOrigin::Embedding;
  if (s == "both") return DocOrigin::Both;
  throw Error(ErrorCode::InvalidArgument, "unknown document origin '" + std::string(s) + "'");
}

nlohmann::json to_json(const DocumentSet& set) {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : set.docs) {
    docs.push_back({{"path", d.path}, {"origin", to_string(d.origin)}, {"text", d.text}});
  }
  return {{"docs", docs}, {"key_directories", set.key_directories}};
}

DocumentSet document_set_from_json(const nlohmann::json& j) {
  DocumentSet set;
  for (const auto& d : j.at("docs")) {
    set.docs.push_back({d.at("path").get<std::string>(), d.at("text").get<std::string>(),
                        doc_origin_from_string(d.at("origin").get<std::string>())});
  }
  set.key_directories = j.value("key_directories", std::vector<std::string>{});
  return set;
}

std::string issue_text(const IssueReport& issue) {
  return "Title: " + issue.title + "\n\n" + issue.body_text;
}

std::vector<MessagePart> image_parts(const IssueReport& issue) {
  std::vector<MessagePart> parts;
  for (const auto& img : issue.images) parts.emplace_back(ImagePart{img.media_type, img.payload});
  return parts;
}

DocPick pick_docs_via_tree(Provider& provider, const PromptLibrary& prompts,
                           const IssueReport& issue, const RepoSnapshot& snapshot,
                           const std::string& tree, const PipelineConfig& cfg) {
  if (tree.empty()) throw Error(ErrorCode::InvalidArgument, "documentation tree is empty");
  ChatRequest req;
  req.temperature = cfg.default_temperature;
  req.n_samples = 1;
  ChatMessage user{"user", {}};
  user.parts.emplace_back(TextPart{prompts.render(
      "knowledge_pick", {{"issue", issue_text(issue)},
                         {"tree", tree},
                         {"top_n", std::to_string(cfg.doc_top_n_chat)}})});
  for (auto& p : image_parts(issue)) user.parts.push_back(std::move(p));
  req.messages.push_back({"system", {TextPart{prompts.raw("system")}}});
  req.messages.push_back(std::move(user));
  auto resp = provider.chat_complete(std::move(req), "knowledge_pick");
  const std::string& reply = resp.samples.at(0);

  auto docs = snapshot.doc_files();
  auto sel = parse_path_selection(reply, docs, snapshot.doc_root);
  DocPick pick;
  pick.paths = std::move(sel.files);
  if (pick.paths.size() > static_cast<std::size_t>(cfg.doc_top_n_chat)) {
    pick.paths.resize(static_cast<std::size_t>(cfg.doc_top_n_chat));
  }
  pick.key_directories = std::move(sel.directories);
  pick.rationale = std::move(sel.rationale);
  return pick;
}

std::vector<std::string> retrieve_docs_via_embedding(Provider& provider, const IssueReport& issue,
                                                     const RepoSnapshot& snapshot,
                                                     const std::vector<std::string>& key_directories,
                                                     const std::string& rationale,
                                                     const PipelineConfig& cfg) {
  auto docs = snapshot.doc_files();
  if (docs.empty()) throw Error(ErrorCode::EmptyScope, "no documentation files to search");
  std::string query = issue_text(issue);
  if (!rationale.empty()) query += "\n\n" + rationale;
  std::optional<std::vector<std::string>> scope;
  if (!key_directories.empty()) scope = key_directories;
  else if (snapshot.doc_root) scope = std::vector<std::string>{*snapshot.doc_root};
  RetrievalOptions opts;
  opts.chunk_size = cfg.chunk_size;
  opts.chunk_overlap = cfg.chunk_overlap;
  opts.stage = "knowledge_embed";
  auto hits = scoped_retrieve(provider, query, snapshot, docs,
                              static_cast<std::size_t>(cfg.doc_top_n_embed), scope, opts);
  std::vector<std::string> paths;
  for (const auto& h : hits) paths.push_back(h.chunk.source_path);
  return paths;
}

DocumentSet merge_documents(const std::vector<std::string>& chat,
                            const std::vector<std::string>& embedding,
                            const std::vector<std::string>& key_directories,
                            const RepoSnapshot& snapshot) {
  DocumentSet set;
  set.key_directories = key_directories;
  auto find = [&](const std::string& p) {
    return std::find_if(set.docs.begin(), set.docs.end(), [&](const Document& d) { return d.path == p; });
  };
  for (const auto& p : chat) {
    if (find(p) == set.docs.end()) set.docs.push_back({p, snapshot.read(p), DocOrigin::Chat});
  }
  for (const auto& p : embedding) {
    auto it = find(p);
    if (it == set.docs.end()) set.docs.push_back({p, snapshot.read(p), DocOrigin::Embedding});
    else if (it->origin == DocOrigin::Chat) it->origin = DocOrigin::Both;
  }
  return set;
}

DocumentSet mine_knowledge(Provider& provider, const PromptLibrary& prompts,
                           const IssueReport& issue, const RepoSnapshot& snapshot,
                           const PipelineConfig& cfg) {
  std::string tree;
  try {
    tree = doc_tree(snapshot);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoDocumentation) throw;
    spdlog::info("{}: no documentation, skipping knowledge mining", issue.instance_id);
    return {};
  }
  auto pick = pick_docs_via_tree(provider, prompts, issue, snapshot, tree, cfg);
  std::vector<std::string> embedded;
  try {
    embedded = retrieve_docs_via_embedding(provider, issue, snapshot, pick.key_directories,
                                           pick.rationale, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyScope) throw;
    spdlog::warn("{}: {}", issue.instance_id, e.what());
  }
  return merge_documents(pick.paths, embedded, pick.key_directories, snapshot);
}

}  // namespace guirepair
