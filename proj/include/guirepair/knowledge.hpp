#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/config.hpp"
#include "guirepair/prompts.hpp"
#include "guirepair/provider.hpp"
#include "guirepair/workspace.hpp"

namespace guirepair {

enum class DocOrigin { Chat, Embedding, Both };
std::string_view to_string(DocOrigin origin);
DocOrigin doc_origin_from_string(std::string_view s);

struct Document {
  std::string path;
  std::string text;
  DocOrigin origin = DocOrigin::Chat;

  friend bool operator==(const Document&, const Document&) = default;
};

struct DocumentSet {
  std::vector<Document> docs;
  std::vector<std::string> key_directories;

  bool empty() const { return docs.empty(); }
  friend bool operator==(const DocumentSet&, const DocumentSet&) = default;
};

nlohmann::json to_json(const DocumentSet& set);
DocumentSet document_set_from_json(const nlohmann::json& j);

struct DocPick {
  std::vector<std::string> paths;
  std::vector<std::string> key_directories;
  std::string rationale;
};

/// Title and body as one block of prompt text.
std::string issue_text(const IssueReport& issue);
/// Issue images as message parts, in record order.
std::vector<MessagePart> image_parts(const IssueReport& issue);

DocPick pick_docs_via_tree(Provider& provider, const PromptLibrary& prompts,
                           const IssueReport& issue, const RepoSnapshot& snapshot,
                           const std::string& tree, const PipelineConfig& cfg);

std::vector<std::string> retrieve_docs_via_embedding(Provider& provider, const IssueReport& issue,
                                                     const RepoSnapshot& snapshot,
                                                     const std::vector<std::string>& key_directories,
                                                     const std::string& rationale,
                                                     const PipelineConfig& cfg);

/// Chat picks first, then embedding-only picks; overlapping paths are tagged Both.
DocumentSet merge_documents(const std::vector<std::string>& chat,
                            const std::vector<std::string>& embedding,
                            const std::vector<std::string>& key_directories,
                            const RepoSnapshot& snapshot);

/// Both selectors and the merge. A repository without documentation yields an empty set.
DocumentSet mine_knowledge(Provider& provider, const PromptLibrary& prompts,
                           const IssueReport& issue, const RepoSnapshot& snapshot,
                           const PipelineConfig& cfg);

}  // namespace guirepair
