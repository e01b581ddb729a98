#include <gtest/gtest.h>

#include <set>

#include "guirepair/error.hpp"
#include "guirepair/knowledge.hpp"
#include "support/test_support.hpp"

namespace guirepair {
namespace {

using testing::FakeCalls;
using testing::TempDir;

IssueReport sample_issue() {
  IssueReport issue;
  issue.instance_id = "demo__demo-1";
  issue.title = "Bar chart skips the first value";
  issue.body_text = "The first bar is missing when drawing a bar chart.";
  issue.images.push_back({"img0", "a.png", "image/png", "PNGBYTES", 1, 1});
  return issue;
}

class KnowledgeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_tree(dir_.path(), {
                                         {"src/bar.js", "export function bar() {}\n"},
                                         {"docs/bar-chart.md", "bar chart draws one bar per value\n"},
                                         {"docs/line-chart.md", "line chart connects points\n"},
                                         {"docs/api/scale.md", "linear scale maps values\n"},
                                         {"docs/api/theme.md", "theme colors\n"},
                                     });
    snapshot_ = snapshot_repository(dir_.path());
  }

  std::unique_ptr<Provider> provider_with_reply(std::string reply) {
    return testing::fake_provider(
        [reply](const ChatRequest&, std::string_view) { return std::vector<std::string>{reply}; }, calls_);
  }

  TempDir dir_;
  RepoSnapshot snapshot_;
  PromptLibrary prompts_{testing::prompts_dir()};
  PipelineConfig cfg_;
  std::shared_ptr<FakeCalls> calls_ = std::make_shared<FakeCalls>();
};

TEST_F(KnowledgeTest, TreePickValidatesPathsAndCarriesImages) {
  auto provider = provider_with_reply(
      "The bar chart page is relevant.\n```\nbar-chart.md\ndocs/missing.md\napi/\n```\n");
  auto pick = pick_docs_via_tree(*provider, prompts_, sample_issue(), snapshot_, doc_tree(snapshot_), cfg_);
  EXPECT_EQ(pick.paths, std::vector<std::string>{"docs/bar-chart.md"});
  EXPECT_EQ(pick.key_directories, std::vector<std::string>{"docs/api"});
  EXPECT_NE(pick.rationale.find("bar chart page"), std::string::npos);
  ASSERT_EQ(calls_->requests.size(), 1u);
  EXPECT_EQ(calls_->requests[0].images().size(), 1u);
  EXPECT_EQ(calls_->chat_stages[0], "knowledge_pick");
}

TEST_F(KnowledgeTest, TreePickTruncatesToTopN) {
  cfg_.doc_top_n_chat = 1;
  auto provider = provider_with_reply("```\ndocs/bar-chart.md\ndocs/line-chart.md\n```\n");
  auto pick = pick_docs_via_tree(*provider, prompts_, sample_issue(), snapshot_, doc_tree(snapshot_), cfg_);
  EXPECT_EQ(pick.paths.size(), 1u);
}

TEST_F(KnowledgeTest, EmbeddingRetrievalStaysInKeyDirectories) {
  auto provider = provider_with_reply("");
  auto paths = retrieve_docs_via_embedding(*provider, sample_issue(), snapshot_, {"docs/api/"}, "", cfg_);
  EXPECT_EQ(paths.size(), 2u);
  for (const auto& p : paths) EXPECT_TRUE(p.starts_with("docs/api/")) << p;
  cfg_.doc_top_n_embed = 3;
  auto all = retrieve_docs_via_embedding(*provider, sample_issue(), snapshot_, {}, "", cfg_);
  EXPECT_EQ(all.size(), 3u);
}

TEST_F(KnowledgeTest, MergeKeepsChatOrderAndTagsOverlap) {
  auto set = merge_documents({"docs/bar-chart.md", "docs/api/scale.md"},
                             {"docs/api/scale.md", "docs/api/theme.md", "docs/bar-chart.md"}, {"docs/api/"},
                             snapshot_);
  ASSERT_EQ(set.docs.size(), 3u);
  EXPECT_EQ(set.docs[0].path, "docs/bar-chart.md");
  EXPECT_EQ(set.docs[0].origin, DocOrigin::Both);
  EXPECT_EQ(set.docs[1].origin, DocOrigin::Both);
  EXPECT_EQ(set.docs[2].path, "docs/api/theme.md");
  EXPECT_EQ(set.docs[2].origin, DocOrigin::Embedding);
  EXPECT_EQ(set.docs[2].text, "theme colors\n");
  EXPECT_EQ(document_set_from_json(to_json(set)), set);
}

TEST_F(KnowledgeTest, MineCombinesBothSelectors) {
  auto provider = provider_with_reply("```\ndocs/bar-chart.md\n```\n");
  auto set = mine_knowledge(*provider, prompts_, sample_issue(), snapshot_, cfg_);
  EXPECT_EQ(set.docs.front().path, "docs/bar-chart.md");
  EXPECT_EQ(set.docs.size(), 4u);
  std::set<std::string> paths;
  for (const auto& d : set.docs) EXPECT_TRUE(paths.insert(d.path).second);
}

TEST(Knowledge, NoDocumentationYieldsEmptySetWithoutCalls) {
  TempDir dir;
  testing::write_tree(dir.path(), {{"src/a.js", "let a = 1;\n"}});
  auto snapshot = snapshot_repository(dir.path());
  auto calls = std::make_shared<FakeCalls>();
  auto provider = testing::fake_provider(
      [](const ChatRequest&, std::string_view) { return std::vector<std::string>{"x"}; }, calls);
  PromptLibrary prompts(testing::prompts_dir());
  auto set = mine_knowledge(*provider, prompts, sample_issue(), snapshot, PipelineConfig{});
  EXPECT_TRUE(set.empty());
  EXPECT_TRUE(calls->chat_stages.empty());
  EXPECT_EQ(calls->embed_batches, 0);
}

TEST(Knowledge, OriginStrings) {
  for (auto o : {DocOrigin::Chat, DocOrigin::Embedding, DocOrigin::Both})
    EXPECT_EQ(doc_origin_from_string(to_string(o)), o);
  EXPECT_THROW(doc_origin_from_string("other"), Error);
}

}  // namespace
}  // namespace guirepair
