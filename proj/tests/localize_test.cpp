#include <gtest/gtest.h>

#include "guirepair/error.hpp"
#include "guirepair/localize.hpp"
#include "support/test_support.hpp"

namespace guirepair {
namespace {

using testing::FakeCalls;
using testing::FakeBackend;
using testing::TempDir;

constexpr std::string_view kBar =
    "export class BarChart {\n"
    "  constructor(el) {\n"
    "    this.el = el;\n"
    "  }\n"
    "  drawBars(values) {\n"
    "    for (let i = 1; i < values.length; i++) {\n"
    "      this.el.append(values[i]);\n"
    "    }\n"
    "  }\n"
    "}\n"
    "export const BAR_GAP = 4;\n";

class LocalizeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_tree(dir_.path(), {
                                         {"src/charts/bar.js", std::string(kBar)},
                                         {"src/charts/line.js", "export function drawLine(points) {\n  return points;\n}\n"},
                                         {"src/core/dom.js", "export function el(tag) {\n  return tag;\n}\n"},
                                         {"src/core/scale.js", "export function scale(v) {\n  return v;\n}\n"},
                                         {"src/index.js", "export * from './charts/bar.js';\n"},
                                         {"docs/bar.md", "Bar charts\n"},
                                     });
    snapshot_ = snapshot_repository(dir_.path());
    IssueReport issue;
    issue.instance_id = "demo__demo-3";
    issue.title = "First bar missing";
    issue.body_text = "The first bar of a bar chart is never drawn.";
    plus_ = augment_issue_report(issue, std::nullopt, {});
  }

  std::unique_ptr<Provider> provider(FakeBackend::ChatFn fn) { return testing::fake_provider(std::move(fn), calls_); }

  TempDir dir_;
  RepoSnapshot snapshot_;
  IssueReportPlus plus_;
  PromptLibrary prompts_{testing::prompts_dir()};
  PipelineConfig cfg_;
  std::shared_ptr<FakeCalls> calls_ = std::make_shared<FakeCalls>();
};



TEST(MergeSuspicious, ChatOrderThenEmbeddingWithOverlapTagged) {
  auto merged = merge_suspicious({"a.js", "b.js", "a.js"}, {"c.js", "b.js"});
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged[0].path, "a.js");
  EXPECT_EQ(merged[0].origin, DocOrigin::Chat);
  EXPECT_EQ(merged[1].origin, DocOrigin::Both);
  EXPECT_EQ(merged[2].path, "c.js");
  EXPECT_EQ(merged[2].origin, DocOrigin::Embedding);
}

TEST(HunkProposals, StructuredLinesAndFreeText) {
  auto props = parse_hunk_proposals(
      "```\nsrc/charts/bar.js\nmethod: BarChart.drawBars\nvariable: BAR_GAP\nline: 6\nsomething odd\n```\n"
      "Also see line 3 of src/core/dom.js.",
      {"src/charts/bar.js", "src/core/dom.js"});
  ASSERT_EQ(props.size(), 5u);
  EXPECT_EQ(props[0].path, "src/charts/bar.js");
  EXPECT_EQ(props[0].kind, "method");
  EXPECT_EQ(props[0].value, "BarChart.drawBars");
  EXPECT_EQ(props[1].kind, "variable");
  EXPECT_EQ(props[2].kind, "line");
  EXPECT_EQ(props[3].kind, "unknown");
  EXPECT_EQ(props[4].path, "src/core/dom.js");
  EXPECT_EQ(props[4].value, "3");
}

TEST(ResolveProposal, KindsMapToHunks) {
  const int w = 4;
  auto m = resolve_proposal({"", "method", "drawBars", ""}, "src/charts/bar.js", kBar, w);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->element_name, "BarChart.drawBars");
  EXPECT_EQ(m->start_line, 5);
  EXPECT_EQ(m->end_line, 9);
  auto line = resolve_proposal({"", "line", "7", ""}, "src/charts/bar.js", kBar, w);
  ASSERT_TRUE(line);
  EXPECT_EQ(line->element_name, "BarChart.drawBars");
  auto var = resolve_proposal({"", "variable", "BAR_GAP", ""}, "src/charts/bar.js", kBar, w);
  ASSERT_TRUE(var);
  EXPECT_EQ(var->end_line, 11);
  EXPECT_EQ(var->element_name, context_window_label("src/charts/bar.js", var->start_line, 11));
  EXPECT_FALSE(resolve_proposal({"", "function", "nope", ""}, "src/charts/bar.js", kBar, w));
  EXPECT_FALSE(resolve_proposal({"", "line", "99", ""}, "src/charts/bar.js", kBar, w));
  EXPECT_FALSE(resolve_proposal({"", "line", "abc", ""}, "src/charts/bar.js", kBar, w));
}

TEST_F(LocalizeTest, FilesWithinLimitSkipTheFilter) {
  auto p = provider([](const ChatRequest&, std::string_view stage) -> std::vector<std::string> {
    if (stage == "file_loc") return {"```\nsrc/charts/bar.js\nsrc/nope.js\n```", "```\nsrc/charts/bar.js\n```"};
    ADD_FAILURE() << "unexpected stage " << stage;
    return {""};
  });
  auto result = localize_files(*p, prompts_, plus_, snapshot_, cfg_);
  EXPECT_EQ(result.suspicious_files.front().path, "src/charts/bar.js");
  EXPECT_EQ(result.suspicious_files.front().origin, DocOrigin::Both);
  EXPECT_LE(result.suspicious_files.size(), 2u);
  EXPECT_EQ(result.chat_dropped, std::vector<std::string>{"src/nope.js"});
  EXPECT_FALSE(result.filter_fallback);
  EXPECT_EQ(calls_->chat_stages, std::vector<std::string>{"file_loc"});
  EXPECT_EQ(calls_->requests[0].n_samples, 2);
  EXPECT_DOUBLE_EQ(calls_->requests[0].temperature, 1.0);
}

TEST_F(LocalizeTest, FilterNarrowsToKeyFiles) {
  cfg_.max_key_files = 2;
  auto p = provider([](const ChatRequest&, std::string_view stage) -> std::vector<std::string> {
    if (stage == "file_loc")
      return {"```\nsrc/charts/bar.js\nsrc/charts/line.js\nsrc/core/dom.js\n```", "```\nsrc/index.js\n```"};
    return {"```\nsrc/charts/bar.js\n```"};
  });
  auto result = localize_files(*p, prompts_, plus_, snapshot_, cfg_);
  EXPECT_GE(result.suspicious_files.size(), 4u);
  EXPECT_EQ(result.key_files, std::vector<std::string>{"src/charts/bar.js"});
  EXPECT_EQ(calls_->chat_stages.back(), "file_filter");
  EXPECT_NE(calls_->requests.back().all_text().find("drawBars(values) {"), std::string::npos);
}

TEST_F(LocalizeTest, UnusableFilterFallsBackToMergeOrder) {
  std::vector<std::string> suspicious = {"src/charts/bar.js", "src/charts/line.js", "src/core/dom.js"};
  cfg_.max_key_files = 2;
  auto p = provider([](const ChatRequest&, std::string_view) { return std::vector<std::string>{"no idea"}; });
  bool fallback = false;
  auto keys = filter_key_files(*p, prompts_, plus_, suspicious, snapshot_, cfg_, &fallback);
  EXPECT_TRUE(fallback);
  EXPECT_EQ(keys, (std::vector<std::string>{"src/charts/bar.js", "src/charts/line.js"}));
}

TEST_F(LocalizeTest, NoSuspiciousFilesIsAnError) {
  TempDir empty;
  testing::write_tree(empty.path(), {{"README.md", "nothing\n"}});
  auto snap = snapshot_repository(empty.path());
  auto p = provider([](const ChatRequest&, std::string_view) { return std::vector<std::string>{"```\n```", "none"}; });
  try {
    localize_files(*p, prompts_, plus_, snap, cfg_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCandidateFiles);
  }
}

TEST_F(LocalizeTest, HunksDeduplicateAcrossSamples) {
  auto p = provider([](const ChatRequest&, std::string_view) -> std::vector<std::string> {
    return {"```\nsrc/charts/bar.js\nmethod: drawBars\n```", "```\nsrc/charts/bar.js\nline: 6\nfunction: missing\n```"};
  });
  auto result = localize_hunks(*p, prompts_, plus_, {"src/charts/bar.js"}, snapshot_, cfg_);
  ASSERT_EQ(result.hunks.size(), 1u);
  EXPECT_EQ(result.hunks[0].hunk.element_name, "BarChart.drawBars");
  EXPECT_EQ(result.hunks[0].sample, 0);
  EXPECT_EQ(result.unresolved, std::vector<std::string>{"function: missing"});
  EXPECT_FALSE(result.fallback);
  EXPECT_NE(calls_->requests[0].all_text().find(" 6 |     for (let i = 1;"), std::string::npos);
}

TEST_F(LocalizeTest, UnresolvedHunksFallBackToWholeFiles) {
  auto p = provider([](const ChatRequest&, std::string_view) { return std::vector<std::string>{"nothing useful", "still nothing"}; });
  auto result = localize_hunks(*p, prompts_, plus_, {"src/charts/bar.js", "src/core/dom.js"}, snapshot_, cfg_);
  EXPECT_TRUE(result.fallback);
  ASSERT_EQ(result.hunks.size(), 2u);
  EXPECT_EQ(result.hunks[0].hunk.start_line, 1);
  EXPECT_EQ(result.hunks[0].hunk.end_line, 11);
  EXPECT_EQ(result.hunks[0].hunk.text, kBar);
  EXPECT_THROW(localize_hunks(*p, prompts_, plus_, {}, snapshot_, cfg_), Error);
}

TEST_F(LocalizeTest, AmbiguousUnscopedProposalIsUnresolved) {
  auto p = provider([](const ChatRequest&, std::string_view) -> std::vector<std::string> {
    return {"```\nfunction: scale\nfunction: el\n```", "```\nline: 2\n```"};
  });
  auto result = localize_hunks(*p, prompts_, plus_, {"src/core/dom.js", "src/core/scale.js"}, snapshot_, cfg_);
  ASSERT_EQ(result.hunks.size(), 2u);
  EXPECT_EQ(result.unresolved, std::vector<std::string>{"line: 2"});
}

}  // namespace
}  // namespace guirepair
