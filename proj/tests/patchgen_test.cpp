#include <gtest/gtest.h>

#include "guirepair/error.hpp"
#include "guirepair/patchgen.hpp"
#include "support/test_support.hpp"

namespace guirepair {
namespace {

using testing::FakeCalls;
using testing::TempDir;

std::string block(const std::string& path, const std::string& search, const std::string& replace) {
  return "```js\n" + path + "\n<<<<<<< SEARCH\n" + search + "=======\n" + replace + ">>>>>>> REPLACE\n```\n";
}

TEST(ParseEdits, StrictBlocks) {
  auto edits = parse_edits("Fix:\n" + block("src/a.js", "let x = 1;\n", "let x = 2;\n") +
                           block("src/b.js", "a\nb\n", "a\n"));
  ASSERT_EQ(edits.size(), 2u);
  EXPECT_EQ(edits[0], (SearchReplaceEdit{"src/a.js", "let x = 1;\n", "let x = 2;\n"}));
  EXPECT_EQ(edits[1].replace, "a\n");
}

TEST(ParseEdits, MultipleEditsInOneBlock) {
  auto edits = parse_edits(
      "```\nsrc/a.js\n<<<<<<< SEARCH\none\n=======\nuno\n>>>>>>> REPLACE\n<<<<<<< SEARCH\ntwo\n=======\ndos\n>>>>>>> REPLACE\n```\n");
  ASSERT_EQ(edits.size(), 2u);
  EXPECT_EQ(edits[1].search, "two\n");
}

TEST(ParseEdits, LenientMarkersAndPathOutsideFence) {
  auto edits = parse_edits(
      "### `src/a.js`\n```javascript\n  <<<<<<<  SEARCH\nold\n  =========\nnew\n>>>>>>>> REPLACE  \n```\n");
  ASSERT_EQ(edits.size(), 1u);
  EXPECT_EQ(edits[0].path, "src/a.js");
  EXPECT_EQ(edits[0].search, "old\n");
  EXPECT_EQ(edits[0].replace, "new\n");
}

TEST(ParseEdits, NoBlocksOrOnlyNoOps) {
  for (std::string c : {std::string("no edits here"), block("src/a.js", "same\n", "same\n"),
                        std::string("```\nsrc/a.js\n<<<<<<< SEARCH\nunterminated\n```\n")}) {
    try {
      parse_edits(c);
      FAIL() << c;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoEditBlocks);
    }
  }
}

TEST(ApplyEdits, ExactUniqueMatch) {
  FileMap files = {{"a.js", "let x = 1;\nlet y = 2;\n"}, {"b.js", "untouched\n"}};
  auto out = apply_edits(files, {{"a.js", "let y = 2;\n", "let y = 3;\n"}});
  EXPECT_EQ(out, (FileMap{{"a.js", "let x = 1;\nlet y = 3;\n"}}));
}

TEST(ApplyEdits, SequentialEditsSeeEarlierResults) {
  FileMap files = {{"a.js", "a\nb\n"}};
  auto out = apply_edits(files, {{"a.js", "a\n", "c\n"}, {"a.js", "c\nb\n", "d\n"}});
  EXPECT_EQ(out.at("a.js"), "d\n");
}

TEST(ApplyEdits, WhitespaceTolerantRetry) {
  FileMap files = {{"a.js", "function f() {\n    return 1;\n}\n"}};
  auto out = apply_edits(files, {{"a.js", "function f() {\n  return 1;\n}\n", "function f() {\n  return 2;\n}\n"}});
  EXPECT_EQ(out.at("a.js"), "function f() {\n  return 2;\n}\n");
}

TEST(ApplyEdits, Failures) {
  FileMap files = {{"a.js", "x();\nx();\n"}};
  auto code_of = [&](const std::vector<SearchReplaceEdit>& edits) {
    try {
      apply_edits(files, edits);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code_of({{"a.js", "x();\n", "y();\n"}}), ErrorCode::AmbiguousMatch);
  EXPECT_EQ(code_of({{"a.js", "z();\n", "y();\n"}}), ErrorCode::SearchNotFound);
  EXPECT_EQ(code_of({{"c.js", "x();\n", "y();\n"}}), ErrorCode::UnknownFile);
}

TEST(ApplyEdits, CrlfOriginalsAreNormalized) {
  FileMap files = {{"a.js", "a\r\nb\r\n"}};
  EXPECT_EQ(apply_edits(files, {{"a.js", "b\n", "c\n"}}).at("a.js"), "a\nc\n");
  EXPECT_TRUE(apply_edits(files, {{"a.js", "b\n", "c\n"}, {"a.js", "c\n", "b\n"}}).empty());
}

PatchCandidate candidate(const std::string& digest, int index, int votes = 1) {
  PatchCandidate c;
  c.digest = digest;
  c.provenance = {index, index == 0 ? 0.0 : 1.0};
  c.votes = votes;
  c.sample_indices = {index};
  return c;
}

TEST(Dedup, EarliestKeptAndVotesSummed) {
  auto out = dedup_candidates({candidate("b", 0), candidate("a", 1), candidate("b", 2), candidate("b", 3, 2)});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].digest, "b");
  EXPECT_EQ(out[0].provenance.sample_index, 0);
  EXPECT_EQ(out[0].votes, 4);
  EXPECT_EQ(out[0].sample_indices, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(out[1].votes, 1);
  auto again = dedup_candidates(out);
  ASSERT_EQ(again.size(), 2u);
  EXPECT_EQ(again[0].votes, 4);
}

TEST(DiffDigest, LineEndingInsensitive) {
  EXPECT_EQ(diff_digest("a\r\nb\r\n"), diff_digest("a\nb\n"));
  EXPECT_NE(diff_digest("a\n"), diff_digest("b\n"));
}

class GenerateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_tree(dir_.path(), {{"src/a.js", "export const SIZE = 1;\nexport function go() {\n  return SIZE;\n}\n"}});
    snapshot_ = snapshot_repository(dir_.path());
    IssueReport issue;
    issue.instance_id = "demo__demo-4";
    issue.title = "Size wrong";
    issue.body_text = "SIZE should be 2.";
    plus_ = augment_issue_report(issue, std::nullopt, {});
    hunks_ = {BugHunk{"src/a.js", "go", 2, 4, "export function go() {\n  return SIZE;\n}\n"}};
  }

  TempDir dir_;
  RepoSnapshot snapshot_;
  IssueReportPlus plus_;
  std::vector<BugHunk> hunks_;
  PromptLibrary prompts_{testing::prompts_dir()};
  std::shared_ptr<FakeCalls> calls_ = std::make_shared<FakeCalls>();
};

const std::string kGood = block("src/a.js", "export const SIZE = 1;\n", "export const SIZE = 2;\n");
const std::string kOther = block("src/a.js", "  return SIZE;\n", "  return 2;\n");
const std::string kBad = block("src/a.js", "not there\n", "x\n");

TEST_F(GenerateTest, GreedyPlusSampledWithDedup) {
  auto p = testing::fake_provider(
      [](const ChatRequest& req, std::string_view stage) -> std::vector<std::string> {
        if (stage == "patch_greedy") return {kGood};
        EXPECT_EQ(req.n_samples, 3);
        return {kOther, kBad, kGood};
      },
      calls_);
  GenerationBudget budget{1, 0.0, 3, 1.0, 4};
  auto r = generate_candidates(*p, prompts_, plus_, hunks_, snapshot_, budget);
  EXPECT_EQ(r.completions, 4);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_EQ(r.candidates[0].votes, 2);
  EXPECT_EQ(r.candidates[0].sample_indices, (std::vector<int>{0, 3}));
  EXPECT_EQ(r.candidates[1].provenance.sample_index, 1);
  EXPECT_DOUBLE_EQ(r.candidates[1].provenance.temperature, 1.0);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].sample_index, 2);
  EXPECT_EQ(calls_->chat_stages, (std::vector<std::string>{"patch_greedy", "patch_sample"}));
  EXPECT_NE(r.candidates[0].unified_diff.find("+export const SIZE = 2;"), std::string::npos);
  EXPECT_NE(calls_->requests[0].all_text().find("### src/a.js (lines 2-4, go)"), std::string::npos);
}

TEST_F(GenerateTest, SingleValidStopsAtGreedy) {
  auto p = testing::fake_provider([](const ChatRequest&, std::string_view) { return std::vector<std::string>{kGood}; },
                                  calls_);
  auto r = generate_candidates(*p, prompts_, plus_, hunks_, snapshot_, GenerationBudget{}, true);
  EXPECT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(calls_->chat_stages, std::vector<std::string>{"patch_greedy"});
}

TEST_F(GenerateTest, SingleValidFallsThroughToFirstUsableSample) {
  auto p = testing::fake_provider(
      [](const ChatRequest&, std::string_view stage) -> std::vector<std::string> {
        if (stage == "patch_greedy") return {kBad};
        return {kBad, kOther, kGood};
      },
      calls_);
  auto r = generate_candidates(*p, prompts_, plus_, hunks_, snapshot_, GenerationBudget{1, 0.0, 3, 1.0, 4}, true);
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_EQ(r.candidates[0].provenance.sample_index, 2);
}

TEST_F(GenerateTest, NothingUsableAndBudgetChecks) {
  auto p = testing::fake_provider([](const ChatRequest&, std::string_view) { return std::vector<std::string>{kBad}; },
                                  calls_);
  try {
    generate_candidates(*p, prompts_, plus_, hunks_, snapshot_, GenerationBudget{1, 0.0, 2, 1.0, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoValidCandidates);
  }
  EXPECT_THROW(generate_candidates(*p, prompts_, plus_, hunks_, snapshot_, GenerationBudget{1, 0.0, 40, 1.0, 40}), Error);
  EXPECT_THROW(generate_candidates(*p, prompts_, plus_, {}, snapshot_, GenerationBudget{}), Error);
}

TEST_F(GenerateTest, CandidateJsonRoundTrip) {
  std::string reason;
  auto c = candidate_from_completion(snapshot_, kGood, {0, 0.0}, &reason);
  ASSERT_TRUE(c);
  auto back = patch_candidate_from_json(to_json(*c));
  EXPECT_EQ(back.digest, c->digest);
  EXPECT_EQ(back.edits, c->edits);
  EXPECT_EQ(back.unified_diff, c->unified_diff);
  EXPECT_FALSE(candidate_from_completion(snapshot_, kBad, {1, 1.0}, &reason));
  EXPECT_FALSE(reason.empty());
}

}  // namespace
}  // namespace guirepair
