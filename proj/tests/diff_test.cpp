#include <gtest/gtest.h>

#include "guirepair/diff.hpp"
#include "guirepair/error.hpp"

namespace guirepair {
namespace {

TEST(UnifiedDiff, GitStyleSingleHunk) {
  const std::string before = "a\nb\nc\nd\ne\nf\ng\n";
  const std::string after = "a\nb\nc\nD\ne\nf\ng\n";
  EXPECT_EQ(unified_diff_file("src/x.js", before, after),
            "diff --git a/src/x.js b/src/x.js\n"
            "--- a/src/x.js\n"
            "+++ b/src/x.js\n"
            "@@ -1,7 +1,7 @@\n"
            " a\n b\n c\n-d\n+D\n e\n f\n g\n");
  EXPECT_EQ(unified_diff_file("src/x.js", before, before), "");
}

TEST(UnifiedDiff, SeparateHunksWhenFarApart) {
  std::string before, after;
  for (int i = 1; i <= 20; ++i) {
    before += std::to_string(i) + "\n";
    after += (i == 2 || i == 18 ? "x" : std::to_string(i)) + "\n";
  }
  auto d = unified_diff_file("f", before, after);
  EXPECT_NE(d.find("@@ -1,5 +1,5 @@"), std::string::npos);
  EXPECT_NE(d.find("@@ -15,6 +15,6 @@"), std::string::npos);
}

TEST(UnifiedDiff, MissingFinalNewlineIsMarked) {
  auto d = unified_diff_file("f", "a\nb", "a\nc");
  EXPECT_NE(d.find("-b\n\\ No newline at end of file\n+c\n\\ No newline at end of file\n"), std::string::npos);
  EXPECT_EQ(apply_unified_diff({{"f", "a\nb"}}, d).at("f"), "a\nc");
}

TEST(UnifiedDiff, MultipleFilesInPathOrder) {
  FileMap before = {{"b.js", "1\n"}, {"a.js", "1\n"}, {"c.js", "same\n"}};
  FileMap after = {{"b.js", "2\n"}, {"a.js", "2\n"}, {"c.js", "same\n"}};
  auto d = unified_diff(before, after);
  EXPECT_EQ(diff_paths(d), (std::vector<std::string>{"a.js", "b.js"}));
  EXPECT_EQ(apply_unified_diff(before, d), (FileMap{{"a.js", "2\n"}, {"b.js", "2\n"}}));
}

TEST(ApplyUnifiedDiff, HunkFloatsWhenTextMoved) {
  const std::string before = "a\nb\nc\n";
  auto d = unified_diff_file("f", before, "a\nB\nc\n");
  auto moved = apply_unified_diff({{"f", "new\nlines\na\nb\nc\n"}}, d);
  EXPECT_EQ(moved.at("f"), "new\nlines\na\nB\nc\n");
}

TEST(ApplyUnifiedDiff, MismatchedContextFails) {
  auto d = unified_diff_file("f", "a\nb\nc\n", "a\nB\nc\n");
  try {
    apply_unified_diff({{"f", "x\ny\nz\n"}}, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DiffApplyFailure);
  }
  EXPECT_THROW(apply_unified_diff({}, d), Error);
}

TEST(DiffLines, ShortestScript) {
  std::vector<std::string_view> a = {"a", "b", "c", "a", "b", "b", "a"};
  std::vector<std::string_view> b = {"c", "b", "a", "b", "a", "c"};
  auto script = diff_lines(a, b);
  int changes = 0;
  std::vector<std::string_view> rebuilt;
  for (const auto& e : script) {
    if (e.op != EditOp::Equal) ++changes;
    if (e.op == EditOp::Equal) rebuilt.push_back(a[e.old_index]);
    if (e.op == EditOp::Insert) rebuilt.push_back(b[e.new_index]);
  }
  EXPECT_EQ(changes, 5);
  EXPECT_EQ(rebuilt, b);
}

}  // namespace
}  // namespace guirepair
