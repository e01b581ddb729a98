#include <gtest/gtest.h>

#include <algorithm>

#include "guirepair/codeview.hpp"
#include "guirepair/error.hpp"
#include "support/test_support.hpp"

namespace guirepair {
namespace {

constexpr std::string_view kChart =
    "import { scale } from './scale.js';\n"      // 1
    "\n"                                         // 2
    "// Draws bars.\n"                           // 3
    "export class BarChart {\n"                  // 4
    "  constructor(el) {\n"                      // 5
    "    this.el = el;\n"                        // 6
    "  }\n"                                      // 7
    "\n"                                         // 8
    "  draw(values) {\n"                         // 9
    "    const max = Math.max(...values);\n"     // 10
    "    for (let i = 0; i < values.length; i++) {\n"  // 11
    "      this.bar(values[i] / max);\n"         // 12
    "    }\n"                                    // 13
    "  }\n"                                      // 14
    "}\n"                                        // 15
    "\n"                                         // 16
    "function helper(x) { return x * 2; }\n"     // 17
    "\n"                                         // 18
    "const LIMIT = 10;\n";                       // 19

bool has_line(const std::string& rendering, std::string_view line) {
  for (auto l : split_lines(rendering))
    if (l == line) return true;
  return false;
}

TEST(Skeleton, KeepsImportsHeadersAndCommentsOnly) {
  auto view = skeleton_of_file("src/bar.js", kChart);
  EXPECT_FALSE(view.heuristic);
  EXPECT_TRUE(has_line(view.rendering, "import { scale } from './scale.js';"));
  EXPECT_TRUE(has_line(view.rendering, "// Draws bars."));
  EXPECT_TRUE(has_line(view.rendering, "export class BarChart {"));
  EXPECT_TRUE(has_line(view.rendering, "  constructor(el) {"));
  EXPECT_TRUE(has_line(view.rendering, "  draw(values) {"));
  EXPECT_NE(view.rendering.find(kElisionMarker), std::string::npos);
  EXPECT_NE(view.rendering.find("function helper(x) {"), std::string::npos);
  EXPECT_EQ(view.rendering.find("Math.max"), std::string::npos);
  EXPECT_EQ(view.rendering.find("this.el = el"), std::string::npos);
  EXPECT_EQ(view.rendering.find("return x * 2"), std::string::npos);
  EXPECT_LE(split_lines(view.rendering).size(), split_lines(kChart).size());
}

TEST(Skeleton, HeuristicFallbackForUnsupportedOrBrokenFiles) {
  auto ts = skeleton_of_file("src/a.ts", "import x from 'x';\nfunction f(a: number) {\n  return a;\n}\n");
  EXPECT_TRUE(ts.heuristic);
  EXPECT_TRUE(has_line(ts.rendering, "import x from 'x';"));
  EXPECT_TRUE(has_line(ts.rendering, "function f(a: number) {"));
  EXPECT_EQ(ts.rendering.find("return a"), std::string::npos);

  auto broken = skeleton_of_file("src/b.js", "function f() {\n  if (x) {\n");
  EXPECT_TRUE(broken.heuristic);
  EXPECT_THROW(skeleton_of_file("src/c.js", ""), Error);
}

TEST(HunkCompression, LongBodiesCollapseToDeclarations) {
  auto view = compress_file_for_hunk_loc("src/bar.js", kChart, 3);
  auto kept = [&](int l) { return std::find(view.kept_lines.begin(), view.kept_lines.end(), l) != view.kept_lines.end(); };
  for (int l : {1, 4, 5, 6, 7, 9, 10, 14, 15, 17, 19}) EXPECT_TRUE(kept(l)) << l;
  EXPECT_FALSE(kept(12));
  EXPECT_TRUE(std::is_sorted(view.kept_lines.begin(), view.kept_lines.end()));
  EXPECT_NE(view.rendering.find(kElisionMarker), std::string::npos);

  auto full = compress_file_for_hunk_loc("src/bar.js", kChart, 500);
  EXPECT_EQ(full.kept_lines.size(), 19u);
  EXPECT_THROW(compress_file_for_hunk_loc("src/bar.js", kChart, 0), Error);
}

TEST(HunkCompression, NumberedRenderingMarksGaps) {
  auto view = compress_file_for_hunk_loc("src/bar.js", kChart, 3);
  auto numbered = numbered_rendering(view, kChart);
  EXPECT_NE(numbered.find("10 |     const max = Math.max(...values);\n"), std::string::npos);
  EXPECT_NE(numbered.find(" 9 |   draw(values) {\n"), std::string::npos);
  EXPECT_NE(numbered.find("   | " + std::string(kElisionMarker)), std::string::npos);
  EXPECT_EQ(numbered.find("this.bar("), std::string::npos);
}

TEST(ElementHunk, QualifiedSuffixAndDecoratedNames) {
  for (std::string_view q : {"BarChart.draw", "draw", "draw()", "method draw", "bar.BarChart.draw"}) {
    auto h = extract_element_hunk("src/bar.js", kChart, q);
    EXPECT_EQ(h.element_name, "BarChart.draw") << q;
    EXPECT_EQ(h.start_line, 9);
    EXPECT_EQ(h.end_line, 14);
    EXPECT_EQ(h.text, slice_lines(kChart, 9, 14));
  }
  auto cls = extract_element_hunk("src/bar.js", kChart, "class BarChart");
  EXPECT_EQ(cls.start_line, 4);
  EXPECT_EQ(cls.end_line, 15);
  auto fn = extract_element_hunk("src/bar.js", kChart, "helper");
  EXPECT_EQ(fn.start_line, 17);
  EXPECT_EQ(fn.end_line, 17);
}

TEST(ElementHunk, NotFoundAndAmbiguous) {
  try {
    extract_element_hunk("src/bar.js", kChart, "missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ElementNotFound);
  }
  const std::string two = "class A {\n  render() {}\n}\nclass B {\n  render() {}\n}\n";
  try {
    extract_element_hunk("src/ab.js", two, "render");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbiguousElement);
  }
  EXPECT_EQ(extract_element_hunk("src/ab.js", two, "B.render").start_line, 5);
}

TEST(ElementHunk, BraceCountingOutsideGrammar) {
  const std::string ts = "const a = 1;\nfunction go(x: number) {\n  if (x) {\n    return 1;\n  }\n}\nlet b = 2;\n";
  auto h = extract_element_hunk("src/a.ts", ts, "go");
  EXPECT_EQ(h.start_line, 2);
  EXPECT_EQ(h.end_line, 6);
  EXPECT_THROW(extract_element_hunk("src/a.ts", ts, "stop"), Error);
}

TEST(ContextWindow, CentredThenClamped) {
  std::string text;
  for (int i = 1; i <= 10; ++i) text += "line" + std::to_string(i) + "\n";
  auto mid = extract_context_window("f.js", text, 5, 4);
  EXPECT_EQ(mid.start_line, 3);
  EXPECT_EQ(mid.end_line, 6);
  EXPECT_EQ(mid.element_name, "@f.js:3-6");
  EXPECT_EQ(mid.text, "line3\nline4\nline5\nline6\n");
  auto top = extract_context_window("f.js", text, 1, 4);
  EXPECT_EQ(top.start_line, 1);
  EXPECT_EQ(top.end_line, 4);
  auto bottom = extract_context_window("f.js", text, 10, 4);
  EXPECT_EQ(bottom.start_line, 7);
  EXPECT_EQ(bottom.end_line, 10);
  auto wide = extract_context_window("f.js", text, 3, 500);
  EXPECT_EQ(wide.start_line, 1);
  EXPECT_EQ(wide.end_line, 10);
  try {
    extract_context_window("f.js", text, 11, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AnchorOutOfRange);
  }
  EXPECT_THROW(extract_context_window("f.js", text, 0, 4), Error);
}

TEST(EnclosingElement, InnermostWins) {
  EXPECT_EQ(enclosing_element_hunk("src/bar.js", kChart, 12)->element_name, "BarChart.draw");
  EXPECT_EQ(enclosing_element_hunk("src/bar.js", kChart, 8)->element_name, "BarChart");
  EXPECT_FALSE(enclosing_element_hunk("src/bar.js", kChart, 19).has_value());
  EXPECT_FALSE(enclosing_element_hunk("src/a.ts", kChart, 12).has_value());
  EXPECT_EQ(top_level_declaration_line("src/bar.js", kChart, "LIMIT"), 19);
  EXPECT_FALSE(top_level_declaration_line("src/bar.js", kChart, "max").has_value());
}

TEST(SliceLines, InclusiveWithTerminators) {
  EXPECT_EQ(slice_lines("a\nb\nc", 2, 3), "b\nc");
  EXPECT_EQ(slice_lines("a\nb\nc\n", 1, 1), "a\n");
  EXPECT_EQ(slice_lines("a\n", 5, 6), "");
}

TEST(RepoStructure, CodeFilesOnly) {
  testing::TempDir dir;
  testing::write_tree(dir.path(), {{"src/a.js", "x"}, {"src/ui/b.js", "y"}, {"docs/c.md", "z"}, {"README.md", "r"}});
  auto view = repo_structure(snapshot_repository(dir.path()));
  EXPECT_EQ(view.rendering, "src/\n    ui/\n        b.js\n    a.js\n");
}

}  // namespace
}  // namespace guirepair
