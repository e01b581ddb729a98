#include <gtest/gtest.h>

#include "guirepair/error.hpp"
#include "guirepair/selection.hpp"

namespace guirepair {
namespace {

const std::vector<std::string> kUniverse = {"docs/api/scale.md", "docs/intro.md", "src/charts/bar.js",
                                            "src/core/dom.js"};

TEST(PathSelection, FencedBlockEntriesAreValidated) {
  auto sel = parse_path_selection(
      "The bar chart is involved.\n```\n- src/charts/bar.js\n2. `src/core/dom.js`\nsrc/missing.js\n"
      "./src/charts/bar.js\nsrc/charts/\nlib/\n```\n",
      kUniverse);
  EXPECT_EQ(sel.files, (std::vector<std::string>{"src/charts/bar.js", "src/core/dom.js"}));
  ASSERT_EQ(sel.directories.size(), 1u);
  EXPECT_TRUE(sel.directories[0].starts_with("src/charts"));
  EXPECT_EQ(sel.dropped, (std::vector<std::string>{"src/missing.js", "lib/"}));
  EXPECT_NE(sel.rationale.find("bar chart is involved"), std::string::npos);
  EXPECT_FALSE(sel.lenient);
}

TEST(PathSelection, MultipleBlocksAndBaseDirectory) {
  auto sel = parse_path_selection("```\nintro.md\n```\ntext\n```\napi/scale.md\n```\n", kUniverse,
                                  std::string("docs"));
  EXPECT_EQ(sel.files, (std::vector<std::string>{"docs/intro.md", "docs/api/scale.md"}));
}

TEST(PathSelection, LenientScanWithoutFences) {
  auto sel = parse_path_selection("Look at `src/core/dom.js`, and maybe src/charts/bar.js.", kUniverse);
  EXPECT_TRUE(sel.lenient);
  EXPECT_EQ(sel.files, (std::vector<std::string>{"src/core/dom.js", "src/charts/bar.js"}));
}

TEST(PathSelection, NothingUsableThrows) {
  try {
    parse_path_selection("I am not sure which file is relevant.", kUniverse);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnparseableSelection);
  }
}

TEST(PathSelection, EmptyFencedBlockYieldsEmptySelection) {
  auto sel = parse_path_selection("```\nnothing/here.js\n```\n", kUniverse);
  EXPECT_TRUE(sel.files.empty());
  EXPECT_EQ(sel.dropped.size(), 1u);
}

}  // namespace
}  // namespace guirepair
