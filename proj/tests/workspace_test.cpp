#include <gtest/gtest.h>

#include "guirepair/error.hpp"
#include "guirepair/image.hpp"
#include "guirepair/workspace.hpp"
#include "support/test_support.hpp"

namespace guirepair {
namespace {

using testing::TempDir;
using testing::write_tree;

std::string png_bytes(int w, int h) { return encode_png(Image(w, h, 0xff0000ffu)); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(IssueReport, LoadsTitleBodyAndImage) {
  TempDir dir;
  write_file(dir / "shot.png", png_bytes(3, 2));
  write_file(dir / "issue.json", R"({"instance_id": "x__y-1", "title": "T", "body": "line 1\r\nline 2  ",
                                     "images": [{"id": "a", "source": "shot.png"}]})");
  auto issue = load_issue_report(dir / "issue.json");
  EXPECT_EQ(issue.instance_id, "x__y-1");
  EXPECT_EQ(issue.body_text, "line 1\r\nline 2  ");
  ASSERT_EQ(issue.images.size(), 1u);
  EXPECT_EQ(issue.images[0].media_type, "image/png");
  EXPECT_EQ(issue.images[0].width, 3);
  EXPECT_EQ(issue.images[0].height, 2);
  EXPECT_EQ(issue.images[0].payload, png_bytes(3, 2));
  EXPECT_FALSE(issue.repro_code);
}

TEST(IssueReport, NoImagesIsTextOnly) {
  TempDir dir;
  write_file(dir / "issue.json", R"({"instance_id": "a-1", "title": "T", "body": "B", "repro_code": null})");
  auto issue = load_issue_report(dir / "issue.json");
  EXPECT_TRUE(issue.images.empty());
  EXPECT_FALSE(issue.repro_code);
}

TEST(IssueReport, TaggedReproBlockBecomesReproCode) {
  auto issue = load_issue_report(testing::fixtures_dir() / "tinyprism" / "issue.json");
  ASSERT_TRUE(issue.repro_code);
  EXPECT_EQ(*issue.repro_code,
            "var root = document.getElementById('root');\n"
            "TinyPrism.highlight(root, 'if (ready) { return 42; }', { language: 'javascript', theme: 'dark' });\n");
}

TEST(IssueReport, ExplicitReproCodeWinsOverBody) {
  TempDir dir;
  write_file(dir / "issue.json",
             R"({"instance_id": "a-1", "title": "T", "body": "```repro\nbody();\n```\n", "repro_code": "field();\n"})");
  EXPECT_EQ(*load_issue_report(dir / "issue.json").repro_code, "field();\n");
}

TEST(IssueReport, UntaggedBlocksAreNotRepro) {
  EXPECT_FALSE(extract_tagged_repro("```js\nx();\n```\n"));
  EXPECT_EQ(*extract_tagged_repro("text\n```js,reproduction\nx();\n```\n"), "x();\n");
}

TEST(IssueReport, Errors) {
  TempDir dir;
  write_file(dir / "missing.json", R"({"instance_id": "a", "body": "B"})");
  EXPECT_EQ(code_of([&] { load_issue_report(dir / "missing.json"); }), ErrorCode::MissingField);
  write_file(dir / "unreadable.json", R"({"instance_id": "a", "title": "T", "body": "B",
                                          "images": [{"id": "i", "source": "nope.png"}]})");
  EXPECT_EQ(code_of([&] { load_issue_report(dir / "unreadable.json"); }), ErrorCode::UnreadableImage);
  write_file(dir / "bmp.bin", "BM\x36\x00\x00\x00 not a supported format");
  write_file(dir / "bmp.json", R"({"instance_id": "a", "title": "T", "body": "B",
                                   "images": [{"id": "i", "source": "bmp.bin"}]})");
  EXPECT_EQ(code_of([&] { load_issue_report(dir / "bmp.json"); }), ErrorCode::UnsupportedMediaType);
}

TEST(IssueReport, UrlImagesGoThroughFetcher) {
  TempDir dir;
  write_file(dir / "issue.json", R"({"instance_id": "a", "title": "T", "body": "B",
                                     "images": [{"id": "i", "source": "https://example.test/a.png"}]})");
  std::vector<std::string> fetched;
  auto issue = load_issue_report(dir / "issue.json", [&](const std::string& url) {
    fetched.push_back(url);
    return png_bytes(4, 4);
  });
  EXPECT_EQ(fetched, std::vector<std::string>{"https://example.test/a.png"});
  EXPECT_EQ(issue.images.at(0).width, 4);
}

TEST(Snapshot, IndexesTextFilesAndFindsDocs) {
  TempDir dir;
  write_tree(dir.path(), {{"src/a.js", "a();\n"}, {"docs/api.md", "# API\n"}});
  auto snap = snapshot_repository(dir.path());
  EXPECT_EQ(snap.file_index, (std::vector<std::string>{"docs/api.md", "src/a.js"}));
  EXPECT_EQ(snap.doc_root, std::optional<std::string>("docs"));
  EXPECT_EQ(snap.doc_files(), std::vector<std::string>{"docs/api.md"});
  EXPECT_EQ(snap.code_files(), std::vector<std::string>{"src/a.js"});
  EXPECT_EQ(snap.read("src/a.js"), "a();\n");
  EXPECT_THROW(snap.read("src/b.js"), Error);
}

TEST(Snapshot, NoDocsDirectory) {
  TempDir dir;
  write_tree(dir.path(), {{"src/a.js", "a();\n"}});
  auto snap = snapshot_repository(dir.path());
  EXPECT_FALSE(snap.doc_root);
  EXPECT_EQ(code_of([&] { doc_tree(snap); }), ErrorCode::NoDocumentation);
}

TEST(Snapshot, DocDirectoryOrder) {
  TempDir dir;
  write_tree(dir.path(), {{"src/a.js", "a();\n"}, {"documentation/x.md", "x\n"}, {"doc/y.md", "y\n"}});
  EXPECT_EQ(snapshot_repository(dir.path()).doc_root, std::optional<std::string>("doc"));
}

TEST(Snapshot, BinaryFilesFlagged) {
  TempDir dir;
  write_tree(dir.path(), {{"src/a.js", "a();\n"}, {"assets/logo.png", png_bytes(2, 2)}});
  auto snap = snapshot_repository(dir.path());
  EXPECT_EQ(snap.file_index, std::vector<std::string>{"src/a.js"});
  EXPECT_EQ(snap.binary_files, std::vector<std::string>{"assets/logo.png"});
}

TEST(Snapshot, Errors) {
  TempDir dir;
  EXPECT_EQ(code_of([&] { snapshot_repository(dir / "absent"); }), ErrorCode::NotADirectory);
  EXPECT_EQ(code_of([&] { snapshot_repository(dir.path()); }), ErrorCode::EmptyRepository);
}

TEST(Snapshot, Idempotent) {
  auto root = testing::fixtures_dir() / "tinychart" / "repo";
  EXPECT_EQ(snapshot_repository(root), snapshot_repository(root));
}

TEST(DocTree, TwoLevelsStableAndComplete) {
  TempDir dir;
  write_tree(dir.path(), {{"docs/a.md", "a\n"}, {"docs/guide/b.md", "b\n"}, {"src/x.js", "x\n"}});
  auto snap = snapshot_repository(dir.path());
  auto tree = doc_tree(snap);
  EXPECT_EQ(tree, "docs/\n    guide/\n        b.md\n    a.md\n");
  EXPECT_EQ(tree, doc_tree(snapshot_repository(dir.path())));
}

TEST(DocTree, EmptyDocRoot) {
  TempDir dir;
  write_tree(dir.path(), {{"src/x.js", "x\n"}});
  fs::create_directories(dir / "docs");
  auto snap = snapshot_repository(dir.path());
  EXPECT_EQ(code_of([&] { doc_tree(snap); }), ErrorCode::NoDocumentation);
}

}  // namespace
}  // namespace guirepair
