#include <gtest/gtest.h>

#include "guirepair/config.hpp"
#include "guirepair/error.hpp"
#include "support/test_support.hpp"

namespace guirepair {
namespace {

using nlohmann::json;

TEST(Config, DefaultsAreValid) {
  PipelineConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.max_candidates(), 40);
  EXPECT_EQ(c.max_hunk_lines, 500);
  EXPECT_EQ(c.viewport, (Viewport{1280, 720}));
  EXPECT_TRUE(c.enable_image2code);
  EXPECT_TRUE(c.enable_code2image);
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig c;
  c.patch_samples = 7;
  c.viewport = {320, 200};
  c.pixel_tolerance = 2;
  auto back = pipeline_config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(pipeline_config_from_json(json{{"patch_sample", 3}}), Error);
  EXPECT_THROW(pipeline_config_from_json(json{{"patch_samples", 0}}).validate(), Error);
  EXPECT_THROW(pipeline_config_from_json(json{{"chunk_size", 10}, {"chunk_overlap", 10}}).validate(), Error);
  EXPECT_THROW(pipeline_config_from_json(json{{"file_loc_temperature", 2.5}}).validate(), Error);
  EXPECT_THROW(pipeline_config_from_json(json{{"doc_top_n_chat", -1}}).validate(), Error);
}

TEST(Config, VariantsToggleStages) {
  struct Row {
    Variant v;
    bool i2c;
    bool c2i;
  };
  for (auto [v, i2c, c2i] : {Row{Variant::Base, false, false}, Row{Variant::I2C, true, false},
                             Row{Variant::C2I, false, true}, Row{Variant::Full, true, true}}) {
    PipelineConfig c;
    apply_variant(c, v);
    EXPECT_EQ(c.enable_image2code, i2c) << to_string(v);
    EXPECT_EQ(c.enable_code2image, c2i) << to_string(v);
    EXPECT_EQ(variant_from_string(to_string(v)), v);
  }
  EXPECT_THROW(variant_from_string("plus"), Error);
}

TEST(Config, LoadResolvesPathsAgainstConfigDirectory) {
  testing::TempDir dir;
  write_file(dir / "cfg/config.json", R"({
    "pipeline": {"patch_samples": 3},
    "provider": {"backend": "scripted", "script": "script.json", "transcript": "t.json",
                 "prices": {"m": {"prompt_per_mtok": 1.0}}},
    "project": {"build_cmd": "true", "bundle_path": "out.js", "harness_cmd": ["tools/h", "--map", "map.json"],
                "viewport": {"w": 10, "h": 20}}
  })");
  write_file(dir / "cfg/map.json", "{}");
  auto cfg = load_config(dir / "cfg/config.json");
  EXPECT_EQ(cfg.pipeline.patch_samples, 3);
  EXPECT_EQ(*cfg.provider.script, dir.path() / "cfg/script.json");
  EXPECT_EQ(*cfg.provider.transcript, dir.path() / "cfg/t.json");
  ASSERT_EQ(cfg.project.harness_cmd.size(), 3u);
  EXPECT_EQ(cfg.project.harness_cmd[0], (dir.path() / "cfg/tools/h").string());
  EXPECT_EQ(cfg.project.harness_cmd[1], "--map");
  EXPECT_EQ(cfg.project.harness_cmd[2], (dir.path() / "cfg/map.json").string());
  EXPECT_EQ(cfg.project.viewport, (Viewport{10, 20}));
}

TEST(Config, RejectsUnknownBackend) {
  EXPECT_THROW(config_from_json(json::parse(R"({"provider": {"backend": "grpc"}})"), "."), Error);
  EXPECT_THROW(config_from_json(json::parse(R"({"pipeline": {"viewport": {"w": 1}}})"), "."), Error);
}

}  // namespace
}  // namespace guirepair
