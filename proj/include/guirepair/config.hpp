#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/provider.hpp"
#include "guirepair/util.hpp"

namespace guirepair {

struct Viewport {
  int width = 1280;
  int height = 720;
  friend bool operator==(const Viewport&, const Viewport&) = default;
};

/// Every sampling knob of the pipeline. Defaults are the published settings.
struct PipelineConfig {
  int doc_top_n_chat = 6;
  int doc_top_n_embed = 6;
  int chunk_size = 512;
  int chunk_overlap = 0;
  double file_loc_temperature = 1.0;
  int file_loc_samples = 2;
  int embed_file_top_k = 4;
  int max_key_files = 4;
  double hunk_loc_temperature = 1.0;
  int hunk_loc_samples = 2;
  int context_window_lines = 500;
  int max_hunk_lines = 500;
  double patch_sample_temperature = 1.0;
  int patch_samples = 39;
  double default_temperature = 0.0;
  std::int64_t pixel_threshold = 0;  // differing pixels tolerated before "changed"
  int pixel_tolerance = 0;           // per-channel delta tolerated per pixel
  Viewport viewport;
  bool enable_image2code = true;
  bool enable_code2image = true;

  /// Throws ConfigError on negative counts, zero sample counts or chunk_size <= overlap.
  void validate() const;
  int max_candidates() const { return 1 + patch_samples; }
};

enum class Variant { Base, I2C, C2I, Full };
std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view s);
void apply_variant(PipelineConfig& cfg, Variant v);

/// How to build the project under repair and render a repro page against it.
struct ProjectConfig {
  std::string build_cmd;                 // run with /bin/sh -c in a copy of the repository
  std::string bundle_path;               // relative to the build directory
  std::string entry_html = "repro/index.html";
  std::optional<Viewport> viewport;      // overrides PipelineConfig::viewport
  int settle_ms = 500;
  std::vector<std::string> harness_cmd;  // argv of the render harness
  int build_timeout_ms = 300000;
  int render_timeout_ms = 60000;
};

struct ProviderConfig {
  std::string backend = "http";  // http | scripted
  std::string chat_model = "gpt-4o-2024-08-06";
  std::string embedding_model = "text-embedding-3-small";
  std::string chat_url = "https://api.openai.com/v1/chat/completions";
  std::string embeddings_url = "https://api.openai.com/v1/embeddings";
  std::string api_key_env = "OPENAI_API_KEY";
  std::optional<fs::path> script;      // scripted backend rule file
  std::optional<fs::path> transcript;  // record/replay file
  int max_tokens = 4096;
  int max_retries = 3;
  int backoff_ms = 1000;
  int embedding_dimension = 256;  // scripted backend only
  PriceTable prices;
};

struct AppConfig {
  PipelineConfig pipeline;
  ProviderConfig provider;
  ProjectConfig project;
  fs::path prompts_dir;
  std::string model_name_or_path = "guirepair";
  fs::path base_dir;  // directory relative paths were resolved against
};

fs::path default_prompts_dir();

PipelineConfig pipeline_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& cfg);

/// Parses a config file. Relative paths inside it resolve against its directory.
AppConfig load_config(const fs::path& path);
AppConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir);

/// Resolves a harness/tool name: paths with '/' are taken relative to base_dir; bare names
/// are looked up next to the running executable, then on PATH.
std::string resolve_executable(const std::string& name, const fs::path& base_dir);

}  // namespace guirepair
