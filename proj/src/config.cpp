#include "guirepair/config.hpp"

#include <unistd.h>

#include <cstdlib>
#include <set>

#include "guirepair/error.hpp"

#ifndef GUIREPAIR_PROMPTS_DIR
#define GUIREPAIR_PROMPTS_DIR "prompts"
#endif

namespace guirepair {

using nlohmann::json;

void PipelineConfig::validate() const {
  auto nonneg = [](int v, const char* name) {
    if (v < 0) throw Error(ErrorCode::ConfigError, std::string(name) + " must be >= 0");
  };
  auto positive = [](int v, const char* name) {
    if (v < 1) throw Error(ErrorCode::ConfigError, std::string(name) + " must be >= 1");
  };
  auto temp = [](double t, const char* name) {
    if (!(t >= 0.0 && t <= 2.0)) throw Error(ErrorCode::ConfigError, std::string(name) + " must lie in [0, 2]");
  };
  nonneg(doc_top_n_chat, "doc_top_n_chat");
  nonneg(doc_top_n_embed, "doc_top_n_embed");
  nonneg(chunk_overlap, "chunk_overlap");
  positive(chunk_size, "chunk_size");
  if (chunk_size <= chunk_overlap) throw Error(ErrorCode::ConfigError, "chunk_size must exceed chunk_overlap");
  positive(file_loc_samples, "file_loc_samples");
  positive(hunk_loc_samples, "hunk_loc_samples");
  positive(patch_samples, "patch_samples");
  positive(embed_file_top_k, "embed_file_top_k");
  positive(max_key_files, "max_key_files");
  positive(context_window_lines, "context_window_lines");
  positive(max_hunk_lines, "max_hunk_lines");
  nonneg(pixel_tolerance, "pixel_tolerance");
  if (pixel_threshold < 0) throw Error(ErrorCode::ConfigError, "pixel_threshold must be >= 0");
  if (viewport.width < 1 || viewport.height < 1) throw Error(ErrorCode::ConfigError, "viewport must be positive");
  temp(file_loc_temperature, "file_loc_temperature");
  temp(hunk_loc_temperature, "hunk_loc_temperature");
  temp(patch_sample_temperature, "patch_sample_temperature");
  temp(default_temperature, "default_temperature");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::I2C: return "i2c";
    case Variant::C2I: return "c2i";
    case Variant::Full: return "full";
  }
  return "full";
}

Variant variant_from_string(std::string_view s) {
  if (s == "base") return Variant::Base;
  if (s == "i2c") return Variant::I2C;
  if (s == "c2i") return Variant::C2I;
  if (s == "full") return Variant::Full;
  throw Error(ErrorCode::InvalidArgument, "unknown variant '" + std::string(s) + "'");
}

void apply_variant(PipelineConfig& cfg, Variant v) {
  cfg.enable_image2code = v == Variant::I2C || v == Variant::Full;
  cfg.enable_code2image = v == Variant::C2I || v == Variant::Full;
}

namespace {

Viewport viewport_from_json(const json& j) {
  Viewport v;
  v.width = j.at("w").get<int>();
  v.height = j.at("h").get<int>();
  return v;
}

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j) {
  static const std::set<std::string> kKeys = {
      "doc_top_n_chat", "doc_top_n_embed", "chunk_size", "chunk_overlap", "file_loc_temperature",
      "file_loc_samples", "embed_file_top_k", "max_key_files", "hunk_loc_temperature", "hunk_loc_samples",
      "context_window_lines", "max_hunk_lines", "patch_sample_temperature", "patch_samples",
      "default_temperature", "pixel_threshold", "pixel_tolerance", "viewport", "enable_image2code",
      "enable_code2image"};
  for (const auto& [k, _] : j.items())
    if (!kKeys.contains(k)) throw Error(ErrorCode::ConfigError, "unknown pipeline key '" + k + "'");
  PipelineConfig c;
  try {
    read_key(j, "doc_top_n_chat", c.doc_top_n_chat);
    read_key(j, "doc_top_n_embed", c.doc_top_n_embed);
    read_key(j, "chunk_size", c.chunk_size);
    read_key(j, "chunk_overlap", c.chunk_overlap);
    read_key(j, "file_loc_temperature", c.file_loc_temperature);
    read_key(j, "file_loc_samples", c.file_loc_samples);
    read_key(j, "embed_file_top_k", c.embed_file_top_k);
    read_key(j, "max_key_files", c.max_key_files);
    read_key(j, "hunk_loc_temperature", c.hunk_loc_temperature);
    read_key(j, "hunk_loc_samples", c.hunk_loc_samples);
    read_key(j, "context_window_lines", c.context_window_lines);
    read_key(j, "max_hunk_lines", c.max_hunk_lines);
    read_key(j, "patch_sample_temperature", c.patch_sample_temperature);
    read_key(j, "patch_samples", c.patch_samples);
    read_key(j, "default_temperature", c.default_temperature);
    read_key(j, "pixel_threshold", c.pixel_threshold);
    read_key(j, "pixel_tolerance", c.pixel_tolerance);
    read_key(j, "enable_image2code", c.enable_image2code);
    read_key(j, "enable_code2image", c.enable_code2image);
    if (j.contains("viewport")) c.viewport = viewport_from_json(j["viewport"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("pipeline config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const PipelineConfig& c) {
  return {{"doc_top_n_chat", c.doc_top_n_chat},
          {"doc_top_n_embed", c.doc_top_n_embed},
          {"chunk_size", c.chunk_size},
          {"chunk_overlap", c.chunk_overlap},
          {"file_loc_temperature", c.file_loc_temperature},
          {"file_loc_samples", c.file_loc_samples},
          {"embed_file_top_k", c.embed_file_top_k},
          {"max_key_files", c.max_key_files},
          {"hunk_loc_temperature", c.hunk_loc_temperature},
          {"hunk_loc_samples", c.hunk_loc_samples},
          {"context_window_lines", c.context_window_lines},
          {"max_hunk_lines", c.max_hunk_lines},
          {"patch_sample_temperature", c.patch_sample_temperature},
          {"patch_samples", c.patch_samples},
          {"default_temperature", c.default_temperature},
          {"pixel_threshold", c.pixel_threshold},
          {"pixel_tolerance", c.pixel_tolerance},
          {"viewport", {{"w", c.viewport.width}, {"h", c.viewport.height}}},
          {"enable_image2code", c.enable_image2code},
          {"enable_code2image", c.enable_code2image}};
}

fs::path default_prompts_dir() {
  if (const char* env = std::getenv("GUIREPAIR_PROMPTS_DIR")) return env;
  return GUIREPAIR_PROMPTS_DIR;
}

AppConfig config_from_json(const json& j, const fs::path& base_dir) {
  AppConfig cfg;
  cfg.base_dir = base_dir;
  cfg.prompts_dir = default_prompts_dir();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
  try {
    if (j.contains("pipeline")) cfg.pipeline = pipeline_config_from_json(j["pipeline"]);
    if (j.contains("prompts_dir")) cfg.prompts_dir = resolve(j["prompts_dir"].get<std::string>());
    read_key(j, "model_name_or_path", cfg.model_name_or_path);

    if (j.contains("provider")) {
      const auto& p = j["provider"];
      auto& pc = cfg.provider;
      read_key(p, "backend", pc.backend);
      read_key(p, "chat_model", pc.chat_model);
      read_key(p, "embedding_model", pc.embedding_model);
      read_key(p, "chat_url", pc.chat_url);
      read_key(p, "embeddings_url", pc.embeddings_url);
      read_key(p, "api_key_env", pc.api_key_env);
      read_key(p, "max_tokens", pc.max_tokens);
      read_key(p, "max_retries", pc.max_retries);
      read_key(p, "backoff_ms", pc.backoff_ms);
      read_key(p, "embedding_dimension", pc.embedding_dimension);
      if (p.contains("script")) pc.script = resolve(p["script"].get<std::string>());
      if (p.contains("transcript")) pc.transcript = resolve(p["transcript"].get<std::string>());
      if (p.contains("prices"))
        for (const auto& [model, price] : p["prices"].items())
          pc.prices.set(model, Price::per_million(price.at("prompt_per_mtok").get<double>(),
                                                  price.value("completion_per_mtok", 0.0)));
      if (pc.backend != "http" && pc.backend != "scripted")
        throw Error(ErrorCode::ConfigError, "provider.backend must be http or scripted");
    }

    if (j.contains("project")) {
      const auto& p = j["project"];
      auto& pr = cfg.project;
      read_key(p, "build_cmd", pr.build_cmd);
      read_key(p, "bundle_path", pr.bundle_path);
      read_key(p, "entry_html", pr.entry_html);
      read_key(p, "settle_ms", pr.settle_ms);
      read_key(p, "build_timeout_ms", pr.build_timeout_ms);
      read_key(p, "render_timeout_ms", pr.render_timeout_ms);
      if (p.contains("viewport")) pr.viewport = viewport_from_json(p["viewport"]);
      if (p.contains("harness_cmd")) {
        pr.harness_cmd = p["harness_cmd"].get<std::vector<std::string>>();
        if (!pr.harness_cmd.empty()) pr.harness_cmd[0] = resolve_executable(pr.harness_cmd[0], base_dir);
        // Remaining arguments that name existing files relative to the config are made absolute.
        for (std::size_t i = 1; i < pr.harness_cmd.size(); ++i) {
          std::error_code ec;
          const auto& a = pr.harness_cmd[i];
          if (!a.empty() && a[0] != '-' && !fs::path(a).is_absolute() && fs::exists(base_dir / a, ec))
            pr.harness_cmd[i] = (base_dir / a).string();
        }
      }
      if (pr.settle_ms < 0) throw Error(ErrorCode::ConfigError, "settle_ms must be >= 0");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return cfg;
}

AppConfig load_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return config_from_json(j, fs::absolute(path).parent_path());
}

std::string resolve_executable(const std::string& name, const fs::path& base_dir) {
  std::error_code ec;
  if (name.find('/') != std::string::npos) {
    fs::path p(name);
    return (p.is_absolute() ? p : base_dir / p).string();
  }
  fs::path self = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    for (const auto& dir : {self.parent_path(), self.parent_path().parent_path() / "bin"}) {
      if (fs::exists(dir / name, ec)) return (dir / name).string();
    }
  }
  if (const char* path_env = std::getenv("PATH")) {
    std::string_view paths(path_env);
    std::size_t start = 0;
    while (start <= paths.size()) {
      auto colon = paths.find(':', start);
      if (colon == std::string_view::npos) colon = paths.size();
      fs::path cand = fs::path(std::string(paths.substr(start, colon - start))) / name;
      if (::access(cand.c_str(), X_OK) == 0) return cand.string();
      start = colon + 1;
    }
  }
  return name;
}

}  // namespace guirepair
