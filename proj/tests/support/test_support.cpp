#include "test_support.hpp"

#include <cstdlib>

#include "guirepair/error.hpp"

namespace guirepair::testing {

fs::path source_dir() { return GUIREPAIR_SOURCE_DIR; }
fs::path fixtures_dir() { return source_dir() / "fixtures"; }
fs::path prompts_dir() { return source_dir() / "prompts"; }
fs::path cli_path() { return GUIREPAIR_CLI_PATH; }
fs::path render_stub_path() { return GUIREPAIR_RENDER_STUB_PATH; }

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "guirepair-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw Error(ErrorCode::IoError, "mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_tree(const fs::path& root, const std::map<std::string, std::string>& files) {
  for (const auto& [rel, content] : files) write_file(root / rel, content);
}

FakeBackend::FakeBackend(ChatFn fn, std::shared_ptr<FakeCalls> calls, int dimension)
    : fn_(std::move(fn)), calls_(calls ? std::move(calls) : std::make_shared<FakeCalls>()), dimension_(dimension) {}

ChatResponse FakeBackend::complete(const ChatRequest& req, const std::string& model_id, std::string_view stage) {
  calls_->chat_stages.emplace_back(stage);
  calls_->requests.push_back(req);
  ChatResponse resp;
  resp.model_id = model_id;
  auto samples = fn_(req, stage);
  if (samples.empty()) samples.emplace_back();
  for (int i = 0; i < req.n_samples; ++i) {
    resp.samples.push_back(samples[static_cast<std::size_t>(i) % samples.size()]);
    resp.usage.completion_tokens += estimate_tokens(resp.samples.back());
  }
  resp.usage.prompt_tokens = estimate_tokens(req.all_text());
  return resp;
}

EmbeddingResponse FakeBackend::embed(const std::vector<std::string>& texts, const std::string& model_id) {
  ++calls_->embed_batches;
  EmbeddingResponse resp;
  resp.model_id = model_id;
  for (const auto& t : texts) {
    resp.vectors.push_back(hash_embedding(t, dimension_));
    resp.usage.prompt_tokens += estimate_tokens(t);
  }
  return resp;
}

ChatResponse TripwireBackend::complete(const ChatRequest&, const std::string&, std::string_view stage) {
  ++*hits_;
  throw Error(ErrorCode::EndpointUnreachable, "network access during an offline run (stage " + std::string(stage) + ")");
}

EmbeddingResponse TripwireBackend::embed(const std::vector<std::string>&, const std::string&) {
  ++*hits_;
  throw Error(ErrorCode::EndpointUnreachable, "network access during an offline run (embeddings)");
}

std::unique_ptr<Provider> fake_provider(FakeBackend::ChatFn fn, std::shared_ptr<FakeCalls> calls) {
  ProviderOptions opts;
  opts.mode = ProviderMode::Live;
  if (!calls) calls = std::make_shared<FakeCalls>();
  return std::make_unique<Provider>(opts, std::make_unique<FakeBackend>(std::move(fn), std::move(calls)));
}

AppConfig fixture_config(const std::string& name) {
  auto cfg = load_config(fixtures_dir() / name / "config.json");
  cfg.prompts_dir = prompts_dir();
  return cfg;
}

}  // namespace guirepair::testing
