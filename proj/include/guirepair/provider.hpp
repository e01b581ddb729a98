#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "guirepair/util.hpp"

namespace guirepair {

struct TextPart {
  std::string text;
  friend bool operator==(const TextPart&, const TextPart&) = default;
};

struct ImagePart {
  std::string media_type;
  std::string data;  // raw bytes; base64-encoded only on the wire
  friend bool operator==(const ImagePart&, const ImagePart&) = default;
};

using MessagePart = std::variant<TextPart, ImagePart>;

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::vector<MessagePart> parts;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int n_samples = 1;
  int max_tokens = 4096;

  /// Throws InvalidArgument unless temperature in [0, 2], n_samples >= 1, max_tokens >= 1
  /// and there is at least one message.
  void validate() const;
  /// Concatenated text parts, separated by blank lines.
  std::string all_text() const;
  std::vector<const ImagePart*> images() const;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

nlohmann::json to_json(const ChatRequest& req);
ChatRequest chat_request_from_json(const nlohmann::json& j);

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct ChatResponse {
  std::vector<std::string> samples;
  TokenUsage usage;
  std::string model_id;
  friend bool operator==(const ChatResponse&, const ChatResponse&) = default;
};

struct EmbeddingResponse {
  std::vector<std::vector<float>> vectors;
  TokenUsage usage;
  std::string model_id;
};

/// Stable hash of (model id, temperature, n, roles + text, image content digests).
std::string request_fingerprint(const ChatRequest& req, const std::string& model_id);
std::string embedding_fingerprint(const std::string& text, const std::string& model_id);

// ---------------------------------------------------------------------------------------------
// Cost accounting

/// Dollars per one million tokens, held as integer picodollars per token.
struct Price {
  std::int64_t prompt_picodollars_per_token = 0;
  std::int64_t completion_picodollars_per_token = 0;

  static Price per_million(double prompt_dollars, double completion_dollars);
};

class PriceTable {
 public:
  PriceTable();  // gpt-4o-2024-08-06 and text-embedding-3-small list prices
  void set(const std::string& model_id, Price price) { prices_[model_id] = price; }
  /// Models without an entry cost nothing.
  std::int64_t cost_picodollars(const std::string& model_id, const TokenUsage& usage) const;

 private:
  std::map<std::string, Price> prices_;
};

struct LedgerEntry {
  std::string stage;
  std::string model_id;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t picodollars = 0;

  double dollars() const { return static_cast<double>(picodollars) * 1e-12; }
};

struct LedgerTotals {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t picodollars = 0;

  std::int64_t tokens() const { return prompt_tokens + completion_tokens; }
  double dollars() const { return static_cast<double>(picodollars) * 1e-12; }
  friend bool operator==(const LedgerTotals&, const LedgerTotals&) = default;
};

/// Append-only; appends are atomic with respect to concurrent callers.
class CostLedger {
 public:
  CostLedger() = default;
  CostLedger(const CostLedger& other);
  CostLedger& operator=(const CostLedger& other);

  void append(LedgerEntry entry);
  std::vector<LedgerEntry> entries() const;
  LedgerTotals totals() const;
  std::map<std::string, LedgerTotals> subtotals_by_stage() const;

  nlohmann::json to_json() const;
  static CostLedger from_json(const nlohmann::json& j);

 private:
  mutable std::mutex mutex_;
  std::vector<LedgerEntry> entries_;
  LedgerTotals totals_;
};

/// (tokens, dollars) summed over every entry.
LedgerTotals ledger_total(const CostLedger& ledger);

// ---------------------------------------------------------------------------------------------
// Transcripts

/// Fingerprint-keyed recordings of chat responses and embedding vectors.
/// Serialization is deterministic (keys sorted).
class Transcript {
 public:
  struct ChatRecord {
    std::string stage;
    ChatResponse response;
  };
  struct EmbeddingRecord {
    std::vector<float> vector;
    std::int64_t tokens = 0;
    std::string model_id;
  };

  Transcript() = default;
  Transcript(Transcript&& other) noexcept
      : chat_(std::move(other.chat_)), embeddings_(std::move(other.embeddings_)) {}
  Transcript& operator=(Transcript&& other) noexcept {
    std::scoped_lock lock(mutex_);
    chat_ = std::move(other.chat_);
    embeddings_ = std::move(other.embeddings_);
    return *this;
  }

  std::optional<ChatRecord> find_chat(const std::string& fingerprint) const;
  std::optional<EmbeddingRecord> find_embedding(const std::string& fingerprint) const;
  void put_chat(const std::string& fingerprint, ChatRecord record);
  void put_embedding(const std::string& fingerprint, EmbeddingRecord record);

  std::size_t chat_count() const;
  std::size_t embedding_count() const;

  std::string serialize() const;
  static Transcript parse(std::string_view text);
  static Transcript load(const fs::path& path);  // missing file -> empty transcript
  void save(const fs::path& path) const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, ChatRecord> chat_;
  std::map<std::string, EmbeddingRecord> embeddings_;
};

// ---------------------------------------------------------------------------------------------
// Backends

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual ChatResponse complete(const ChatRequest& req, const std::string& model_id, std::string_view stage) = 0;
  virtual EmbeddingResponse embed(const std::vector<std::string>& texts, const std::string& model_id) = 0;
};

struct HttpBackendOptions {
  std::string chat_url = "https://api.openai.com/v1/chat/completions";
  std::string embeddings_url = "https://api.openai.com/v1/embeddings";
  std::string api_key;
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{1000};  // doubles per retry: 1s, 2s, 4s
  std::chrono::milliseconds timeout{120000};
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to this_thread::sleep_for
};

/// Chat-completions and embeddings over HTTP. Images travel as base64 data URLs.
class HttpBackend : public ModelBackend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ChatResponse complete(const ChatRequest& req, const std::string& model_id, std::string_view stage) override;
  EmbeddingResponse embed(const std::vector<std::string>& texts, const std::string& model_id) override;

  static nlohmann::json chat_payload(const ChatRequest& req, const std::string& model_id);

 private:
  nlohmann::json post_with_retry(const std::string& url, const nlohmann::json& payload);
  HttpBackendOptions options_;
};

/// Deterministic feature-hashing embedding over lower-cased word tokens. Never all-zero.
std::vector<float> hash_embedding(std::string_view text, int dimension = 256);

/// Offline backend driven by a rule file. Each rule names a stage, substrings the request
/// text must contain / must not contain, and images (by file) it must carry; the first
/// matching rule answers, cycling through its samples. Embeddings come from hash_embedding.
class ScriptedBackend : public ModelBackend {
 public:
  static ScriptedBackend load(const fs::path& rules_path, int embedding_dimension = 256);
  ScriptedBackend(nlohmann::json rules, fs::path base_dir, int embedding_dimension = 256);

  ChatResponse complete(const ChatRequest& req, const std::string& model_id, std::string_view stage) override;
  EmbeddingResponse embed(const std::vector<std::string>& texts, const std::string& model_id) override;

 private:
  struct Rule {
    std::string stage;
    std::vector<std::string> contains;
    std::vector<std::string> excludes;
    std::vector<std::string> image_digests;
    std::vector<std::string> samples;
  };
  std::vector<Rule> rules_;
  int dimension_;
};

std::int64_t estimate_tokens(std::string_view text);

// ---------------------------------------------------------------------------------------------

enum class ProviderMode { Live, Record, Replay };
std::string_view to_string(ProviderMode mode);
ProviderMode provider_mode_from_string(std::string_view s);

struct ProviderOptions {
  ProviderMode mode = ProviderMode::Replay;
  std::string chat_model = "gpt-4o-2024-08-06";
  std::string embedding_model = "text-embedding-3-small";
  int max_tokens = 4096;
  PriceTable prices;
  std::optional<fs::path> transcript_path;  // loaded on construction, written by flush()
};

/// Uniform chat + embedding access. In Replay mode no backend exists and every answer
/// comes from the transcript; in Record mode answers already in the transcript are reused
/// and new ones are written through.
class Provider {
 public:
  Provider(ProviderOptions options, std::unique_ptr<ModelBackend> backend);
  ~Provider();
  Provider(const Provider&) = delete;
  Provider& operator=(const Provider&) = delete;

  ChatResponse chat_complete(ChatRequest req, std::string_view stage);
  /// One L2-normalized vector per text. Throws InvalidArgument on an empty list or text.
  std::vector<std::vector<float>> embed_texts(const std::vector<std::string>& texts,
                                              std::string_view stage = "embedding");

  CostLedger& ledger() { return ledger_; }
  const CostLedger& ledger() const { return ledger_; }
  const ProviderOptions& options() const { return options_; }
  Transcript& transcript() { return *transcript_; }
  /// Number of calls that reached the backend (always 0 in Replay mode).
  std::size_t backend_calls() const { return backend_calls_.load(); }
  bool has_backend() const { return backend_ != nullptr; }
  void flush();

 private:
  ProviderOptions options_;
  std::unique_ptr<ModelBackend> backend_;
  std::unique_ptr<Transcript> transcript_;
  CostLedger ledger_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<bool> dirty_{false};
};

}  // namespace guirepair
