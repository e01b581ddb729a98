#include "guirepair/provider.hpp"

#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

#include "guirepair/error.hpp"
#include "guirepair/http.hpp"

namespace guirepair {

using nlohmann::json;

void ChatRequest::validate() const {
  if (messages.empty()) throw Error(ErrorCode::InvalidArgument, "chat request without messages");
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw Error(ErrorCode::InvalidArgument, "temperature must lie in [0, 2]");
  if (n_samples < 1) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  if (max_tokens < 1) throw Error(ErrorCode::InvalidArgument, "max_tokens must be >= 1");
}

std::string ChatRequest::all_text() const {
  std::string out;
  for (const auto& m : messages)
    for (const auto& p : m.parts)
      if (const auto* t = std::get_if<TextPart>(&p)) {
        if (!out.empty()) out += "\n\n";
        out += t->text;
      }
  return out;
}

std::vector<const ImagePart*> ChatRequest::images() const {
  std::vector<const ImagePart*> out;
  for (const auto& m : messages)
    for (const auto& p : m.parts)
      if (const auto* i = std::get_if<ImagePart>(&p)) out.push_back(i);
  return out;
}

json to_json(const ChatRequest& req) {
  json msgs = json::array();
  for (const auto& m : req.messages) {
    json parts = json::array();
    for (const auto& p : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&p))
        parts.push_back({{"type", "text"}, {"text", t->text}});
      else {
        const auto& i = std::get<ImagePart>(p);
        parts.push_back({{"type", "image"}, {"media_type", i.media_type}, {"data", base64_encode(i.data)}});
      }
    }
    msgs.push_back({{"role", m.role}, {"parts", std::move(parts)}});
  }
  return {{"messages", std::move(msgs)},
          {"temperature", req.temperature},
          {"n_samples", req.n_samples},
          {"max_tokens", req.max_tokens}};
}

ChatRequest chat_request_from_json(const json& j) {
  ChatRequest req;
  for (const auto& m : j.at("messages")) {
    ChatMessage msg;
    msg.role = m.at("role").get<std::string>();
    for (const auto& p : m.at("parts")) {
      if (p.at("type") == "text")
        msg.parts.push_back(TextPart{p.at("text").get<std::string>()});
      else
        msg.parts.push_back(ImagePart{p.at("media_type").get<std::string>(), base64_decode(p.at("data").get<std::string>())});
    }
    req.messages.push_back(std::move(msg));
  }
  req.temperature = j.at("temperature").get<double>();
  req.n_samples = j.at("n_samples").get<int>();
  req.max_tokens = j.value("max_tokens", 4096);
  return req;
}

std::string request_fingerprint(const ChatRequest& req, const std::string& model_id) {
  json msgs = json::array();
  for (const auto& m : req.messages) {
    json parts = json::array();
    for (const auto& p : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&p))
        parts.push_back({{"text", t->text}});
      else
        parts.push_back({{"image_sha256", sha256_hex(std::get<ImagePart>(p).data)}});
    }
    msgs.push_back({{"role", m.role}, {"parts", std::move(parts)}});
  }
  json canon = {{"kind", "chat"},
                {"model", model_id},
                {"temperature", req.temperature},
                {"n", req.n_samples},
                {"messages", std::move(msgs)}};
  return sha256_hex(canon.dump());
}

std::string embedding_fingerprint(const std::string& text, const std::string& model_id) {
  json canon = {{"kind", "embedding"}, {"model", model_id}, {"text", text}};
  return sha256_hex(canon.dump());
}

// ---------------------------------------------------------------------------------------------

Price Price::per_million(double prompt_dollars, double completion_dollars) {
  // $x per 1e6 tokens == x * 1e6 picodollars per token.
  return {std::llround(prompt_dollars * 1e6), std::llround(completion_dollars * 1e6)};
}

PriceTable::PriceTable() {
  set("gpt-4o-2024-08-06", Price::per_million(2.50, 10.00));
  set("text-embedding-3-small", Price::per_million(0.02, 0.0));
}

std::int64_t PriceTable::cost_picodollars(const std::string& model_id, const TokenUsage& usage) const {
  auto it = prices_.find(model_id);
  if (it == prices_.end()) return 0;
  return usage.prompt_tokens * it->second.prompt_picodollars_per_token +
         usage.completion_tokens * it->second.completion_picodollars_per_token;
}

CostLedger::CostLedger(const CostLedger& other) {
  std::lock_guard lock(other.mutex_);
  entries_ = other.entries_;
  totals_ = other.totals_;
}

CostLedger& CostLedger::operator=(const CostLedger& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  entries_ = other.entries_;
  totals_ = other.totals_;
  return *this;
}

void CostLedger::append(LedgerEntry entry) {
  std::lock_guard lock(mutex_);
  totals_.prompt_tokens += entry.prompt_tokens;
  totals_.completion_tokens += entry.completion_tokens;
  totals_.picodollars += entry.picodollars;
  entries_.push_back(std::move(entry));
}

std::vector<LedgerEntry> CostLedger::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

LedgerTotals CostLedger::totals() const {
  std::lock_guard lock(mutex_);
  return totals_;
}

std::map<std::string, LedgerTotals> CostLedger::subtotals_by_stage() const {
  std::lock_guard lock(mutex_);
  std::map<std::string, LedgerTotals> out;
  for (const auto& e : entries_) {
    auto& t = out[e.stage];
    t.prompt_tokens += e.prompt_tokens;
    t.completion_tokens += e.completion_tokens;
    t.picodollars += e.picodollars;
  }
  return out;
}

json CostLedger::to_json() const {
  std::lock_guard lock(mutex_);
  json entries = json::array();
  for (const auto& e : entries_)
    entries.push_back({{"stage", e.stage},
                       {"model_id", e.model_id},
                       {"prompt_tokens", e.prompt_tokens},
                       {"completion_tokens", e.completion_tokens},
                       {"picodollars", e.picodollars}});
  return {{"entries", std::move(entries)},
          {"total",
           {{"prompt_tokens", totals_.prompt_tokens},
            {"completion_tokens", totals_.completion_tokens},
            {"picodollars", totals_.picodollars},
            {"dollars", totals_.dollars()}}}};
}

CostLedger CostLedger::from_json(const json& j) {
  CostLedger ledger;
  for (const auto& e : j.at("entries"))
    ledger.append({e.at("stage").get<std::string>(), e.value("model_id", std::string()),
                   e.at("prompt_tokens").get<std::int64_t>(), e.at("completion_tokens").get<std::int64_t>(),
                   e.at("picodollars").get<std::int64_t>()});
  return ledger;
}

LedgerTotals ledger_total(const CostLedger& ledger) { return ledger.totals(); }

// ---------------------------------------------------------------------------------------------

std::optional<Transcript::ChatRecord> Transcript::find_chat(const std::string& fingerprint) const {
  std::lock_guard lock(mutex_);
  auto it = chat_.find(fingerprint);
  if (it == chat_.end()) return std::nullopt;
  return it->second;
}

std::optional<Transcript::EmbeddingRecord> Transcript::find_embedding(const std::string& fingerprint) const {
  std::lock_guard lock(mutex_);
  auto it = embeddings_.find(fingerprint);
  if (it == embeddings_.end()) return std::nullopt;
  return it->second;
}

void Transcript::put_chat(const std::string& fingerprint, ChatRecord record) {
  std::lock_guard lock(mutex_);
  chat_[fingerprint] = std::move(record);
}

void Transcript::put_embedding(const std::string& fingerprint, EmbeddingRecord record) {
  std::lock_guard lock(mutex_);
  embeddings_[fingerprint] = std::move(record);
}

std::size_t Transcript::chat_count() const {
  std::lock_guard lock(mutex_);
  return chat_.size();
}

std::size_t Transcript::embedding_count() const {
  std::lock_guard lock(mutex_);
  return embeddings_.size();
}

std::string Transcript::serialize() const {
  std::lock_guard lock(mutex_);
  json chat = json::object();
  for (const auto& [fp, rec] : chat_)
    chat[fp] = {{"stage", rec.stage},
                {"model_id", rec.response.model_id},
                {"samples", rec.response.samples},
                {"prompt_tokens", rec.response.usage.prompt_tokens},
                {"completion_tokens", rec.response.usage.completion_tokens}};
  json emb = json::object();
  for (const auto& [fp, rec] : embeddings_)
    emb[fp] = {{"model_id", rec.model_id}, {"tokens", rec.tokens}, {"vector", rec.vector}};
  json doc = {{"chat", std::move(chat)}, {"embeddings", std::move(emb)}};
  return doc.dump(1) + "\n";
}

Transcript Transcript::parse(std::string_view text) {
  Transcript t;
  const json doc = json::parse(text);
  const json chat = doc.value("chat", json::object());
  const json embeddings = doc.value("embeddings", json::object());
  for (const auto& [fp, rec] : chat.items()) {
    ChatRecord r;
    r.stage = rec.value("stage", std::string());
    r.response.model_id = rec.value("model_id", std::string());
    r.response.samples = rec.at("samples").get<std::vector<std::string>>();
    r.response.usage = {rec.value("prompt_tokens", std::int64_t{0}), rec.value("completion_tokens", std::int64_t{0})};
    t.chat_[fp] = std::move(r);
  }
  for (const auto& [fp, rec] : embeddings.items())
    t.embeddings_[fp] = {rec.at("vector").get<std::vector<float>>(), rec.value("tokens", std::int64_t{0}),
                         rec.value("model_id", std::string())};
  return t;
}

Transcript Transcript::load(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  return parse(read_file(path));
}

void Transcript::save(const fs::path& path) const { write_file(path, serialize()); }

// ---------------------------------------------------------------------------------------------

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  if (!options_.sleep) options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

json HttpBackend::chat_payload(const ChatRequest& req, const std::string& model_id) {
  json msgs = json::array();
  for (const auto& m : req.messages) {
    json content = json::array();
    for (const auto& p : m.parts) {
      if (const auto* t = std::get_if<TextPart>(&p)) {
        content.push_back({{"type", "text"}, {"text", t->text}});
      } else {
        const auto& img = std::get<ImagePart>(p);
        content.push_back({{"type", "image_url"},
                           {"image_url", {{"url", "data:" + img.media_type + ";base64," + base64_encode(img.data)}}}});
      }
    }
    msgs.push_back({{"role", m.role}, {"content", std::move(content)}});
  }
  return {{"model", model_id},
          {"messages", std::move(msgs)},
          {"temperature", req.temperature},
          {"n", req.n_samples},
          {"max_tokens", req.max_tokens}};
}

json HttpBackend::post_with_retry(const std::string& url, const json& payload) {
  http::Headers headers;
  if (!options_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + options_.api_key);
  const std::string body = payload.dump();
  auto delay = options_.backoff_base;
  for (int attempt = 0;; ++attempt) {
    auto res = http::post_json(url, body, headers, options_.timeout);
    if (res.status >= 200 && res.status < 300) {
      try {
        return json::parse(res.body);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::EndpointUnreachable, url + " returned malformed JSON: " + e.what());
      }
    }
    const bool rate_limited = res.status == 429;
    const bool transient = res.status == 0 || res.status >= 500 || rate_limited;
    if (!transient) throw Error(ErrorCode::InvalidArgument, url + " rejected request (" + std::to_string(res.status) + "): " + res.body);
    if (attempt >= options_.max_retries) {
      if (rate_limited) throw Error(ErrorCode::RateLimited, url + " still rate limited after retries");
      throw Error(ErrorCode::EndpointUnreachable,
                  url + " unreachable: " + (res.status ? "HTTP " + std::to_string(res.status) : res.error));
    }
    spdlog::warn("{} failed (attempt {}), retrying in {} ms", url, attempt + 1, delay.count());
    options_.sleep(delay);
    delay *= 2;
  }
}

ChatResponse HttpBackend::complete(const ChatRequest& req, const std::string& model_id, std::string_view) {
  json out = post_with_retry(options_.chat_url, chat_payload(req, model_id));
  ChatResponse resp;
  resp.model_id = out.value("model", model_id);
  for (const auto& choice : out.at("choices")) {
    const auto& content = choice.at("message").at("content");
    resp.samples.push_back(content.is_string() ? content.get<std::string>() : std::string());
  }
  if (out.contains("usage")) {
    resp.usage.prompt_tokens = out["usage"].value("prompt_tokens", std::int64_t{0});
    resp.usage.completion_tokens = out["usage"].value("completion_tokens", std::int64_t{0});
  }
  if (static_cast<int>(resp.samples.size()) != req.n_samples)
    throw Error(ErrorCode::EndpointUnreachable, "endpoint returned " + std::to_string(resp.samples.size()) +
                                                    " samples, expected " + std::to_string(req.n_samples));
  return resp;
}

EmbeddingResponse HttpBackend::embed(const std::vector<std::string>& texts, const std::string& model_id) {
  json out = post_with_retry(options_.embeddings_url, {{"model", model_id}, {"input", texts}});
  EmbeddingResponse resp;
  resp.model_id = out.value("model", model_id);
  resp.vectors.resize(texts.size());
  std::size_t next = 0;
  for (const auto& item : out.at("data")) {
    std::size_t idx = item.contains("index") ? item["index"].get<std::size_t>() : next;
    if (idx >= texts.size()) throw Error(ErrorCode::EndpointUnreachable, "embedding index out of range");
    resp.vectors[idx] = item.at("embedding").get<std::vector<float>>();
    ++next;
  }
  if (out.contains("usage")) resp.usage.prompt_tokens = out["usage"].value("prompt_tokens", std::int64_t{0});
  return resp;
}

// ---------------------------------------------------------------------------------------------

std::int64_t estimate_tokens(std::string_view text) { return static_cast<std::int64_t>((text.size() + 3) / 4); }

std::vector<float> hash_embedding(std::string_view text, int dimension) {
  std::vector<float> v(static_cast<std::size_t>(dimension), 0.0f);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::uint64_t h = fnv1a64(token);
    v[h % static_cast<std::uint64_t>(dimension)] += (h >> 63) ? -1.0f : 1.0f;
    token.clear();
  };
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '_')
      token.push_back(static_cast<char>(std::tolower(u)));
    else
      flush();
  }
  flush();
  bool zero = true;
  for (float x : v) zero = zero && x == 0.0f;
  if (zero) v[fnv1a64(text) % static_cast<std::uint64_t>(dimension)] = 1.0f;
  return v;
}

ScriptedBackend ScriptedBackend::load(const fs::path& rules_path, int embedding_dimension) {
  json rules;
  try {
    rules = json::parse(read_file(rules_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, "model script " + rules_path.string() + ": " + e.what());
  }
  return ScriptedBackend(std::move(rules), rules_path.parent_path(), embedding_dimension);
}

ScriptedBackend::ScriptedBackend(json rules, fs::path base_dir, int embedding_dimension)
    : dimension_(embedding_dimension) {
  for (const auto& r : rules.at("rules")) {
    Rule rule;
    rule.stage = r.value("stage", std::string());
    rule.contains = r.value("contains", std::vector<std::string>{});
    rule.excludes = r.value("excludes", std::vector<std::string>{});
    for (const auto& img : r.value("images", std::vector<std::string>{}))
      rule.image_digests.push_back(sha256_hex(read_file(base_dir / img)));
    for (const auto& s : r.at("samples")) {
      if (s.is_string()) {
        rule.samples.push_back(s.get<std::string>());
        continue;
      }
      std::string text = s.contains("file") ? read_file(base_dir / s["file"].get<std::string>())
                                            : s.at("text").get<std::string>();
      int repeat = s.value("repeat", 1);
      for (int i = 0; i < repeat; ++i) rule.samples.push_back(text);
    }
    if (rule.samples.empty()) throw Error(ErrorCode::ConfigError, "scripted rule without samples");
    rules_.push_back(std::move(rule));
  }
}

ChatResponse ScriptedBackend::complete(const ChatRequest& req, const std::string& model_id, std::string_view stage) {
  const std::string text = req.all_text();
  std::vector<std::string> digests;
  for (const auto* img : req.images()) digests.push_back(sha256_hex(img->data));

  for (const auto& rule : rules_) {
    if (!rule.stage.empty() && rule.stage != stage) continue;
    bool ok = true;
    for (const auto& s : rule.contains) ok = ok && text.find(s) != std::string::npos;
    for (const auto& s : rule.excludes) ok = ok && text.find(s) == std::string::npos;
    for (const auto& d : rule.image_digests) ok = ok && std::find(digests.begin(), digests.end(), d) != digests.end();
    if (!ok) continue;

    ChatResponse resp;
    resp.model_id = model_id;
    for (int i = 0; i < req.n_samples; ++i) {
      const auto& s = rule.samples[static_cast<std::size_t>(i) % rule.samples.size()];
      resp.samples.push_back(s);
      resp.usage.completion_tokens += estimate_tokens(s);
    }
    resp.usage.prompt_tokens = estimate_tokens(text) + 85 * static_cast<std::int64_t>(digests.size());
    return resp;
  }
  throw Error(ErrorCode::ScriptMiss, "no scripted rule answers stage '" + std::string(stage) + "'");
}

EmbeddingResponse ScriptedBackend::embed(const std::vector<std::string>& texts, const std::string& model_id) {
  EmbeddingResponse resp;
  resp.model_id = model_id;
  for (const auto& t : texts) {
    resp.vectors.push_back(hash_embedding(t, dimension_));
    resp.usage.prompt_tokens += estimate_tokens(t);
  }
  return resp;
}

// ---------------------------------------------------------------------------------------------

std::string_view to_string(ProviderMode mode) {
  switch (mode) {
    case ProviderMode::Live: return "live";
    case ProviderMode::Record: return "record";
    case ProviderMode::Replay: return "replay";
  }
  return "replay";
}

ProviderMode provider_mode_from_string(std::string_view s) {
  if (s == "live") return ProviderMode::Live;
  if (s == "record") return ProviderMode::Record;
  if (s == "replay") return ProviderMode::Replay;
  throw Error(ErrorCode::InvalidArgument, "unknown provider mode '" + std::string(s) + "'");
}

Provider::Provider(ProviderOptions options, std::unique_ptr<ModelBackend> backend)
    : options_(std::move(options)), backend_(std::move(backend)), transcript_(std::make_unique<Transcript>()) {
  if (options_.mode == ProviderMode::Replay) {
    backend_.reset();  // replay never touches a backend
    if (!options_.transcript_path) throw Error(ErrorCode::ConfigError, "replay mode needs a transcript");
  } else if (!backend_) {
    throw Error(ErrorCode::ConfigError, "live/record mode needs a model backend");
  }
  if (options_.transcript_path && options_.mode != ProviderMode::Live)
    *transcript_ = Transcript::load(*options_.transcript_path);
}

Provider::~Provider() {
  try {
    flush();
  } catch (const std::exception& e) {
    spdlog::error("transcript flush failed: {}", e.what());
  }
}

void Provider::flush() {
  if (options_.mode == ProviderMode::Record && options_.transcript_path && dirty_.exchange(false))
    transcript_->save(*options_.transcript_path);
}

ChatResponse Provider::chat_complete(ChatRequest req, std::string_view stage) {
  if (req.max_tokens <= 0) req.max_tokens = options_.max_tokens;
  req.validate();
  const std::string fp = request_fingerprint(req, options_.chat_model);

  ChatResponse resp;
  if (options_.mode != ProviderMode::Live) {
    if (auto rec = transcript_->find_chat(fp)) resp = rec->response;
  }
  if (resp.samples.empty()) {
    if (options_.mode == ProviderMode::Replay)
      throw Error(ErrorCode::ReplayMiss, "stage '" + std::string(stage) + "' request " + fp.substr(0, 12) +
                                             " is not in the transcript");
    ++backend_calls_;
    resp = backend_->complete(req, options_.chat_model, stage);
    if (static_cast<int>(resp.samples.size()) != req.n_samples)
      throw Error(ErrorCode::EndpointUnreachable, "backend returned the wrong number of samples");
    if (options_.mode == ProviderMode::Record) {
      transcript_->put_chat(fp, {std::string(stage), resp});
      dirty_ = true;
    }
  }
  ledger_.append({std::string(stage), options_.chat_model, resp.usage.prompt_tokens, resp.usage.completion_tokens,
                  options_.prices.cost_picodollars(options_.chat_model, resp.usage)});
  return resp;
}

std::vector<std::vector<float>> Provider::embed_texts(const std::vector<std::string>& texts, std::string_view stage) {
  if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed_texts needs at least one text");
  for (const auto& t : texts)
    if (t.empty()) throw Error(ErrorCode::InvalidArgument, "embed_texts got an empty text");

  const std::string& model = options_.embedding_model;
  std::vector<std::vector<float>> out(texts.size());
  std::vector<std::int64_t> tokens(texts.size(), 0);
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::optional<Transcript::EmbeddingRecord> rec;
    if (options_.mode != ProviderMode::Live) rec = transcript_->find_embedding(embedding_fingerprint(texts[i], model));
    if (rec) {
      out[i] = rec->vector;
      tokens[i] = rec->tokens;
    } else {
      missing.push_back(i);
    }
  }
  if (!missing.empty()) {
    if (options_.mode == ProviderMode::Replay)
      throw Error(ErrorCode::ReplayMiss, "stage '" + std::string(stage) + "' embedding of " +
                                             std::to_string(missing.size()) + " text(s) is not in the transcript");
    std::vector<std::string> batch;
    for (auto i : missing) batch.push_back(texts[i]);
    ++backend_calls_;
    EmbeddingResponse resp = backend_->embed(batch, model);
    if (resp.vectors.size() != batch.size()) throw Error(ErrorCode::EndpointUnreachable, "embedding count mismatch");
    // Batch usage is apportioned evenly; the remainder goes to the first texts.
    const auto n = static_cast<std::int64_t>(batch.size());
    for (std::size_t k = 0; k < missing.size(); ++k) {
      const auto i = missing[k];
      out[i] = resp.vectors[k];
      tokens[i] = resp.usage.prompt_tokens / n + (static_cast<std::int64_t>(k) < resp.usage.prompt_tokens % n ? 1 : 0);
      if (options_.mode == ProviderMode::Record) {
        transcript_->put_embedding(embedding_fingerprint(texts[i], model), {out[i], tokens[i], model});
        dirty_ = true;
      }
    }
  }

  TokenUsage usage;
  const std::size_t dim = out.front().size();
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& v = out[i];
    if (v.size() != dim || dim == 0) throw Error(ErrorCode::DimensionMismatch, "embedding dimensions differ");
    double norm = 0.0;
    for (float x : v) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "zero embedding vector");
    for (float& x : v) x = static_cast<float>(x / norm);
    usage.prompt_tokens += tokens[i];
  }
  ledger_.append({std::string(stage), model, usage.prompt_tokens, 0, options_.prices.cost_picodollars(model, usage)});
  return out;
}

}  // namespace guirepair
